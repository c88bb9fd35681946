//! The `cartan` command line: argument parsing, the matrix file format and
//! report serialization. [`run`] is the whole program minus process exit so
//! it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::cartan::{assemble_report_with, cartan_profile, AnalysisReport, AnalyzeOptions, CartanProfile};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::oracle::{random_instances, verify_batch, CHECK_NAMES};
use crate::polynomial::{factor_with_seed, Poly};
use crate::structure::PartitionData;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cartan", version, about = "Cartan invariants of the centralizer algebra of a matrix")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze the centralizer algebra of the matrix in a file.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also emit the full block-diagonal Cartan matrix.
        #[arg(long)]
        full_cartan: bool,
        /// Seed for the randomized factorization.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cartan data of M_λ(E) directly from a partition.
    Cartan {
        /// Strictly increasing parts, e.g. `1^2,3,5^4`.
        #[arg(long)]
        partition: String,
        /// Degree d = [E:K] of the irreducible factor.
        #[arg(long, default_value_t = 1)]
        ext_degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the closed forms against the brute-force oracle on random instances.
    Verify {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest model matrix size.
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Factor a monic polynomial given inline or in a file.
    Factor {
        path: Option<PathBuf>,
        #[arg(long, conflicts_with = "path")]
        poly: Option<String>,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VerificationFailure(_) => EXIT_VERIFICATION,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Parses the matrix file format:
///
/// ```text
/// field: gf:5
/// n: 2
/// 1 2
/// 0 4
/// ```
pub fn parse_matrix_file(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().map(str::trim_end);
    let field_line = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let field: FieldSpec = field_line
        .strip_prefix("field:")
        .ok_or_else(|| Error::Parse(format!("expected `field: q|gf:<p>`, got `{field_line}`")))?
        .trim()
        .parse()?;
    let n_line = lines.next().ok_or_else(|| Error::Parse("missing `n:` line".into()))?;
    let n: usize = n_line
        .strip_prefix("n:")
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("expected `n: <dim>` with dim ≥ 1, got `{n_line}`")))?;
    let mut rows = Vec::with_capacity(n);
    for line in lines.by_ref() {
        if rows.len() == n {
            if !line.trim().is_empty() {
                return Err(Error::Parse(format!("more than {n} rows")));
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| field.parse_scalar(tok))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!("row {} has {} entries, expected {n}", rows.len() + 1, row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("found {} rows, expected {n}", rows.len())));
    }
    Matrix::from_rows(field, rows)
}

/// Inverse of [`parse_matrix_file`].
pub fn format_matrix_file(t: &Matrix) -> String {
    format!("field: {}\nn: {}\n{}", t.field(), t.rows(), t)
}

struct Int<'a>(&'a BigUint);

// Plain JSON numbers whenever they fit; decimal strings beyond u128.
impl Serialize for Int<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_u64() {
            s.serialize_u64(v)
        } else if let Some(v) = self.0.to_u128() {
            s.serialize_u128(v)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

#[derive(Serialize)]
struct JsonPartition<'a> {
    parts: &'a [u32],
    mults: &'a [u32],
}

#[derive(Serialize)]
struct JsonDims<'a> {
    algebra: u64,
    radical: u64,
    simples: &'a [u64],
    projectives: &'a [u64],
    injectives: &'a [u64],
}

#[derive(Serialize)]
struct JsonBlock<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    factor: Option<String>,
    degree: usize,
    partition: JsonPartition<'a>,
    cartan: &'a [Vec<u64>],
    cartan_det: Int<'a>,
    global_dimension: String,
    semisimple: bool,
    dims: JsonDims<'a>,
}

impl<'a> JsonBlock<'a> {
    fn new(factor: Option<&Poly>, p: &'a CartanProfile) -> Self {
        JsonBlock {
            factor: factor.map(Poly::to_string),
            degree: p.degree,
            partition: JsonPartition { parts: p.partition.parts(), mults: p.partition.mults() },
            cartan: &p.cartan,
            cartan_det: Int(&p.cartan_det),
            global_dimension: p.global_dimension.to_string(),
            semisimple: p.semisimple,
            dims: JsonDims {
                algebra: p.dim_algebra,
                radical: p.dim_radical,
                simples: &p.simple_dims,
                projectives: &p.projective_dims,
                injectives: &p.injective_dims,
            },
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    field: String,
    n: usize,
    charpoly: String,
    blocks: Vec<JsonBlock<'a>>,
    l: usize,
    total_cartan_det: Int<'a>,
    overall_global_dimension: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    full_cartan: Option<Vec<Vec<u64>>>,
}

pub fn report_json(report: &AnalysisReport, full_cartan: bool) -> String {
    let json = JsonReport {
        field: report.field.to_string(),
        n: report.n,
        charpoly: report.charpoly.to_string(),
        blocks: report
            .blocks
            .iter()
            .map(|b| JsonBlock::new(Some(&b.factor.poly), &b.profile))
            .collect(),
        l: report.total_num_simples,
        total_cartan_det: Int(&report.total_cartan_det),
        overall_global_dimension: report.overall_global_dimension.to_string(),
        full_cartan: full_cartan.then(|| report.full_cartan()),
    };
    serde_json::to_string_pretty(&json).expect("report serializes") + "\n"
}

/// JSON for a partition-only profile (the `cartan` subcommand).
pub fn profile_json(profile: &CartanProfile) -> String {
    serde_json::to_string_pretty(&JsonBlock::new(None, profile)).expect("profile serializes") + "\n"
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn write_matrix(out: &mut String, indent: &str, m: &[Vec<u64>]) {
    for row in m {
        let _ = writeln!(out, "{indent}{}", list(row));
    }
}

fn profile_text(out: &mut String, indent: &str, p: &CartanProfile) {
    let _ = writeln!(out, "{indent}partition: {}", p.partition);
    let _ = writeln!(out, "{indent}cartan:");
    write_matrix(out, &format!("{indent}  "), &p.cartan);
    let _ = writeln!(out, "{indent}cartan_det: {}", p.cartan_det);
    let _ = writeln!(out, "{indent}global_dimension: {}", p.global_dimension);
    let _ = writeln!(out, "{indent}semisimple: {}", p.semisimple);
    let _ = writeln!(out, "{indent}dim algebra: {}", p.dim_algebra);
    let _ = writeln!(out, "{indent}dim radical: {}", p.dim_radical);
    let _ = writeln!(out, "{indent}dim simples: {}", list(&p.simple_dims));
    let _ = writeln!(out, "{indent}dim projectives: {}", list(&p.projective_dims));
    let _ = writeln!(out, "{indent}dim injectives: {}", list(&p.injective_dims));
}

pub fn report_text(report: &AnalysisReport, full_cartan: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input sha256: {}", report.input_checksum);
    let _ = writeln!(out, "field: {}", report.field);
    let _ = writeln!(out, "n: {}", report.n);
    let _ = writeln!(out, "charpoly: {}", report.charpoly);
    for (k, b) in report.blocks.iter().enumerate() {
        let _ = writeln!(out, "block {}: factor {}, degree {}", k + 1, b.factor.poly, b.factor.degree);
        profile_text(&mut out, "  ", &b.profile);
    }
    let _ = writeln!(out, "l: {}", report.total_num_simples);
    let _ = writeln!(out, "total_cartan_det: {}", report.total_cartan_det);
    let _ = writeln!(out, "overall_global_dimension: {}", report.overall_global_dimension);
    if full_cartan {
        let _ = writeln!(out, "full_cartan:");
        write_matrix(&mut out, "  ", &report.full_cartan());
    }
    out
}

/// `(t+2)(t+3)`, with `^e` for repeated factors.
pub fn format_factorization(factors: &[crate::polynomial::IrreducibleFactor]) -> String {
    factors
        .iter()
        .map(|f| match f.multiplicity {
            1 => format!("({})", f.poly.to_compact_string()),
            e => format!("({})^{e}", f.poly.to_compact_string()),
        })
        .collect()
}

fn cmd_analyze(path: &PathBuf, format: Format, full_cartan: bool, seed: u64) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let t = parse_matrix_file(&text)?;
    let report = assemble_report_with(&t, AnalyzeOptions { seed, self_check: true })?;
    Ok(match format {
        Format::Json => report_json(&report, full_cartan),
        Format::Text => report_text(&report, full_cartan),
    })
}

fn cmd_cartan(partition: &str, ext_degree: usize, format: Format) -> Result<String> {
    let lambda: PartitionData = partition.parse()?;
    let profile = cartan_profile(&lambda, ext_degree)?;
    Ok(match format {
        Format::Json => profile_json(&profile),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "degree: {ext_degree}");
            profile_text(&mut out, "", &profile);
            out
        }
    })
}

fn cmd_verify(trials: usize, seed: u64, max_dim: usize, field: &str) -> Result<(String, bool)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    if max_dim == 0 {
        return Err(Error::InvalidArgument("--max-dim must be at least 1".into()));
    }
    let field: FieldSpec = field.parse()?;
    let instances = random_instances(seed, field, max_dim, trials)?;
    let results = verify_batch(&instances);
    let mut tally = [0usize; CHECK_NAMES.len()];
    let mut failures = Vec::new();
    let mut passed = 0;
    for ((p, lambda), res) in instances.iter().zip(&results) {
        match res {
            Ok(rep) => {
                for c in &rep.checks {
                    if c.passed {
                        let k = CHECK_NAMES.iter().position(|&n| n == c.name).expect("known check");
                        tally[k] += 1;
                    }
                }
                if rep.passed() {
                    passed += 1;
                } else {
                    for c in rep.failures() {
                        failures.push(format!("p = {p}, λ = {lambda}: {} ({})", c.name, c.detail));
                    }
                }
            }
            Err(Error::Internal(msg)) => return Err(Error::Internal(format!("p = {p}, λ = {lambda}: {msg}"))),
            Err(e) => failures.push(format!("p = {p}, λ = {lambda}: {e}")),
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "field {field}, seed {seed}, max dim {max_dim}");
    for (name, n) in CHECK_NAMES.iter().zip(tally) {
        let _ = writeln!(out, "  {name:<22} {n}/{trials}");
    }
    for f in &failures {
        let _ = writeln!(out, "FAIL {f}");
    }
    let _ = writeln!(out, "{passed}/{trials} instances passed");
    Ok((out, passed == trials))
}

fn cmd_factor(path: Option<&PathBuf>, poly: Option<&str>, field: &str, seed: u64) -> Result<String> {
    let field: FieldSpec = field.parse()?;
    let text = match (path, poly) {
        (_, Some(s)) => s.to_string(),
        (Some(p), None) => std::fs::read_to_string(p)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?,
        (None, None) => return Err(Error::InvalidArgument("give a file or --poly".into())),
    };
    let f = Poly::parse(field, text.trim())?;
    if f.is_constant() || !f.is_monic() {
        return Err(Error::InvalidArgument(format!("`{f}` is not a monic nonconstant polynomial")));
    }
    let factors = factor_with_seed(&f, seed)?;
    let product = Poly::product(field, factors.iter().map(|x| (&x.poly, x.multiplicity as u64)));
    if product != f {
        return Err(Error::Internal(format!("factor product {product} differs from {f}")));
    }
    let mut out = format_factorization(&factors) + "\n";
    if let [only] = factors.as_slice() {
        if only.multiplicity == 1 {
            out.push_str("irreducible\n");
        }
    }
    Ok(out)
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze { path, format, full_cartan, seed } => {
            cmd_analyze(path, *format, *full_cartan, *seed).map(|s| (s, true))
        }
        Command::Cartan { partition, ext_degree, format } => {
            cmd_cartan(partition, *ext_degree, *format).map(|s| (s, true))
        }
        Command::Verify { trials, seed, max_dim, field } => cmd_verify(*trials, *seed, *max_dim, field),
        Command::Factor { path, poly, field, seed } => {
            cmd_factor(path.as_ref(), poly.as_deref(), field, *seed).map(|s| (s, true))
        }
    };
    match result {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["cartan"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn matrix_file_round_trip() {
        let t = parse_matrix_file("field: gf:5\nn: 2\n1 2\n0 -1\n").unwrap();
        assert_eq!(t[(1, 1)], FieldSpec::Prime(5).from_i64(4));
        assert_eq!(parse_matrix_file(&format_matrix_file(&t)).unwrap(), t);
        let q = parse_matrix_file("field: q\nn: 1\n-3/6\n\n").unwrap();
        assert_eq!(q[(0, 0)].to_string(), "-1/2");
    }

    #[test]
    fn matrix_file_errors() {
        for bad in [
            "",
            "field: gf:6\nn: 1\n0\n",
            "field: q\nn: 2\n1 2\n3\n",
            "field: q\nn: 2\n1 2\n",
            "field: q\nn: 1\n1\n2\n",
            "n: 1\nfield: q\n1\n",
            "field: q\nn: 0\n",
            "field: q\nn: 1\nx\n",
        ] {
            assert!(matches!(parse_matrix_file(bad), Err(Error::Parse(_) | Error::Primality(_))), "{bad:?}");
        }
    }

    #[test]
    fn cartan_command() {
        let (code, out, _) = run_str(&["cartan", "--partition", "1,2,5"]);
        assert_eq!(code, 0);
        assert!(out.contains("cartan_det: 3"));
        assert!(out.contains("global_dimension: infinite"));
        assert!(out.contains("  [1, 2, 5]"));

        let (code, out, _) = run_str(&["cartan", "--partition", "1^2,2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cartan_det"], 1);
        assert_eq!(v["global_dimension"], "finite:2");

        assert_eq!(run_str(&["cartan", "--partition", "2,2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["cartan", "--partition", "1", "--ext-degree", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn factor_command() {
        assert_eq!(run_str(&["factor", "--poly", "t^2+1", "--field", "gf:5"]).1, "(t+2)(t+3)\n");
        assert_eq!(run_str(&["factor", "--poly", "t^2+1", "--field", "gf:3"]).1, "(t^2+1)\nirreducible\n");
        assert_eq!(run_str(&["factor", "--poly", "t^4-1"]).1, "(t-1)(t+1)(t^2+1)\n");
        assert_eq!(run_str(&["factor", "--poly", "t^3+t^2", "--field", "gf:2"]).1, "(t)^2(t+1)\n");
        assert_eq!(run_str(&["factor", "--poly", "2t+1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["factor", "--poly", "t^"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["factor"]).0, EXIT_USAGE);
    }

    #[test]
    fn verify_command() {
        let (code, out, _) = run_str(&["verify", "--trials", "1", "--seed", "0", "--max-dim", "1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.ends_with("1/1 instances passed\n"));
        assert_eq!(run_str(&["verify", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--max-dim", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--field", "gf:4"]).0, EXIT_USAGE);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&[]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["analyze", "/nonexistent/matrix.txt"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }
}
