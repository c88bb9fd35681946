//! Brute-force verification of the closed forms in [`crate::cartan`].
//!
//! For an irreducible `p` of degree `d` and a partition `λ`, the model matrix
//! is the block diagonal of companion matrices of `p^{λ_i}` (each repeated
//! `m_i` times, parts ascending). Its centralizer is computed directly from
//! the linear system `T·B − B·T = 0`, and the Cartan entries, the radical and
//! the algebra dimension are measured on that explicit basis.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{EchelonBuilder, Matrix, SubspaceBasis};
use crate::polynomial::{is_irreducible, IrreducibleFactor, Poly};
use crate::structure::{extract_with_factor, PartitionData};

/// Placement of one companion block in the model matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockOffset {
    /// Index of the part `λ_i` (0-based, parts ascending).
    pub part_index: usize,
    /// Which of the `m_i` copies.
    pub copy_index: usize,
    pub offset: usize,
    /// `d·λ_i`
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelInstance {
    pub factor: IrreducibleFactor,
    pub partition: PartitionData,
    pub model_matrix: Matrix,
    pub block_offsets: Vec<BlockOffset>,
}

impl ModelInstance {
    pub fn dim(&self) -> usize {
        self.model_matrix.rows()
    }

    fn first_copy(&self, part_index: usize) -> &BlockOffset {
        self.block_offsets
            .iter()
            .find(|b| b.part_index == part_index && b.copy_index == 0)
            .expect("every part has a first copy")
    }

    /// Coordinates of all copies of part `part_index`.
    fn part_coords(&self, part_index: usize) -> Vec<usize> {
        self.block_offsets
            .iter()
            .filter(|b| b.part_index == part_index)
            .flat_map(|b| b.offset..b.offset + b.size)
            .collect()
    }

    /// The idempotent `e_{i1}`: coordinate projection onto the first copy of
    /// part `i`.
    pub fn idempotent(&self, part_index: usize) -> Matrix {
        let field = self.model_matrix.field();
        let b = self.first_copy(part_index);
        let mut e = Matrix::zero(field, self.dim(), self.dim());
        for k in b.offset..b.offset + b.size {
            e[(k, k)] = field.one();
        }
        e
    }
}

/// Builds the model for monic irreducible `p` and partition `λ`, checking
/// its characteristic polynomial and that the partition is recovered.
pub fn build_model(p: &Poly, partition: &PartitionData) -> Result<ModelInstance> {
    if !p.is_monic() || !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let field = p.field();
    let d = p.degree().expect("irreducible is nonconstant");
    let mut blocks = Vec::new();
    let mut block_offsets = Vec::new();
    let mut offset = 0;
    for (i, (part, mult)) in partition.iter().enumerate() {
        let comp = Matrix::companion(&p.pow(part as u64))?;
        for c in 0..mult as usize {
            block_offsets.push(BlockOffset { part_index: i, copy_index: c, offset, size: d * part as usize });
            offset += d * part as usize;
            blocks.push(comp.clone());
        }
    }
    let model_matrix = Matrix::block_diagonal(field, &blocks)?;
    let e = partition.size();
    let factor = IrreducibleFactor::new(p.clone(), e as usize);
    if model_matrix.charpoly()? != p.pow(e) {
        return Err(Error::VerificationFailure(format!(
            "model charpoly is not ({p})^{e}"
        )));
    }
    let comp = extract_with_factor(&model_matrix, &factor)?;
    if &comp.partition != partition {
        return Err(Error::VerificationFailure(format!(
            "model recovers partition {} instead of {partition}",
            comp.partition
        )));
    }
    Ok(ModelInstance { factor, partition: partition.clone(), model_matrix, block_offsets })
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.as_slice().to_vec()
}

fn unflatten(field: FieldSpec, n: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_flat(field, n, n, v.to_vec()).expect("n² entries")
}

fn commutes(t: &Matrix, b: &Matrix) -> Result<bool> {
    Ok(t.mul(b)? == b.mul(t)?)
}

/// Canonical basis of `{B : T·B = B·T}` as row-major flattened `n×n`
/// matrices.
pub fn centralizer_basis(t: &Matrix) -> Result<SubspaceBasis> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch("centralizer needs a square matrix".into()));
    }
    let field = t.field();
    let n = t.rows();
    let nn = n * n;
    // Row (i,k) of T·B − B·T in the unknowns B[j][l] at column j*n + l.
    let mut sys = Matrix::zero(field, nn, nn);
    for i in 0..n {
        for k in 0..n {
            let row = i * n + k;
            for j in 0..n {
                let tij = &t[(i, j)];
                if !tij.is_zero() {
                    sys[(row, j * n + k)] = &sys[(row, j * n + k)] + tij;
                }
                let tjk = &t[(j, k)];
                if !tjk.is_zero() {
                    sys[(row, i * n + j)] = &sys[(row, i * n + j)] - tjk;
                }
            }
        }
    }
    let (_, basis) = sys.rank_and_nullspace();
    for v in basis.vectors() {
        if !commutes(t, &unflatten(field, n, v))? {
            return Err(Error::VerificationFailure("centralizer basis element does not commute".into()));
        }
    }
    if !basis.contains(&flatten(&Matrix::identity(field, n))) {
        return Err(Error::VerificationFailure("identity is not in the centralizer span".into()));
    }
    Ok(basis)
}

pub fn basis_matrices(basis: &SubspaceBasis, n: usize) -> Vec<Matrix> {
    basis
        .vectors()
        .iter()
        .map(|v| unflatten(basis.field(), n, v))
        .collect()
}

/// `dim_K span{ e_{j1}·B·e_{i1} : B in the centralizer }`, parts 0-based.
/// Should equal `d·min(λ_i, λ_j)`.
pub fn idempotent_compression_dim(model: &ModelInstance, i: usize, j: usize) -> Result<usize> {
    let basis = centralizer_basis(&model.model_matrix)?;
    compression_dim(model, &basis_matrices(&basis, model.dim()), i, j)
}

fn compression_dim(model: &ModelInstance, algebra: &[Matrix], i: usize, j: usize) -> Result<usize> {
    let r = model.partition.num_parts();
    if i >= r || j >= r {
        return Err(Error::IndexOutOfRange(format!("part indices ({i}, {j}) with r = {r}")));
    }
    let (ei, ej) = (model.idempotent(i), model.idempotent(j));
    for e in [&ei, &ej] {
        if !commutes(&model.model_matrix, e)? {
            return Err(Error::VerificationFailure("idempotent is not in the centralizer".into()));
        }
    }
    let n = model.dim();
    let mut span = EchelonBuilder::new(model.model_matrix.field(), n * n);
    for b in algebra {
        span.insert(&flatten(&ej.mul(b)?.mul(&ei)?));
    }
    Ok(span.dim())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCheckReport {
    pub dim_algebra: usize,
    pub dim_radical: usize,
    /// `d·Σ m_j²`
    pub quotient_dim: usize,
    /// Smallest `k` with `R^k = 0`.
    pub nilpotency_index: usize,
    /// `λ_r·r`
    pub nilpotency_bound: usize,
}

/// The candidate radical: centralizer elements `B` such that, for every part
/// `j`, the diagonal block of `B` on all copies of `λ_j` maps into the image
/// of `p(model)` there. Checks that it is a two-sided ideal, that
/// `R^{λ_r·r} = 0`, and that the quotient has dimension `d·Σ m_j²`.
pub fn radical_checks(model: &ModelInstance) -> Result<RadicalCheckReport> {
    let basis = centralizer_basis(&model.model_matrix)?;
    radical_checks_with(model, &basis_matrices(&basis, model.dim()))
}

fn radical_basis(model: &ModelInstance, algebra: &[Matrix]) -> Result<Vec<Matrix>> {
    let field = model.model_matrix.field();
    let n = model.dim();
    let pm = model.factor.poly.eval_at_matrix(&model.model_matrix)?;
    // Each row: one linear functional on the coordinates x_s of B = Σ x_s A_s.
    let mut equations: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..model.partition.num_parts() {
        let coords = model.part_coords(j);
        let block = pm.select(&coords, &coords);
        // Functionals vanishing on the image of p(model) in this component.
        let (_, annihilator) = block.transpose().rank_and_nullspace();
        for y in annihilator.vectors() {
            for &col in &coords {
                let row: Vec<Scalar> = algebra
                    .iter()
                    .map(|a| {
                        coords
                            .iter()
                            .zip(y)
                            .filter(|(_, yk)| !yk.is_zero())
                            .fold(field.zero(), |acc, (&rk, yk)| &acc + &(yk * &a[(rk, col)]))
                    })
                    .collect();
                equations.push(row);
            }
        }
    }
    if equations.is_empty() {
        return Ok(algebra.to_vec());
    }
    let rows = equations.len();
    let sys = Matrix::from_flat(field, rows, algebra.len(), equations.into_iter().flatten().collect())?;
    let (_, sol) = sys.rank_and_nullspace();
    sol.vectors()
        .iter()
        .map(|x| {
            let mut acc = Matrix::zero(field, n, n);
            for (c, a) in x.iter().zip(algebra) {
                if !c.is_zero() {
                    acc = acc.add(&a.scalar_mul(c)?)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

fn radical_checks_with(model: &ModelInstance, algebra: &[Matrix]) -> Result<RadicalCheckReport> {
    let field = model.model_matrix.field();
    let n = model.dim();
    let radical = radical_basis(model, algebra)?;
    let rad_span = SubspaceBasis::from_vectors(field, n * n, radical.iter().map(flatten).collect());
    let d = model.factor.degree;
    let quotient_dim = d * model.partition.mults().iter().map(|&m| (m as usize).pow(2)).sum::<usize>();
    let nilpotency_bound = model.partition.largest() as usize * model.partition.num_parts();

    for a in algebra {
        for r in &radical {
            if !rad_span.contains(&flatten(&a.mul(r)?)) || !rad_span.contains(&flatten(&r.mul(a)?)) {
                return Err(Error::VerificationFailure("radical_ideal: A·R or R·A leaves R".into()));
            }
        }
    }

    // R^k as a subspace: the span of all products of k radical elements.
    let mut power = radical.clone();
    let mut index = 1;
    while !power.is_empty() {
        if index >= nilpotency_bound {
            return Err(Error::VerificationFailure(format!(
                "radical_nilpotent: R^{nilpotency_bound} is nonzero"
            )));
        }
        let mut span = EchelonBuilder::new(field, n * n);
        let mut next = Vec::new();
        for s in &power {
            for r in &radical {
                let prod = s.mul(r)?;
                if span.insert(&flatten(&prod)) {
                    next.push(prod);
                }
            }
        }
        power = next;
        index += 1;
    }

    if radical.len() + quotient_dim != algebra.len() {
        return Err(Error::VerificationFailure(format!(
            "radical_quotient: dim A = {}, dim R = {}, expected quotient {quotient_dim}",
            algebra.len(),
            radical.len()
        )));
    }
    Ok(RadicalCheckReport {
        dim_algebra: algebra.len(),
        dim_radical: radical.len(),
        quotient_dim,
        nilpotency_index: index,
        nilpotency_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub factor: Poly,
    pub partition: PartitionData,
    pub checks: Vec<CheckResult>,
    pub centralizer_dim: Option<usize>,
    pub radical: Option<RadicalCheckReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {}, λ = {}", self.factor, self.partition)
    }
}

/// Names of the checks run by [`verify_instance`], in order.
pub const CHECK_NAMES: [&str; 8] = [
    "model",
    "centralizer_dimension",
    "closure",
    "cartan_entries",
    "radical_ideal",
    "radical_nilpotent",
    "radical_quotient",
    "partition_roundtrip",
];

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, passed, detail: detail.into() }
}

/// Runs every oracle check on one `(p, λ)`. Individual failures are
/// recorded in the report; an `Err` means the instance could not be set up.
pub fn verify_instance(p: &Poly, partition: &PartitionData) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        factor: p.clone(),
        partition: partition.clone(),
        checks: Vec::new(),
        centralizer_dim: None,
        radical: None,
    };
    let model = match build_model(p, partition) {
        Ok(m) => m,
        Err(Error::VerificationFailure(msg)) => {
            report.checks.push(check("model", false, msg));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.checks.push(check("model", true, ""));
    let n = model.dim();
    let d = model.factor.degree;

    let basis = centralizer_basis(&model.model_matrix)?;
    let algebra = basis_matrices(&basis, n);
    let expected: usize = partition
        .iter()
        .flat_map(|(a, ma)| partition.iter().map(move |(b, mb)| (a.min(b) * ma * mb) as usize))
        .sum::<usize>()
        * d;
    report.centralizer_dim = Some(algebra.len());
    report.checks.push(check(
        "centralizer_dimension",
        algebra.len() == expected,
        format!("dim = {}, formula = {expected}", algebra.len()),
    ));

    let mut closed = true;
    'outer: for a in &algebra {
        for b in &algebra {
            if !commutes(&model.model_matrix, &a.mul(b)?)? {
                closed = false;
                break 'outer;
            }
        }
    }
    report.checks.push(check("closure", closed, ""));

    let parts = partition.parts();
    let mut bad = Vec::new();
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            let got = compression_dim(&model, &algebra, i, j)?;
            let want = d * parts[i].min(parts[j]) as usize;
            if got != want {
                bad.push(format!("({i},{j}): {got} != {want}"));
            }
        }
    }
    report.checks.push(check("cartan_entries", bad.is_empty(), bad.join("; ")));

    match radical_checks_with(&model, &algebra) {
        Ok(rad) => {
            for name in ["radical_ideal", "radical_nilpotent", "radical_quotient"] {
                report.checks.push(check(name, true, ""));
            }
            report.radical = Some(rad);
        }
        Err(Error::VerificationFailure(msg)) => {
            let failed = msg.split(':').next().unwrap_or_default().to_string();
            for name in ["radical_ideal", "radical_nilpotent", "radical_quotient"] {
                let ok = name != failed;
                report.checks.push(check(name, ok, if ok { String::new() } else { msg.clone() }));
            }
        }
        Err(e) => return Err(e),
    }

    let roundtrip = extract_with_factor(&model.model_matrix, &model.factor)?;
    report.checks.push(check(
        "partition_roundtrip",
        &roundtrip.partition == partition,
        format!("recovered {}", roundtrip.partition),
    ));
    Ok(report)
}

/// Random monic irreducible of degree `d`; over ℚ coefficients lie in
/// `[-3, 3]`.
pub fn random_irreducible(rng: &mut impl Rng, field: FieldSpec, d: usize) -> Result<Poly> {
    loop {
        let mut coeffs: Vec<Scalar> = (0..d)
            .map(|_| match field {
                FieldSpec::Rationals => field.from_i64(rng.random_range(-3..=3)),
                FieldSpec::Prime(p) => field.from_i64(rng.random_range(0..p as i64)),
            })
            .collect();
        coeffs.push(field.one());
        let p = Poly::new(field, coeffs);
        if is_irreducible(&p)? {
            return Ok(p);
        }
    }
}

/// Random partition of a random size in `1..=max_size`.
pub fn random_partition(rng: &mut impl Rng, max_size: u32) -> PartitionData {
    let size = rng.random_range(1..=max_size.max(1));
    let mut left = size;
    let mut parts = Vec::new();
    while left > 0 {
        let p = rng.random_range(1..=left);
        parts.push(p);
        left -= p;
    }
    PartitionData::from_multiset(&parts).expect("positive parts")
}

/// Random `(p, λ)` with `deg p ≤ 3` and model dimension at most `max_dim`.
pub fn random_instance(rng: &mut impl Rng, field: FieldSpec, max_dim: usize) -> Result<(Poly, PartitionData)> {
    if max_dim == 0 {
        return Err(Error::InvalidArgument("max_dim must be at least 1".into()));
    }
    let d = rng.random_range(1..=max_dim.min(3));
    let p = random_irreducible(rng, field, d)?;
    let lambda = random_partition(rng, (max_dim / d) as u32);
    Ok((p, lambda))
}

/// `count` instances from a fixed seed; the sequence depends only on the
/// arguments.
pub fn random_instances(seed: u64, field: FieldSpec, max_dim: usize, count: usize) -> Result<Vec<(Poly, PartitionData)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng, field, max_dim)).collect()
}

/// Verifies a batch of instances in parallel; results keep the input order.
pub fn verify_batch(instances: &[(Poly, PartitionData)]) -> Vec<Result<VerificationReport>> {
    instances
        .par_iter()
        .map(|(p, lambda)| verify_instance(p, lambda))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn part(parts: &[u32], mults: &[u32]) -> PartitionData {
        PartitionData::new(parts.to_vec(), mults.to_vec()).unwrap()
    }

    #[test]
    fn centralizer_examples() {
        assert_eq!(centralizer_basis(&Matrix::identity(q(), 3)).unwrap().dim(), 9);
        let j3 = Matrix::jordan_block(q(), &q().zero(), 3);
        let basis = centralizer_basis(&j3).unwrap();
        assert_eq!(basis.dim(), 3);
        for k in 0..3 {
            assert!(basis.contains(&flatten(&j3.pow(k).unwrap())));
        }
        let diag = Matrix::from_i64_rows(q(), &[&[1, 0], &[0, 2]]);
        let basis = centralizer_basis(&diag).unwrap();
        assert_eq!(basis.dim(), 2);
        for m in basis_matrices(&basis, 2) {
            assert!(m[(0, 1)].is_zero() && m[(1, 0)].is_zero());
        }
    }

    #[test]
    fn model_examples() {
        let t = Poly::t(q());
        let m = build_model(&t, &part(&[2], &[1])).unwrap();
        assert_eq!(m.model_matrix, Matrix::companion(&Poly::parse(q(), "t^2").unwrap()).unwrap());

        let p = Poly::parse(q(), "t-1").unwrap();
        let m = build_model(&p, &part(&[1], &[2])).unwrap();
        assert_eq!(m.model_matrix, Matrix::identity(q(), 2));

        let p = Poly::parse(q(), "t^2+1").unwrap();
        let m = build_model(&p, &part(&[1, 2], &[1, 1])).unwrap();
        assert_eq!(m.dim(), 6);
        assert_eq!(m.model_matrix.charpoly().unwrap(), p.pow(3));
        assert_eq!(m.block_offsets[1], BlockOffset { part_index: 1, copy_index: 0, offset: 2, size: 4 });

        assert!(matches!(
            build_model(&Poly::parse(q(), "t^2-1").unwrap(), &part(&[1], &[1])),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn compression_examples() {
        let m = build_model(&Poly::t(q()), &part(&[1, 2], &[1, 1])).unwrap();
        assert_eq!(idempotent_compression_dim(&m, 0, 1).unwrap(), 1);
        assert_eq!(idempotent_compression_dim(&m, 1, 1).unwrap(), 2);
        assert!(matches!(
            idempotent_compression_dim(&m, 2, 0),
            Err(Error::IndexOutOfRange(_))
        ));

        let m = build_model(&Poly::parse(q(), "t^2+1").unwrap(), &part(&[1, 2], &[1, 1])).unwrap();
        assert_eq!(idempotent_compression_dim(&m, 1, 1).unwrap(), 4);
        assert_eq!(idempotent_compression_dim(&m, 0, 1).unwrap(), 2);

        let m = build_model(&Poly::t(q()), &part(&[1, 3], &[2, 1])).unwrap();
        assert_eq!(idempotent_compression_dim(&m, 0, 0).unwrap(), 1);
    }

    #[test]
    fn radical_examples() {
        let t = Poly::t(q());
        let r = radical_checks(&build_model(&t, &part(&[1], &[2])).unwrap()).unwrap();
        assert_eq!((r.dim_radical, r.quotient_dim, r.nilpotency_index), (0, 4, 1));

        let r = radical_checks(&build_model(&t, &part(&[2], &[1])).unwrap()).unwrap();
        assert_eq!(r.dim_radical, 1);
        assert!(r.nilpotency_index <= 2);

        let r = radical_checks(&build_model(&t, &part(&[1, 2], &[1, 1])).unwrap()).unwrap();
        assert_eq!((r.dim_algebra, r.dim_radical, r.quotient_dim), (5, 3, 2));
        assert!(r.nilpotency_index <= 4);
    }

    #[test]
    fn verify_examples() {
        let rep = verify_instance(&Poly::t(q()), &part(&[1, 2], &[1, 1])).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
        assert_eq!(rep.checks.len(), CHECK_NAMES.len());

        let f3 = FieldSpec::Prime(3);
        let rep = verify_instance(&Poly::parse(f3, "t^2+1").unwrap(), &part(&[2], &[1])).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.centralizer_dim, Some(4));

        let rep = verify_instance(&Poly::t(q()), &part(&[1], &[1])).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.radical.unwrap().dim_radical, 0);
    }

    #[test]
    fn random_instances_respect_bounds() {
        let inst = random_instances(3, FieldSpec::Prime(5), 10, 30).unwrap();
        for (p, lambda) in &inst {
            assert!(p.degree().unwrap() as u64 * lambda.size() <= 10);
        }
        assert_eq!(inst, random_instances(3, FieldSpec::Prime(5), 10, 30).unwrap());
        for (p, lambda) in random_instances(0, q(), 1, 5).unwrap() {
            assert_eq!(p.degree(), Some(1));
            assert_eq!(lambda, part(&[1], &[1]));
        }
    }
}
