//! Reduction to the primary case: for each irreducible factor `p` of the
//! characteristic polynomial, read the partition of its primary component off
//! the nullities of `p(T)^k`, without building a canonical form.

use std::fmt;
use std::str::FromStr;


use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polynomial::{factor_with_seed, IrreducibleFactor, Poly};

/// `λ = (λ_1^{m_1}, …, λ_r^{m_r})` with strictly increasing distinct parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionData {
    parts: Vec<u32>,
    mults: Vec<u32>,
}

impl PartitionData {
    pub fn new(parts: Vec<u32>, mults: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.len() != mults.len() {
            return Err(Error::InvalidPartition(format!(
                "{} parts but {} multiplicities",
                parts.len(),
                mults.len()
            )));
        }
        if parts[0] == 0 || mults.contains(&0) {
            return Err(Error::InvalidPartition("parts and multiplicities must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts must be strictly increasing, got {parts:?}"
            )));
        }
        Ok(PartitionData { parts, mults })
    }

    /// Groups an arbitrary list of parts (any order, repeats allowed).
    pub fn from_multiset(parts: &[u32]) -> Result<Self> {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        let mut ps = Vec::new();
        let mut ms = Vec::new();
        for p in sorted {
            if ps.last() == Some(&p) {
                *ms.last_mut().expect("parallel lists") += 1;
            } else {
                ps.push(p);
                ms.push(1);
            }
        }
        PartitionData::new(ps, ms)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    /// Number of distinct parts `r`.
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn largest(&self) -> u32 {
        *self.parts.last().expect("nonempty")
    }

    /// `Σ λ_i·m_i`
    pub fn size(&self) -> u64 {
        self.iter().map(|(p, m)| p as u64 * m as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts.iter().copied().zip(self.mults.iter().copied())
    }
}

/// `a^m,b^n,…` with an omitted exponent meaning 1.
impl FromStr for PartitionData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut mults = Vec::new();
        for item in s.split(',') {
            let item = item.trim();
            let (p, m) = item.split_once('^').unwrap_or((item, "1"));
            let parse = |x: &str| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition entry `{item}`")))
            };
            parts.push(parse(p)?);
            mults.push(parse(m)?);
        }
        PartitionData::new(parts, mults)
    }
}

impl fmt::Display for PartitionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|(p, m)| format!("{p}^{m}")).collect();
        write!(f, "{}", items.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub factor: IrreducibleFactor,
    pub partition: PartitionData,
    /// `dim_K ker p(T)^k` for `k = 0, 1, …`, up to and including the first
    /// repeated value.
    pub nullity_sequence: Vec<usize>,
}

/// Partition data of the `p`-primary part of `t`.
pub fn extract_partition(t: &Matrix, p: &Poly) -> Result<PrimaryComponent> {
    if !p.is_monic() || p.is_constant() {
        return Err(Error::InvalidArgument(format!("{p} is not monic and nonconstant")));
    }
    let cp = t.charpoly()?;
    let mut rest = cp.clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.divmod(p)?;
        if !r.is_zero() {
            break;
        }
        rest = q;
        e += 1;
    }
    if e == 0 {
        return Err(Error::NotAFactor(p.to_string()));
    }
    extract_with_factor(t, &IrreducibleFactor::new(p.clone(), e))
}

/// Nullities of `p(T)^k` for growing `k`, then the multiplicity of each part
/// size from second differences: `#{parts = k} = 2n_k − n_{k−1} − n_{k+1}`,
/// with `n_k` the nullity divided by `deg p`.
pub(crate) fn extract_with_factor(t: &Matrix, factor: &IrreducibleFactor) -> Result<PrimaryComponent> {
    let d = factor.degree;
    let e = factor.multiplicity;
    let pt = factor.poly.eval_at_matrix(t)?;
    let mut nullities = vec![0usize];
    let mut power = pt.clone();
    loop {
        let k = nullities.len();
        let nu = power.nullity();
        if nu % d != 0 {
            return Err(Error::Internal(format!(
                "nullity {nu} of ({})^{k} is not divisible by {d}",
                factor.poly
            )));
        }
        let prev = *nullities.last().expect("nonempty");
        nullities.push(nu);
        if nu == prev {
            break;
        }
        if nu < prev || k > e + 1 {
            return Err(Error::Internal(format!(
                "nullity sequence {nullities:?} of {} does not stabilize by k = {e}",
                factor.poly
            )));
        }
        power = power.mul(&pt)?;
    }
    let stable = *nullities.last().expect("nonempty");
    if stable != d * e {
        return Err(Error::Internal(format!(
            "generalized eigenspace of {} has dimension {stable}, expected {}",
            factor.poly,
            d * e
        )));
    }
    let n: Vec<i64> = nullities.iter().map(|&x| (x / d) as i64).collect();
    let top = n.len() - 2;
    let mut parts = Vec::new();
    let mut mults = Vec::new();
    for k in 1..=top {
        let m = 2 * n[k] - n[k - 1] - n[k + 1];
        if m < 0 {
            return Err(Error::Internal(format!("negative part count from {nullities:?}")));
        }
        if m > 0 {
            parts.push(k as u32);
            mults.push(m as u32);
        }
    }
    let partition = PartitionData::new(parts, mults)?;
    if partition.size() != e as u64 {
        return Err(Error::Internal(format!(
            "partition {partition} does not have size {e}"
        )));
    }
    Ok(PrimaryComponent { factor: factor.clone(), partition, nullity_sequence: nullities })
}

/// One component per distinct irreducible factor of the characteristic
/// polynomial, in factor order.
pub fn primary_decomposition(t: &Matrix) -> Result<Vec<PrimaryComponent>> {
    primary_decomposition_with_seed(t, 0)
}

pub fn primary_decomposition_with_seed(t: &Matrix, seed: u64) -> Result<Vec<PrimaryComponent>> {
    let cp = t.charpoly()?;
    decompose(t, &cp, seed)
}

pub(crate) fn decompose(t: &Matrix, charpoly: &Poly, seed: u64) -> Result<Vec<PrimaryComponent>> {
    let factors = factor_with_seed(charpoly, seed)?;
    // Sequential on purpose: analyze stays single-threaded.
    let comps = factors
        .iter()
        .map(|f| extract_with_factor(t, f))
        .collect::<Result<Vec<_>>>()?;
    let total: u64 = comps
        .iter()
        .map(|c| c.factor.degree as u64 * c.partition.size())
        .sum();
    if total != t.rows() as u64 {
        return Err(Error::Internal(format!(
            "primary components cover dimension {total} of {}",
            t.rows()
        )));
    }
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn part(parts: &[u32], mults: &[u32]) -> PartitionData {
        PartitionData::new(parts.to_vec(), mults.to_vec()).unwrap()
    }

    fn jordan(field: FieldSpec, ev: i64, n: usize) -> Matrix {
        Matrix::jordan_block(field, &field.from_i64(ev), n)
    }

    #[test]
    fn partition_validation_and_syntax() {
        assert!(PartitionData::new(vec![2, 2], vec![1, 1]).is_err());
        assert!(PartitionData::new(vec![3, 1], vec![1, 1]).is_err());
        assert!(PartitionData::new(vec![0], vec![1]).is_err());
        assert!(PartitionData::new(vec![1], vec![0]).is_err());
        assert!(PartitionData::new(vec![], vec![]).is_err());
        assert_eq!("1^2,2".parse::<PartitionData>().unwrap(), part(&[1, 2], &[2, 1]));
        assert_eq!("1,2,5".parse::<PartitionData>().unwrap(), part(&[1, 2, 5], &[1, 1, 1]));
        assert!("2,2".parse::<PartitionData>().is_err());
        assert!("2,x".parse::<PartitionData>().is_err());
        assert_eq!(part(&[1, 3], &[2, 1]).to_string(), "1^2,3^1");
        assert_eq!(PartitionData::from_multiset(&[3, 1, 1]).unwrap(), part(&[1, 3], &[2, 1]));
    }

    #[test]
    fn nilpotent_j3_plus_j1() {
        let t = Matrix::block_diagonal(q(), &[jordan(q(), 0, 3), jordan(q(), 0, 1)]).unwrap();
        let c = extract_partition(&t, &Poly::t(q())).unwrap();
        assert_eq!(c.nullity_sequence, vec![0, 2, 3, 4, 4]);
        assert_eq!(c.partition, part(&[1, 3], &[1, 1]));
    }

    #[test]
    fn zero_matrix_is_all_ones() {
        let t = Matrix::zero(q(), 4, 4);
        let c = extract_partition(&t, &Poly::t(q())).unwrap();
        assert_eq!(c.partition, part(&[1], &[4]));
        assert_eq!(c.nullity_sequence, vec![0, 4, 4]);
    }

    #[test]
    fn quadratic_factor_over_gf3() {
        let f3 = FieldSpec::Prime(3);
        let p = Poly::parse(f3, "t^2+1").unwrap();
        let t = Matrix::companion(&p.pow(2)).unwrap();
        let c = extract_partition(&t, &p).unwrap();
        assert_eq!(c.nullity_sequence, vec![0, 2, 4, 4]);
        assert_eq!(c.partition, part(&[2], &[1]));
        assert_eq!(c.factor.degree, 2);
    }

    #[test]
    fn not_a_factor() {
        let t = Matrix::identity(q(), 2);
        assert!(matches!(
            extract_partition(&t, &Poly::t(q())),
            Err(Error::NotAFactor(_))
        ));
    }

    #[test]
    fn decomposition_examples() {
        let d = Matrix::from_i64_rows(q(), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let comps = primary_decomposition(&d).unwrap();
        let got: Vec<_> = comps
            .iter()
            .map(|c| (c.factor.poly.to_compact_string(), c.partition.clone()))
            .collect();
        assert_eq!(
            got,
            vec![("t-1".into(), part(&[1], &[2])), ("t-2".into(), part(&[1], &[1]))]
        );

        let f5 = FieldSpec::Prime(5);
        let comps = primary_decomposition(&jordan(f5, 0, 2)).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].partition, part(&[2], &[1]));

        let c = Matrix::companion(&Poly::parse(q(), "t^2+1").unwrap()).unwrap();
        let t = Matrix::block_diagonal(q(), &[c, jordan(q(), 1, 2)]).unwrap();
        let comps = primary_decomposition(&t).unwrap();
        let got: Vec<_> = comps
            .iter()
            .map(|c| (c.factor.poly.to_compact_string(), c.factor.degree, c.partition.clone()))
            .collect();
        assert_eq!(
            got,
            vec![("t-1".into(), 1, part(&[2], &[1])), ("t^2+1".into(), 2, part(&[1], &[1]))]
        );
    }
}
