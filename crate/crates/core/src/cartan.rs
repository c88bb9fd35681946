//! Closed-form invariants of the centralizer algebra: per-block Cartan
//! matrix `c_ij = min(λ_i, λ_j)`, its determinant, the global dimension,
//! and the dimensions of the algebra, its radical, and the simple,
//! projective and injective indecomposable modules.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::polynomial::{IrreducibleFactor, Poly};
use crate::structure::{decompose, PartitionData, PrimaryComponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GlobalDimension {
    Finite(u32),
    Infinite,
}

impl fmt::Display for GlobalDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlobalDimension::Finite(g) => write!(f, "finite:{g}"),
            GlobalDimension::Infinite => write!(f, "infinite"),
        }
    }
}

/// `C[i][j] = min(λ_i, λ_j)` over the distinct parts in increasing order.
pub fn cartan_matrix(partition: &PartitionData) -> Vec<Vec<u64>> {
    let parts = partition.parts();
    parts
        .iter()
        .map(|&a| parts.iter().map(|&b| a.min(b) as u64).collect())
        .collect()
}

/// `λ_1 · (λ_2 − λ_1) ⋯ (λ_r − λ_{r−1})`.
pub fn cartan_det(partition: &PartitionData) -> BigUint {
    let parts = partition.parts();
    let mut det = BigUint::from(parts[0]);
    for w in parts.windows(2) {
        det *= w[1] - w[0];
    }
    det
}

/// Finite exactly when the distinct parts are `1, 2, …, r`: dimension 1 for
/// `r = 1`, 2 otherwise. Multiplicities play no role.
pub fn global_dimension(partition: &PartitionData) -> GlobalDimension {
    let consecutive = partition
        .parts()
        .iter()
        .enumerate()
        .all(|(i, &p)| p as usize == i + 1);
    match (consecutive, partition.num_parts()) {
        (false, _) => GlobalDimension::Infinite,
        (true, 1) => GlobalDimension::Finite(1),
        (true, _) => GlobalDimension::Finite(2),
    }
}

/// Integer determinant by fraction-free Bareiss elimination; the independent
/// route for checking [`cartan_det`].
pub fn bareiss_det_integer(m: &[Vec<u64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != BigInt::ZERO) else {
            return BigInt::ZERO;
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Everything determined by `(λ, d)` alone, `d = [E:K]`. All dimensions are
/// over the base field `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanProfile {
    pub degree: usize,
    pub partition: PartitionData,
    pub cartan: Vec<Vec<u64>>,
    pub cartan_det: BigUint,
    pub global_dimension: GlobalDimension,
    /// Radical is zero.
    pub semisimple: bool,
    pub dim_algebra_over_e: u64,
    pub dim_algebra: u64,
    pub dim_radical: u64,
    /// `d·m_j` for the simple module `D_j`.
    pub simple_dims: Vec<u64>,
    /// `dim P_i`, the column of the block corresponding to `e_{i1}`.
    pub projective_dims: Vec<u64>,
    /// `dim I_j = dim Hom_K(e_{j1}A, K)`.
    pub injective_dims: Vec<u64>,
}

impl CartanProfile {
    pub fn num_simples(&self) -> usize {
        self.partition.num_parts()
    }
}

pub fn cartan_profile(partition: &PartitionData, degree: usize) -> Result<CartanProfile> {
    if degree == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let d = degree as u64;
    let cartan = cartan_matrix(partition);
    let mults: Vec<u64> = partition.mults().iter().map(|&m| m as u64).collect();
    let r = mults.len();
    // Row i of C weighted by multiplicities: dim_E of P_i = A·e_{i1}.
    let proj_over_e: Vec<u64> = (0..r)
        .map(|i| (0..r).map(|j| cartan[i][j] * mults[j]).sum())
        .collect();
    // e_{j1}·A, whose K-dual is the injective I_j.
    let inj_over_e: Vec<u64> = (0..r)
        .map(|j| (0..r).map(|i| cartan[i][j] * mults[i]).sum())
        .collect();
    let dim_e: u64 = (0..r).map(|i| proj_over_e[i] * mults[i]).sum();
    let semisimple_part: u64 = mults.iter().map(|m| m * m).sum();
    let dim_radical = d * (dim_e - semisimple_part);
    Ok(CartanProfile {
        degree,
        partition: partition.clone(),
        cartan_det: cartan_det(partition),
        global_dimension: global_dimension(partition),
        semisimple: dim_radical == 0,
        dim_algebra_over_e: dim_e,
        dim_algebra: d * dim_e,
        dim_radical,
        simple_dims: mults.iter().map(|m| d * m).collect(),
        projective_dims: proj_over_e.iter().map(|x| d * x).collect(),
        injective_dims: inj_over_e.iter().map(|x| d * x).collect(),
        cartan,
    })
}

/// One block of the centralizer algebra, attached to an irreducible factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockReport {
    pub factor: IrreducibleFactor,
    pub profile: CartanProfile,
}

pub fn dimension_report(comp: &PrimaryComponent) -> Result<BlockReport> {
    Ok(BlockReport {
        factor: comp.factor.clone(),
        profile: cartan_profile(&comp.partition, comp.factor.degree)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    /// SHA-256 of the canonical text of the input matrix.
    pub input_checksum: String,
    pub field: FieldSpec,
    pub n: usize,
    pub charpoly: Poly,
    pub blocks: Vec<BlockReport>,
    /// `l`, the total number of simple modules.
    pub total_num_simples: usize,
    pub total_cartan_det: BigUint,
    pub overall_global_dimension: GlobalDimension,
}

impl AnalysisReport {
    /// Equality of everything except the input checksum, i.e. of the
    /// invariants of the centralizer algebra.
    pub fn same_invariants(&self, other: &AnalysisReport) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.charpoly == other.charpoly
            && self.blocks == other.blocks
            && self.total_num_simples == other.total_num_simples
            && self.total_cartan_det == other.total_cartan_det
            && self.overall_global_dimension == other.overall_global_dimension
    }

    /// The `l×l` block-diagonal Cartan matrix of the whole algebra.
    pub fn full_cartan(&self) -> Vec<Vec<u64>> {
        let l = self.total_num_simples;
        let mut out = vec![vec![0; l]; l];
        let mut off = 0;
        for b in &self.blocks {
            let c = &b.profile.cartan;
            for (i, row) in c.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    out[off + i][off + j] = v;
                }
            }
            off += c.len();
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Seed for the randomized polynomial factorization.
    pub seed: u64,
    /// Run the internal cross-checks (Cayley–Hamilton, Bareiss determinant of
    /// every Cartan block).
    pub self_check: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { seed: 0, self_check: true }
    }
}

pub fn matrix_checksum(t: &Matrix) -> String {
    let mut h = Sha256::new();
    h.update(format!("field: {}\nn: {}\n{}", t.field(), t.rows(), t).as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn assemble_report(t: &Matrix) -> Result<AnalysisReport> {
    assemble_report_with(t, AnalyzeOptions::default())
}

pub fn assemble_report_with(t: &Matrix, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    if !t.is_square() || t.rows() == 0 {
        return Err(Error::DimensionMismatch("expected a nonempty square matrix".into()));
    }
    let charpoly = t.charpoly()?;
    if opts.self_check && !charpoly.eval_at_matrix(t)?.is_zero() {
        return Err(Error::Internal("characteristic polynomial fails Cayley-Hamilton".into()));
    }
    let comps = decompose(t, &charpoly, opts.seed)?;
    let blocks = comps.iter().map(dimension_report).collect::<Result<Vec<_>>>()?;
    if opts.self_check {
        for b in &blocks {
            let bareiss = bareiss_det_integer(&b.profile.cartan);
            if bareiss.is_negative() || bareiss.magnitude() != &b.profile.cartan_det {
                return Err(Error::Internal(format!(
                    "Cartan determinant {} disagrees with Bareiss {bareiss}",
                    b.profile.cartan_det
                )));
            }
        }
    }
    let total_num_simples = blocks.iter().map(|b| b.profile.num_simples()).sum();
    let total_cartan_det = blocks.iter().map(|b| &b.profile.cartan_det).product();
    let overall_global_dimension = blocks
        .iter()
        .map(|b| b.profile.global_dimension)
        .try_fold(0u32, |acc, g| match g {
            GlobalDimension::Finite(x) => Some(acc.max(x)),
            GlobalDimension::Infinite => None,
        })
        .map_or(GlobalDimension::Infinite, GlobalDimension::Finite);
    Ok(AnalysisReport {
        input_checksum: matrix_checksum(t),
        field: t.field(),
        n: t.rows(),
        charpoly,
        blocks,
        total_num_simples,
        total_cartan_det,
        overall_global_dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(parts: &[u32], mults: &[u32]) -> PartitionData {
        PartitionData::new(parts.to_vec(), mults.to_vec()).unwrap()
    }

    fn ones(parts: &[u32]) -> PartitionData {
        part(parts, &vec![1; parts.len()])
    }

    #[test]
    fn cartan_matrix_examples() {
        assert_eq!(cartan_matrix(&ones(&[2, 3])), vec![vec![2, 2], vec![2, 3]]);
        assert_eq!(cartan_matrix(&ones(&[7])), vec![vec![7]]);
        assert_eq!(
            cartan_matrix(&ones(&[1, 2, 5])),
            vec![vec![1, 1, 1], vec![1, 2, 2], vec![1, 2, 5]]
        );
    }

    #[test]
    fn cartan_det_examples() {
        for r in 1..=8 {
            let consecutive: Vec<u32> = (1..=r).collect();
            assert_eq!(cartan_det(&ones(&consecutive)), BigUint::from(1u32));
        }
        assert_eq!(cartan_det(&ones(&[3])), BigUint::from(3u32));
        assert_eq!(cartan_det(&ones(&[2, 5, 6])), BigUint::from(6u32));
        assert_eq!(bareiss_det_integer(&cartan_matrix(&ones(&[2, 5, 6]))), BigInt::from(6));
    }

    #[test]
    fn global_dimension_examples() {
        assert_eq!(global_dimension(&part(&[1], &[4])), GlobalDimension::Finite(1));
        assert_eq!(global_dimension(&part(&[1, 2], &[2, 1])), GlobalDimension::Finite(2));
        assert_eq!(global_dimension(&part(&[2], &[1])), GlobalDimension::Infinite);
        assert_eq!(global_dimension(&part(&[1, 3], &[1, 1])), GlobalDimension::Infinite);
        assert_eq!(GlobalDimension::Finite(2).to_string(), "finite:2");
        assert_eq!(GlobalDimension::Infinite.to_string(), "infinite");
    }

    #[test]
    fn profile_examples() {
        let p = cartan_profile(&ones(&[1, 2]), 1).unwrap();
        assert_eq!(p.dim_algebra, 5);
        assert_eq!(p.dim_radical, 3);
        assert_eq!(p.simple_dims, vec![1, 1]);
        assert_eq!(p.projective_dims, vec![2, 3]);
        assert_eq!(p.injective_dims, vec![2, 3]);
        assert!(!p.semisimple);

        for d in 1..4 {
            let p = cartan_profile(&part(&[1], &[3]), d).unwrap();
            assert_eq!(p.dim_algebra, 9 * d as u64);
            assert_eq!(p.dim_radical, 0);
            assert!(p.semisimple);
        }

        let p = cartan_profile(&ones(&[1]), 2).unwrap();
        assert_eq!((p.dim_algebra, p.dim_radical), (2, 0));
        assert!(cartan_profile(&ones(&[1]), 0).is_err());
    }

    #[test]
    fn report_examples() {
        let q = FieldSpec::Rationals;
        let r = assemble_report(&Matrix::zero(q, 3, 3)).unwrap();
        assert_eq!(r.blocks.len(), 1);
        let b = &r.blocks[0].profile;
        assert_eq!(b.partition, part(&[1], &[3]));
        assert_eq!(b.cartan, vec![vec![1]]);
        assert_eq!(b.cartan_det, BigUint::from(1u32));
        assert_eq!(b.global_dimension, GlobalDimension::Finite(1));
        assert_eq!(b.dim_algebra, 9);

        let f2 = FieldSpec::Prime(2);
        let r = assemble_report(&Matrix::jordan_block(f2, &f2.zero(), 3)).unwrap();
        let b = &r.blocks[0].profile;
        assert_eq!((b.partition.clone(), b.dim_algebra), (ones(&[3]), 3));
        assert_eq!(b.cartan_det, BigUint::from(3u32));
        assert_eq!(r.overall_global_dimension, GlobalDimension::Infinite);

        let j = |ev: i64, n: usize| Matrix::jordan_block(q, &q.from_i64(ev), n);
        let t = Matrix::block_diagonal(q, &[j(0, 1), j(0, 2), j(1, 2)]).unwrap();
        let r = assemble_report(&t).unwrap();
        let got: Vec<_> = r
            .blocks
            .iter()
            .map(|b| {
                (
                    b.factor.poly.to_compact_string(),
                    b.profile.partition.clone(),
                    b.profile.cartan_det.clone(),
                    b.profile.global_dimension,
                )
            })
            .collect();
        assert_eq!(
            got,
            vec![
                ("t".into(), ones(&[1, 2]), BigUint::from(1u32), GlobalDimension::Finite(2)),
                ("t-1".into(), ones(&[2]), BigUint::from(2u32), GlobalDimension::Infinite),
            ]
        );
        assert_eq!(r.total_cartan_det, BigUint::from(2u32));
        assert_eq!(r.total_num_simples, 3);
        assert_eq!(r.overall_global_dimension, GlobalDimension::Infinite);
        assert_eq!(
            r.full_cartan(),
            vec![vec![1, 1, 0], vec![1, 2, 0], vec![0, 0, 2]]
        );
    }

    #[test]
    fn block_additivity() {
        let f5 = FieldSpec::Prime(5);
        let j = |ev: i64, n: usize| Matrix::jordan_block(f5, &f5.from_i64(ev), n);
        let a = Matrix::block_diagonal(f5, &[j(0, 3), j(0, 1)]).unwrap();
        let b = Matrix::block_diagonal(f5, &[j(2, 2), j(2, 4)]).unwrap();
        let ab = Matrix::block_diagonal(f5, &[a.clone(), b.clone()]).unwrap();
        let det = |m: &Matrix| assemble_report(m).unwrap().total_cartan_det;
        assert_eq!(det(&ab), det(&a) * det(&b));
    }

    fn partition_strategy() -> impl Strategy<Value = PartitionData> {
        prop::collection::btree_set(1u32..=30, 1..=8).prop_flat_map(|parts| {
            let r = parts.len();
            (Just(parts), prop::collection::vec(1u32..5, r))
        })
        .prop_map(|(parts, mults)| PartitionData::new(parts.into_iter().collect(), mults).unwrap())
    }

    proptest! {
        #[test]
        fn profile_invariants(lambda in partition_strategy(), d in 1usize..4) {
            let p = cartan_profile(&lambda, d).unwrap();
            let c = &p.cartan;
            for i in 0..c.len() {
                for j in 0..c.len() {
                    prop_assert_eq!(c[i][j], c[j][i]);
                }
                if i > 0 {
                    prop_assert!(c[i][i] > c[i - 1][i - 1]);
                }
            }
            prop_assert_eq!(BigInt::from(p.cartan_det.clone()), bareiss_det_integer(c));
            prop_assert_eq!(&p.projective_dims, &p.injective_dims);
            let ms: u64 = lambda.mults().iter().map(|&m| (m as u64).pow(2)).sum();
            prop_assert_eq!(p.dim_radical, p.dim_algebra - d as u64 * ms);
            prop_assert_eq!(p.dim_algebra, d as u64 * p.dim_algebra_over_e);
            let brute: u64 = lambda
                .iter()
                .flat_map(|(a, ma)| lambda.iter().map(move |(b, mb)| a.min(b) as u64 * ma as u64 * mb as u64))
                .sum();
            prop_assert_eq!(p.dim_algebra_over_e, brute);
            prop_assert_eq!(
                p.global_dimension != GlobalDimension::Infinite,
                p.cartan_det == BigUint::from(1u32)
            );
        }
    }
}
