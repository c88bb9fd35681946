//! Dense exact matrices: Gauss–Jordan elimination, kernels, canonical
//! subspace bases, and the Berkowitz characteristic polynomial.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::polynomial::Poly;

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("rectangular input")
    }

    pub fn from_flat(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal,
    /// negated coefficients in the last column.
    pub fn companion(f: &Poly) -> Result<Self> {
        let n = match f.degree() {
            Some(n) if n >= 1 && f.is_monic() => n,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "companion matrix needs a monic nonconstant polynomial, got {f}"
                )))
            }
        };
        let field = f.field();
        let mut m = Matrix::zero(field, n, n);
        for i in 1..n {
            m[(i, i - 1)] = field.one();
        }
        for i in 0..n {
            m[(i, n - 1)] = -&f.coeffs()[i];
        }
        Ok(m)
    }

    /// Upper-triangular Jordan block `J_n(eigenvalue)`.
    pub fn jordan_block(field: FieldSpec, eigenvalue: &Scalar, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = eigenvalue.clone();
            if i + 1 < n {
                m[(i, i + 1)] = field.one();
            }
        }
        m
    }

    pub fn block_diagonal(field: FieldSpec, blocks: &[Matrix]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zero(field, n, n);
        let mut off = 0;
        for b in blocks {
            if !b.is_square() {
                return Err(Error::DimensionMismatch("blocks must be square".into()));
            }
            if b.field != field {
                return Err(Error::FieldMismatch(field, b.field));
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone()))
            .collect();
        Matrix { field: self.field, rows: rows.len(), cols: cols.len(), data }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Result<Matrix> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field, c.field()));
        }
        let data = self.data.iter().map(|a| a * c).collect();
        Ok(self.with_data(data))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Repeated squaring; `pow(0)` is the identity.
    pub fn pow(&self, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("pow needs a square matrix".into()));
        }
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = &self[(r, j)] * &inv;
                }
            }
            let pivot_row: Vec<(usize, Scalar)> = (c..self.cols)
                .filter(|&j| !self[(r, j)].is_zero())
                .map(|j| (j, self[(r, j)].clone()))
                .collect();
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for (j, v) in &pivot_row {
                    self[(i, *j)] = &self[(i, *j)] - &(&factor * v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Rank and a canonical basis of the right kernel.
    pub fn rank_and_nullspace(&self) -> (usize, SubspaceBasis) {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect();
        (pivots.len(), SubspaceBasis::from_vectors(self.field, self.cols, vectors))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse needs a square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select(&(0..n).collect::<Vec<_>>(), &cols))
    }

    /// Characteristic polynomial `det(t·I − M)` by Berkowitz's
    /// division-free algorithm.
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::DimensionMismatch(
                "charpoly needs a nonempty square matrix".into(),
            ));
        }
        let f = self.field;
        // Coefficients from the top degree down, for the leading k×k block.
        let mut vect = vec![f.one(), -&self[(0, 0)]];
        for k in 1..self.rows {
            // Split the (k+1)×(k+1) leading block as [[A, C], [R, a]].
            let a = &self[(k, k)];
            let col: Vec<Scalar> = (0..k).map(|i| self[(i, k)].clone()).collect();
            let row: Vec<Scalar> = (0..k).map(|j| self[(k, j)].clone()).collect();
            let sub = self.select(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
            let mut diags = vec![f.one(), -a];
            let mut acol = col;
            for _ in 0..k {
                let rc = row
                    .iter()
                    .zip(&acol)
                    .fold(f.zero(), |acc, (x, y)| &acc + &(x * y));
                diags.push(-&rc);
                acol = sub.apply(&acol);
            }
            // Toeplitz (k+2)×(k+1) lower-triangular times the previous vector.
            let next = (0..k + 2)
                .map(|i| {
                    (0..=i.min(k))
                        .fold(f.zero(), |acc, j| &acc + &(&diags[i - j] * &vect[j]))
                })
                .collect();
            vect = next;
        }
        vect.reverse();
        Ok(Poly::new(f, vect))
    }

    /// Fraction-free Bareiss determinant. Used only as an independent check
    /// against [`Matrix::charpoly`] and the closed-form Cartan determinant.
    pub fn bareiss_det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant needs a square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = self.field.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != k {
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[(i, j)] * &m[(k, k)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = num.checked_div(&prev)?;
                }
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        Ok(if sign { -det } else { det })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of `K^ambient_dim` held as the nonzero rows of its reduced row
/// echelon form, so two bases of the same subspace compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    field: FieldSpec,
    ambient_dim: usize,
    vectors: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        SubspaceBasis { field, ambient_dim, vectors: Vec::new(), pivots: Vec::new() }
    }

    /// Canonical basis of the span of arbitrary vectors.
    pub fn from_vectors(field: FieldSpec, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        if vectors.is_empty() {
            return SubspaceBasis::zero(field, ambient_dim);
        }
        let rows = vectors.len();
        let data = vectors.into_iter().flatten().collect();
        let mut m = Matrix::from_flat(field, rows, ambient_dim, data).expect("consistent lengths");
        let pivots = m.rref_in_place();
        let vectors = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        SubspaceBasis { field, ambient_dim, vectors, pivots }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (b, &pc) in self.vectors.iter().zip(&self.pivots) {
            if w[pc].is_zero() {
                continue;
            }
            let c = w[pc].clone();
            for (wi, bi) in w.iter_mut().zip(b).skip(pc) {
                if !bi.is_zero() {
                    *wi = &*wi - &(&c * bi);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }
}

/// Incrementally built echelon basis, for spans of many generators.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    field: FieldSpec,
    ambient_dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBuilder {
    pub fn new(field: FieldSpec, ambient_dim: usize) -> Self {
        EchelonBuilder { field, ambient_dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        for (pc, b) in &self.rows {
            if w[*pc].is_zero() {
                continue;
            }
            let c = w[*pc].clone();
            for (wi, bi) in w.iter_mut().zip(b).skip(*pc) {
                if !bi.is_zero() {
                    *wi = &*wi - &(&c * bi);
                }
            }
        }
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pc].inv().expect("nonzero");
        for x in w.iter_mut().skip(pc) {
            *x = &*x * &inv;
        }
        self.rows.push((pc, w));
        true
    }

    pub fn finish(self) -> SubspaceBasis {
        let vectors = self.rows.into_iter().map(|(_, v)| v).collect();
        SubspaceBasis::from_vectors(self.field, self.ambient_dim, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rank_and_nullspace_examples() {
        let (r, k) = Matrix::identity(q(), 3).rank_and_nullspace();
        assert_eq!((r, k.dim()), (3, 0));

        let (r, k) = Matrix::zero(q(), 3, 3).rank_and_nullspace();
        assert_eq!(r, 0);
        let std = SubspaceBasis::from_vectors(
            q(),
            3,
            (0..3)
                .map(|i| (0..3).map(|j| q().from_i64((i == j) as i64)).collect())
                .collect(),
        );
        assert_eq!(k, std);

        let j = Matrix::from_i64_rows(q(), &[&[0, 1], &[0, 0]]);
        let (r, k) = j.rank_and_nullspace();
        assert_eq!(r, 1);
        assert_eq!(k.vectors(), &[vec![q().one(), q().zero()]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f7 = FieldSpec::Prime(7);
        let m = Matrix::from_i64_rows(f7, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let (r, k) = m.rank_and_nullspace();
        assert_eq!(r + k.dim(), 4);
        for v in k.vectors() {
            assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn charpoly_examples() {
        let j = Matrix::from_i64_rows(q(), &[&[0, 1], &[0, 0]]);
        assert_eq!(j.charpoly().unwrap(), Poly::parse(q(), "t^2").unwrap());
        let d = Matrix::from_i64_rows(q(), &[&[1, 0], &[0, 2]]);
        assert_eq!(d.charpoly().unwrap(), Poly::parse(q(), "t^2-3t+2").unwrap());
        let one = Matrix::from_i64_rows(q(), &[&[5]]);
        assert_eq!(one.charpoly().unwrap(), Poly::parse(q(), "t-5").unwrap());
    }

    #[test]
    fn charpoly_of_companion_is_the_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let field = if trial % 2 == 0 { q() } else { FieldSpec::Prime(5) };
            let n = rng.random_range(1..=6);
            let mut c: Vec<i64> = (0..n).map(|_| rng.random_range(-9..=9)).collect();
            c.push(1);
            let f = Poly::from_i64s(field, &c);
            // Direct construction of the companion matrix, independent of Matrix::companion.
            let mut rows = vec![vec![0i64; n]; n];
            for i in 1..n {
                rows[i][i - 1] = 1;
            }
            for i in 0..n {
                rows[i][n - 1] = -c[i];
            }
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let comp = Matrix::from_i64_rows(field, &refs);
            assert_eq!(comp, Matrix::companion(&f).unwrap());
            assert_eq!(comp.charpoly().unwrap(), f);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        assert_eq!(m.mul(&Matrix::identity(q(), 2)).unwrap(), m);
        assert!(Matrix::jordan_block(q(), &q().zero(), 3).pow(3).unwrap().is_zero());
        assert_eq!(m.pow(0).unwrap(), Matrix::identity(q(), 2));
        assert_eq!(m.pow(3).unwrap(), m.mul(&m).unwrap().mul(&m).unwrap());
        let f5 = FieldSpec::Prime(5);
        assert!(matches!(
            m.mul(&Matrix::identity(f5, 2)),
            Err(Error::FieldMismatch(..))
        ));
        assert!(matches!(
            m.add(&Matrix::identity(q(), 3)),
            Err(Error::DimensionMismatch(_))
        ));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(q(), 2));
        assert!(Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn bareiss_examples() {
        let m = Matrix::from_i64_rows(q(), &[&[2, 2, 2], &[2, 5, 5], &[2, 5, 6]]);
        assert_eq!(m.bareiss_det().unwrap(), q().from_i64(6));
        let swap = Matrix::from_i64_rows(q(), &[&[0, 1], &[1, 0]]);
        assert_eq!(swap.bareiss_det().unwrap(), q().from_i64(-1));
        let sing = Matrix::from_i64_rows(FieldSpec::Prime(3), &[&[1, 2], &[2, 1]]);
        assert!(sing.bareiss_det().unwrap().is_zero());
    }

    #[test]
    fn echelon_builder_matches_batch_span() {
        let f3 = FieldSpec::Prime(3);
        let vs: Vec<Vec<Scalar>> = [[1, 2, 0, 1], [2, 1, 0, 2], [0, 1, 1, 1], [1, 0, 1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| f3.from_i64(x)).collect())
            .collect();
        let mut b = EchelonBuilder::new(f3, 4);
        for v in &vs {
            b.insert(v);
        }
        let batch = SubspaceBasis::from_vectors(f3, 4, vs.clone());
        assert_eq!(b.finish(), batch);
        for v in &vs {
            assert!(batch.contains(v));
        }
    }

    fn random_matrix(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, lo: i64, hi: i64) -> Matrix {
        let data = (0..n * n).map(|_| field.from_i64(rng.random_range(lo..=hi))).collect();
        Matrix::from_flat(field, n, n, data).unwrap()
    }

    fn random_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Matrix {
        loop {
            let s = random_matrix(rng, field, n, -3, 3);
            if s.rank() == n {
                return s;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn charpoly_similarity_and_determinant(seed in any::<u64>(), n in 1usize..6, prime in any::<bool>()) {
            let field = if prime { FieldSpec::Prime(7) } else { q() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_matrix(&mut rng, field, n, -4, 4);
            let s = random_invertible(&mut rng, field, n);
            let conj = s.mul(&t).unwrap().mul(&s.inverse().unwrap()).unwrap();
            let cp = t.charpoly().unwrap();
            prop_assert_eq!(conj.charpoly().unwrap(), cp.clone());
            prop_assert!(cp.eval_at_matrix(&t).unwrap().is_zero());
            let det = t.bareiss_det().unwrap();
            let sign = if n % 2 == 0 { field.one() } else { -&field.one() };
            prop_assert_eq!(cp.coeff(0), &sign * &det);
        }

        #[test]
        fn rational_rank_matches_mod_p_image(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
            // Small integer entries and a large prime: the mod-p rank can only
            // drop if p divides a nonzero minor, all of which are tiny here.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ints: Vec<i64> = (0..rows * cols).map(|_| rng.random_range(-2..=2)).collect();
            let qm = Matrix::from_flat(q(), rows, cols, ints.iter().map(|&x| q().from_i64(x)).collect()).unwrap();
            let fp = FieldSpec::Prime(1_000_003);
            let pm = Matrix::from_flat(fp, rows, cols, ints.iter().map(|&x| fp.from_i64(x)).collect()).unwrap();
            prop_assert_eq!(qm.rank(), pm.rank());
        }
    }
}
