//! Dense univariate polynomials over a [`FieldSpec`], in the variable `t`.

mod factor;
mod zassenhaus;

pub use factor::{
    factor, factor_with_seed, is_irreducible, squarefree_decomposition, IrreducibleFactor,
};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

/// Coefficients are stored by ascending degree with no trailing zeros, so the
/// zero polynomial is the empty list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// Coefficients given by ascending degree.
    pub fn from_i64s(field: FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(c.field(), vec![c])
    }

    /// `c·t^k`
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    /// The polynomial `t`.
    pub fn t(field: FieldSpec) -> Self {
        Poly::monomial(field.one(), 1)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field, other.field))
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &self.field.from_i64(k as i64))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder, `deg r < deg g`.
    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(g)?;
        let Some(dg) = g.degree() else {
            return Err(Error::DivisionByZero);
        };
        let Some(df) = self.degree() else {
            return Ok((Poly::zero(self.field), Poly::zero(self.field)));
        };
        if df < dg {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let lc_inv = g.coeffs[dg].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); df - dg + 1];
        for k in (0..=df - dg).rev() {
            let c = &rem[k + dg] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, gi) in g.coeffs.iter().enumerate() {
                if !gi.is_zero() {
                    rem[k + i] = &rem[k + i] - &(&c * gi);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dg);
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(self.divmod(g)?.1)
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, g: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(g)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{g} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, f: &Poly) -> Result<bool> {
        Ok(f.rem(self)?.is_zero())
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(self.field).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(m)?;
            if e.bit(i) {
                acc = (&acc * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Extended Euclid: returns `(g, s, u)` with `s·self + u·other = g`,
    /// `g` monic (or zero when both inputs are zero).
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check_field(other)?;
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut u0, mut u1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = &s0 - &(&q * &s1);
            let u = &u0 - &(&q * &u1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (u0, u1) = (u1, u);
        }
        if let Some(lc) = r0.leading().cloned() {
            let inv = lc.inv()?;
            r0 = r0.scale(&inv);
            s0 = s0.scale(&inv);
            u0 = u0.scale(&inv);
        }
        Ok((r0, s0, u0))
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_at_matrix(&self, m: &Matrix) -> Result<Matrix> {
        if m.field() != self.field {
            return Err(Error::FieldMismatch(self.field, m.field()));
        }
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot evaluate at a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let mut acc = Matrix::zero(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?;
            for i in 0..n {
                acc[(i, i)] = &acc[(i, i)] + c;
            }
        }
        Ok(acc)
    }

    /// Degree first, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            self.coeffs
                .iter()
                .rev()
                .zip(other.coeffs.iter().rev())
                .map(|(a, b)| a.canonical_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    /// Product of `factors[i]^mults[i]`.
    pub fn product<'a>(field: FieldSpec, factors: impl IntoIterator<Item = (&'a Poly, u64)>) -> Poly {
        factors
            .into_iter()
            .fold(Poly::one(field), |acc, (p, e)| &acc * &p.pow(e))
    }

    /// Display without spaces, e.g. `t^2+1`.
    pub fn to_compact_string(&self) -> String {
        self.to_string().replace(' ', "")
    }

    /// Parses text such as `t^3 + 2*t + 5/2`, `t^2-1` or `-3t`.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Poly> {
        parse_poly(field, text)
    }
}

pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    f.check_field(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

fn add_coeffs(f: &Poly, g: &Poly, negate: bool) -> Poly {
    assert_eq!(f.field, g.field, "field mismatch in polynomial arithmetic");
    let n = f.coeffs.len().max(g.coeffs.len());
    let zero = f.field.zero();
    let coeffs = (0..n)
        .map(|k| {
            let a = f.coeffs.get(k).unwrap_or(&zero);
            let b = g.coeffs.get(k).unwrap_or(&zero);
            if negate {
                a - b
            } else {
                a + b
            }
        })
        .collect();
    Poly::new(f.field, coeffs)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        add_coeffs(self, rhs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        add_coeffs(self, rhs, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch in polynomial arithmetic");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(self.field, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{abs}*{var}")?;
            }
        }
        Ok(())
    }
}

fn parse_poly(field: FieldSpec, text: &str) -> Result<Poly> {
    let bad = |why: &str| Error::Parse(format!("bad polynomial `{text}`: {why}"));
    // Spaces separate tokens but may not split a number or join two of them.
    let tokens: Vec<&str> = text.split_whitespace().collect();
    for w in tokens.windows(2) {
        let (l, r) = (w[0].chars().last(), w[1].chars().next());
        let operand = |c: Option<char>| c.is_some_and(|c| c.is_ascii_alphanumeric() || c == '/');
        if operand(l) && operand(r) {
            return Err(bad("missing operator between terms"));
        }
    }
    let src: String = tokens.concat();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = Poly::zero(field);
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut negative = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            negative = bytes[i] == b'-';
            i += 1;
        } else if i != 0 {
            return Err(bad("expected `+` or `-` between terms"));
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
            i += 1;
        }
        let coeff = if i > start {
            field.parse_scalar(&src[start..i])?
        } else {
            field.one()
        };
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            if i >= bytes.len() || bytes[i] != b't' {
                return Err(bad("expected `t` after `*`"));
            }
        }
        if i < bytes.len() && bytes[i] == b't' {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let s = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = src[s..i].parse().map_err(|_| bad("bad exponent"))?;
            }
        } else if i == start {
            return Err(bad("empty term"));
        }
        let coeff = if negative { -coeff } else { coeff };
        acc = &acc + &Poly::monomial(coeff, exp);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn p(field: FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = FieldSpec::Prime(2);
        assert_eq!(&p(f2, "t+1") * &p(f2, "t+1"), p(f2, "t^2+1"));
        let (quo, rem) = p(q(), "t^2-1").divmod(&p(q(), "t-1")).unwrap();
        assert_eq!(quo, p(q(), "t+1"));
        assert!(rem.is_zero());
        assert!((&p(q(), "t^3+2") * &Poly::zero(q())).is_zero());
        assert_eq!(p(q(), "t").divmod(&Poly::zero(q())), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(q(), "t^2-1"), &p(q(), "t^2-2t+1")).unwrap(), p(q(), "t-1"));
        let f3 = FieldSpec::Prime(3);
        assert!(poly_gcd(&p(f3, "t^4+2t+1"), &Poly::one(f3)).unwrap().is_one());
        let f = p(q(), "3t^3 - 6t + 1");
        assert_eq!(poly_gcd(&f, &f).unwrap(), f.monic());
        assert_eq!(poly_gcd(&Poly::zero(q()), &Poly::zero(q())), Err(Error::UndefinedGcd));
    }

    #[test]
    fn xgcd_is_bezout() {
        let f7 = FieldSpec::Prime(7);
        let (a, b) = (p(f7, "t^3+2t+1"), p(f7, "t^2+3"));
        let (g, s, u) = a.xgcd(&b).unwrap();
        assert_eq!(&(&s * &a) + &(&u * &b), g);
        assert!(g.is_monic());
    }

    #[test]
    fn display_and_parse() {
        let f = p(q(), "t^3 + 2*t + 5/2");
        assert_eq!(f.to_string(), "t^3 + 2*t + 5/2");
        assert_eq!(p(q(), "-t^2 - 1").to_string(), "-t^2 - 1");
        assert_eq!(p(q(), "1/2t - 3").to_string(), "1/2*t - 3");
        assert_eq!(p(q(), "t^2 + t - t^2").to_string(), "t");
        assert_eq!(Poly::zero(q()).to_string(), "0");
        assert_eq!(p(q(), "t^2+1").to_compact_string(), "t^2+1");
        assert_eq!(p(FieldSpec::Prime(5), "t^2-1").to_string(), "t^2 + 4");
        assert!(Poly::parse(q(), "t^^2").is_err());
        assert!(Poly::parse(q(), "").is_err());
        assert!(Poly::parse(q(), "2 3").is_err());
        assert!(Poly::parse(q(), "x+1").is_err());
    }

    #[test]
    fn eval_at_matrix_examples() {
        let f5 = FieldSpec::Prime(5);
        let m = Matrix::from_i64_rows(f5, &[&[1, 2], &[3, 4]]);
        assert_eq!(Poly::t(f5).eval_at_matrix(&m).unwrap(), m);
        let j2 = Matrix::jordan_block(q(), &q().zero(), 2);
        assert!(p(q(), "t^2").eval_at_matrix(&j2).unwrap().is_zero());
        let cp = m.charpoly().unwrap();
        assert!(cp.eval_at_matrix(&m).unwrap().is_zero());
        assert!(matches!(
            p(q(), "t").eval_at_matrix(&m),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn pow_mod_matches_naive() {
        let f3 = FieldSpec::Prime(3);
        let m = p(f3, "t^3+2t+1");
        let a = p(f3, "t^2+t");
        let naive = a.pow(13).rem(&m).unwrap();
        assert_eq!(a.pow_mod(&BigUint::from(13u32), &m).unwrap(), naive);
    }
}
