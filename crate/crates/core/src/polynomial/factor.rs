//! Squarefree decomposition and complete factorization into monic
//! irreducibles, over GF(p) (distinct-degree + Cantor–Zassenhaus) and over ℚ
//! (Zassenhaus with Hensel lifting, see [`super::zassenhaus`]).

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{poly_gcd, zassenhaus, Poly};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrreducibleFactor {
    /// Monic and irreducible.
    pub poly: Poly,
    /// `deg poly`, the degree of the residue field `K[t]/(poly)` over `K`.
    pub degree: usize,
    pub multiplicity: usize,
}

impl IrreducibleFactor {
    pub fn new(poly: Poly, multiplicity: usize) -> Self {
        let degree = poly.degree().expect("irreducible factor is nonconstant");
        IrreducibleFactor { poly, degree, multiplicity }
    }
}

fn require_monic_nonconstant(f: &Poly) -> Result<()> {
    if !f.is_monic() || f.is_constant() {
        return Err(Error::InvalidArgument(format!(
            "expected a monic nonconstant polynomial, got {f}"
        )));
    }
    Ok(())
}

/// Splits a monic `f` into `[(g_i, e_i)]` with `f = ∏ g_i^{e_i}`, each `g_i`
/// monic squarefree, pairwise coprime, and the `e_i` distinct and ascending.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    require_monic_nonconstant(f)?;
    let mut parts = match f.field() {
        FieldSpec::Rationals => yun(f)?,
        FieldSpec::Prime(p) => squarefree_char_p(f, p as usize)?,
    };
    parts.sort_by_key(|(_, e)| *e);
    let rebuilt = Poly::product(f.field(), parts.iter().map(|(g, e)| (g, *e as u64)));
    if &rebuilt != f {
        return Err(Error::Internal(format!("squarefree decomposition of {f} does not multiply back")));
    }
    Ok(parts)
}

fn yun(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let df = f.derivative();
    let a0 = poly_gcd(f, &df)?;
    let mut b = f.exact_div(&a0)?;
    let c = df.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_one() {
        let a = poly_gcd(&b, &d)?;
        b = b.exact_div(&a)?;
        let c = d.exact_div(&a)?;
        d = &c - &b.derivative();
        if !a.is_one() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// p-th root of a polynomial whose derivative vanishes; on GF(p) the
/// Frobenius map fixes every coefficient.
fn pth_root(f: &Poly, p: usize) -> Poly {
    let coeffs = f.coeffs().iter().step_by(p).cloned().collect();
    Poly::new(f.field(), coeffs)
}

fn squarefree_char_p(f: &Poly, p: usize) -> Result<Vec<(Poly, usize)>> {
    let df = f.derivative();
    if df.is_zero() {
        return Ok(squarefree_char_p(&pth_root(f, p), p)?
            .into_iter()
            .map(|(g, e)| (g, e * p))
            .collect());
    }
    let mut out = Vec::new();
    let mut c = poly_gcd(f, &df)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = poly_gcd(&w, &c)?;
        let fac = w.exact_div(&y)?;
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w)?;
        i += 1;
    }
    if !c.is_one() {
        out.extend(
            squarefree_char_p(&pth_root(&c, p), p)?
                .into_iter()
                .map(|(g, e)| (g, e * p)),
        );
    }
    Ok(out)
}

/// Factors with the default seed 0.
pub fn factor(f: &Poly) -> Result<Vec<IrreducibleFactor>> {
    factor_with_seed(f, 0)
}

/// Complete factorization of a monic nonconstant polynomial. The result is
/// sorted by degree, then by coefficients from the top down, and does not
/// depend on the seed.
pub fn factor_with_seed(f: &Poly, seed: u64) -> Result<Vec<IrreducibleFactor>> {
    require_monic_nonconstant(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f)? {
        let irreducibles = match f.field() {
            FieldSpec::Rationals => zassenhaus::factor_squarefree_rational(&g)?,
            FieldSpec::Prime(_) => factor_squarefree_finite(&g, &mut rng)?,
        };
        out.extend(irreducibles.into_iter().map(|p| IrreducibleFactor::new(p, e)));
    }
    out.sort_by(|a, b| a.poly.canonical_cmp(&b.poly));
    let rebuilt = Poly::product(
        f.field(),
        out.iter().map(|fac| (&fac.poly, fac.multiplicity as u64)),
    );
    if &rebuilt != f {
        return Err(Error::Internal(format!("factorization of {f} does not multiply back")));
    }
    Ok(out)
}

/// Nonconstant and without proper factors. Non-monic input is normalized.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if f.is_constant() {
        return Ok(false);
    }
    let facs = factor(&f.monic())?;
    Ok(facs.len() == 1 && facs[0].multiplicity == 1)
}

/// Monic squarefree `f` over GF(p) into its irreducible factors.
pub(super) fn factor_squarefree_finite(f: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f)? {
        equal_degree(&g, d, rng, &mut out)?;
    }
    Ok(out)
}

/// Groups the factors of a squarefree monic `f` by degree: `(d, product of
/// all irreducible factors of degree d)`.
pub(crate) fn distinct_degree(f: &Poly) -> Result<Vec<(usize, Poly)>> {
    let field = f.field();
    let q = BigUint::from(field.characteristic());
    let t = Poly::t(field);
    let mut h = f.clone();
    let mut frob = t.clone();
    let mut out = Vec::new();
    let mut k = 1;
    while h.degree().unwrap_or(0) >= 2 * k {
        frob = frob.pow_mod(&q, &h)?;
        let g = poly_gcd(&h, &(&frob - &t))?;
        if !g.is_one() {
            h = h.exact_div(&g)?;
            frob = frob.rem(&h)?;
            out.push((k, g));
        }
        k += 1;
    }
    if let Some(d) = h.degree().filter(|&d| d > 0) {
        out.push((d, h));
    }
    Ok(out)
}

fn random_below(field: FieldSpec, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let p = field.characteristic();
    let coeffs = (0..deg)
        .map(|_| field.from_i64(rng.random_range(0..p) as i64))
        .collect();
    Poly::new(field, coeffs)
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let n = f.degree().expect("nonzero");
    if n == d {
        out.push(f.clone());
        return Ok(());
    }
    let field = f.field();
    let p = field.characteristic();
    let half_exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = random_below(field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // Trace map GF(2^d) -> GF(2).
            let mut acc = a.clone();
            let mut sq = a.clone();
            for _ in 1..d {
                sq = (&sq * &sq).rem(f)?;
                acc = &acc + &sq;
            }
            acc
        } else {
            &a.pow_mod(&half_exp, f)? - &Poly::one(field)
        };
        if b.is_zero() {
            continue;
        }
        let g = poly_gcd(f, &b)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let rest = f.exact_div(&g)?;
            equal_degree(&g, d, rng, out)?;
            equal_degree(&rest, d, rng, out)?;
            return Ok(());
        }
    }
}
