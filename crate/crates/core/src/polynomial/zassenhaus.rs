//! Factorization of squarefree polynomials over ℚ: reduce to a primitive
//! integer polynomial, factor modulo a small good prime, lift the modular
//! factorization with quadratic Hensel steps past the Landau–Mignotte bound
//! and recombine by subset enumeration.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::factor::factor_squarefree_finite;
use super::{poly_gcd, Poly};
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec, Scalar};

/// Integer polynomial, ascending coefficients, no trailing zeros.
type IntPoly = Vec<BigInt>;

fn trim(mut f: IntPoly) -> IntPoly {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

fn deg(f: &IntPoly) -> usize {
    f.len().saturating_sub(1)
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn reduce(f: &IntPoly, m: &BigInt) -> IntPoly {
    trim(f.iter().map(|c| sym_mod(c, m)).collect())
}

fn add(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let n = f.len().max(g.len());
    trim(
        (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() + g.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn sub(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let n = f.len().max(g.len());
    trim(
        (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - g.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn mul(f: &IntPoly, g: &IntPoly) -> IntPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(out)
}

fn scale(f: &IntPoly, c: &BigInt) -> IntPoly {
    trim(f.iter().map(|a| a * c).collect())
}

/// Division by a monic `g` with all arithmetic reduced mod `m`.
fn divrem_monic_mod(f: &IntPoly, g: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    let dg = deg(g);
    debug_assert!(g.last().is_some_and(One::is_one));
    if f.len() <= dg {
        return (Vec::new(), reduce(f, m));
    }
    let mut rem: IntPoly = f.iter().map(|c| c.mod_floor(m)).collect();
    let mut quot = vec![BigInt::zero(); f.len() - dg];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dg].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (i, gi) in g.iter().enumerate() {
            rem[k + i] = (&rem[k + i] - &c * gi).mod_floor(m);
        }
        quot[k] = c;
    }
    rem.truncate(dg);
    (reduce(&quot, m), reduce(&rem, m))
}

/// Exact quotient over ℤ, or `None` when `g` does not divide `f`.
fn exact_div(f: &IntPoly, g: &IntPoly) -> Option<IntPoly> {
    let dg = deg(g);
    if f.len() < g.len() {
        return None;
    }
    let lc = g.last()?;
    let mut rem = f.clone();
    let mut quot = vec![BigInt::zero(); f.len() - dg];
    for k in (0..quot.len()).rev() {
        let (q, r) = rem[k + dg].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if q.is_zero() {
            continue;
        }
        for (i, gi) in g.iter().enumerate() {
            rem[k + i] -= &q * gi;
        }
        quot[k] = q;
    }
    rem.iter().all(Zero::is_zero).then(|| trim(quot))
}

fn content(f: &IntPoly) -> BigInt {
    f.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
fn primitive(f: &IntPoly) -> IntPoly {
    let mut c = content(f);
    if f.last().is_some_and(Signed::is_negative) {
        c = -c;
    }
    f.iter().map(|a| a / &c).collect()
}

fn to_integer(f: &Poly) -> IntPoly {
    let denom_lcm = f
        .coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational polynomial").denom().clone())
        .fold(BigInt::one(), |l, d| l.lcm(&d));
    let ints: IntPoly = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().expect("rational polynomial");
            r.numer() * (&denom_lcm / r.denom())
        })
        .collect();
    primitive(&ints)
}

fn to_monic_rational(f: &IntPoly) -> Poly {
    let lc = f.last().expect("nonzero").clone();
    let coeffs = f
        .iter()
        .map(|c| Scalar::Rational(BigRational::new(c.clone(), lc.clone())))
        .collect();
    Poly::new(FieldSpec::Rationals, coeffs)
}

fn to_gf(f: &IntPoly, p: u32) -> Poly {
    let field = FieldSpec::Prime(p);
    Poly::new(field, f.iter().map(|c| field.from_bigint(c)).collect())
}

fn from_gf(f: &Poly) -> IntPoly {
    trim(
        f.coeffs()
            .iter()
            .map(|c| BigInt::from(c.residue().expect("prime field element")))
            .collect(),
    )
}

/// Smallest prime not dividing `lc` modulo which `f` stays squarefree.
fn good_prime(f: &IntPoly) -> Result<u32> {
    let lc = f.last().expect("nonzero");
    for p in (2u32..).filter(|&p| is_prime(p as u64)).take(10_000) {
        if (lc % p).is_zero() {
            continue;
        }
        let fp = to_gf(f, p);
        if poly_gcd(&fp, &fp.derivative())?.is_one() {
            return Ok(p);
        }
    }
    Err(Error::Internal("no good reduction prime found".into()))
}

/// One quadratic Hensel step: from `f ≡ g·h`, `s·g + t·h ≡ 1 (mod m)` with `h`
/// monic to the same relations modulo `m²`.
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let e = reduce(&sub(f, &mul(g, h)), &m2);
    let (q, r) = divrem_monic_mod(&mul(s, &e), h, &m2);
    let g_new = reduce(&add(&add(g, &mul(t, &e)), &mul(&q, g)), &m2);
    let h_new = reduce(&add(h, &r), &m2);
    let b = reduce(
        &sub(&add(&mul(s, &g_new), &mul(t, &h_new)), &vec![BigInt::one()]),
        &m2,
    );
    let (c, d) = divrem_monic_mod(&mul(s, &b), &h_new, &m2);
    let s_new = reduce(&sub(s, &d), &m2);
    let t_new = reduce(&sub(&sub(t, &mul(t, &b)), &mul(&c, &g_new)), &m2);
    (g_new, h_new, s_new, t_new)
}

/// Lifts `f ≡ lc(f)·∏ u_i (mod p)` to monic factors modulo `modulus = p^(2^j)`.
fn hensel_lift(f: &IntPoly, factors: &[IntPoly], p: u32, modulus: &BigInt) -> Result<Vec<IntPoly>> {
    let pb = BigInt::from(p);
    let lc = f.last().expect("nonzero").clone();
    let mut current = f.clone();
    let mut lifted = Vec::with_capacity(factors.len());
    for i in 0..factors.len() - 1 {
        let h = factors[i].clone();
        let g = reduce(
            &factors[i + 1..]
                .iter()
                .fold(vec![lc.clone()], |acc, u| mul(&acc, u)),
            &pb,
        );
        let (one, s, _) = to_gf(&g, p).xgcd(&to_gf(&h, p))?;
        if !one.is_one() {
            return Err(Error::Internal("modular factors are not coprime".into()));
        }
        let s = s.rem(&to_gf(&h, p))?;
        let t = (&Poly::one(FieldSpec::Prime(p)) - &(&s * &to_gf(&g, p))).exact_div(&to_gf(&h, p))?;
        let (mut g, mut h, mut s, mut t) = (g, h, reduce(&from_gf(&s), &pb), reduce(&from_gf(&t), &pb));
        let mut m = pb.clone();
        while &m < modulus {
            (g, h, s, t) = hensel_step(&current, &g, &h, &s, &t, &m);
            m = &m * &m;
        }
        lifted.push(h);
        current = g;
    }
    let lc_inv = lc
        .extended_gcd(modulus)
        .x
        .mod_floor(modulus);
    lifted.push(reduce(&scale(&current, &lc_inv), modulus));
    Ok(lifted)
}

fn factor_primitive_squarefree(f: &IntPoly, seed: u64) -> Result<Vec<IntPoly>> {
    let n = deg(f);
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    let p = good_prime(f)?;
    let fp = to_gf(f, p).monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modular: Vec<IntPoly> = factor_squarefree_finite(&fp, &mut rng)?
        .iter()
        .map(from_gf)
        .collect();
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }

    // Landau–Mignotte: every factor scaled to leading coefficient lc(f) has
    // coefficients below |lc|·2^n·||f||_2.
    let max_abs = f.iter().map(|c| c.abs()).max().expect("nonzero");
    let sqrt_bound = BigInt::from(((n + 1) as f64).sqrt().ceil().to_u64().unwrap_or(u64::MAX));
    let lc_abs = f.last().expect("nonzero").abs();
    let bound = lc_abs * (BigInt::one() << n) * sqrt_bound * max_abs;
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift(f, &modular, p, &modulus)?;

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'sizes: while 2 * size <= remaining.len() {
        for subset in remaining.iter().copied().combinations(size) {
            let lc = current.last().expect("nonzero").clone();
            let candidate = subset
                .iter()
                .fold(vec![lc], |acc, &i| reduce(&mul(&acc, &lifted[i]), &modulus));
            let candidate = primitive(&candidate);
            if let Some(q) = exact_div(&current, &candidate) {
                found.push(candidate);
                current = q;
                remaining.retain(|i| !subset.contains(i));
                continue 'sizes;
            }
        }
        size += 1;
    }
    found.push(primitive(&current));
    Ok(found)
}

/// Monic irreducible factors of a squarefree monic rational polynomial.
pub(super) fn factor_squarefree_rational(f: &Poly) -> Result<Vec<Poly>> {
    let ints = to_integer(f);
    Ok(factor_primitive_squarefree(&ints, 0)?
        .iter()
        .map(to_monic_rational)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        trim(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn integer_conversion_clears_denominators() {
        let q = FieldSpec::Rationals;
        let f = Poly::parse(q, "t^2 - 1/2t + 1/3").unwrap();
        assert_eq!(to_integer(&f), ip(&[2, -3, 6]));
        assert_eq!(to_monic_rational(&ip(&[2, -3, 6])), f);
    }

    #[test]
    fn exact_division_over_z() {
        assert_eq!(exact_div(&ip(&[-1, 0, 1]), &ip(&[-1, 1])), Some(ip(&[1, 1])));
        assert_eq!(exact_div(&ip(&[-1, 0, 4]), &ip(&[-1, 2])), Some(ip(&[1, 2])));
        assert_eq!(exact_div(&ip(&[1, 0, 1]), &ip(&[-1, 1])), None);
    }

    #[test]
    fn hensel_lift_reproduces_product_mod_modulus() {
        // 6t^3 + t^2 - 4t + 1 = (2t - 1)(3t - 1)(t + 1)
        let f = ip(&[1, -4, 1, 6]);
        let p = good_prime(&f).unwrap();
        let fp = to_gf(&f, p).monic();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let modular: Vec<IntPoly> = factor_squarefree_finite(&fp, &mut rng)
            .unwrap()
            .iter()
            .map(from_gf)
            .collect();
        let modulus = BigInt::from(p).pow(8);
        let lifted = hensel_lift(&f, &modular, p, &modulus).unwrap();
        let prod = lifted
            .iter()
            .fold(vec![f.last().unwrap().clone()], |acc, u| reduce(&mul(&acc, u), &modulus));
        assert_eq!(prod, reduce(&f, &modulus));
        let mut got = factor_primitive_squarefree(&f, 0).unwrap();
        got.sort();
        let mut want = vec![ip(&[-1, 2]), ip(&[-1, 3]), ip(&[1, 1])];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn recombination_handles_splitting_modulo_every_prime() {
        // t^4 + 1 is irreducible over ℚ yet reducible modulo every prime.
        let f = ip(&[1, 0, 0, 0, 1]);
        assert_eq!(factor_primitive_squarefree(&f, 0).unwrap(), vec![f.clone()]);
        // (t^4 + 1)(t^2 - 3)
        let g = mul(&f, &ip(&[-3, 0, 1]));
        let mut got = factor_primitive_squarefree(&g, 0).unwrap();
        got.sort_by_key(|x| x.len());
        assert_eq!(got, vec![ip(&[-3, 0, 1]), f]);
    }
}
