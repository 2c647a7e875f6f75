//! The ring of quasimodular forms `Q[C2, C4, C6]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::solve_certified;
use crate::poly::{Named, Poly};
use crate::scalar::{fmt_rational, int, parse_rational, Rational};
use crate::series::Var;
use crate::Series;

/// Polynomial in `C2, C4, C6`.
pub type QModPoly = Poly<3, Rational>;

/// Weights of `C2, C4, C6`.
pub const WEIGHTS: [i32; 3] = [2, 4, 6];

/// Extra matched coefficients demanded beyond the dimension.
pub const SURPLUS: usize = 4;

pub fn c2() -> QModPoly {
    QModPoly::generator(0)
}

pub fn c4() -> QModPoly {
    QModPoly::generator(1)
}

pub fn c6() -> QModPoly {
    QModPoly::generator(2)
}

/// `B_0 .. B_n` with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(int(1));
    for k in 1..=n {
        // sum_{j<=k} binom(k+1, j) B_j = 0
        let mut s = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        // binom now equals binom(k+1, k)
        b.push(-s / Rational::from_integer(binom));
    }
    b
}

pub fn bernoulli(k: usize) -> Rational {
    bernoulli_table(k)[k].clone()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// `sum_{d | n} d^k`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `C_k` to precision `q^n`.
pub fn eisenstein_series(k: u32, n: i32) -> Result<Series> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Precondition(format!("Eisenstein weight {k} must be even and >= 2")));
    }
    let kf = Rational::from_integer(factorial(k));
    let c0 = -bernoulli(k as usize) / (Rational::from_integer(BigInt::from(k)) * &kf);
    let two_over = int(2) / &kf;
    let coeffs = std::iter::once((0, c0)).chain(
        (1..n.max(0)).map(|m| (m, &two_over * Rational::from_integer(sigma(k - 1, m as u64)))),
    );
    Series::univariate(Var::Q, Some(n), 0, coeffs)
}

/// `prod_{m>=1} (1 - q^m)` to `q^n` as integer coefficients `0..n`.
pub fn euler_product(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n];
    if n == 0 {
        return c;
    }
    c[0] = BigInt::one();
    for m in 1..n {
        for i in (m..n).rev() {
            let t = c[i - m].clone();
            c[i] -= t;
        }
    }
    c
}

/// `Delta = q prod (1 - q^m)^24` to precision `q^n`.
pub fn delta_series(n: i32) -> Series {
    let len = (n - 1).max(0) as usize;
    let mut c = vec![BigInt::zero(); len];
    if len > 0 {
        c[0] = BigInt::one();
    }
    for m in 1..len {
        for _ in 0..24 {
            for i in (m..len).rev() {
                let t = c[i - m].clone();
                c[i] -= t;
            }
        }
    }
    Series::univariate(
        Var::Q,
        Some(n),
        1,
        c.into_iter().enumerate().map(|(i, x)| (i as i32 + 1, Rational::from_integer(x))),
    )
    .expect("exponents above floor")
}

/// `1/Delta` to precision `q^n` (floor `q^-1`).
pub fn inverse_delta(n: i32) -> Series {
    delta_series(n + 2).invert().expect("Delta has leading term q")
}

/// Monomials `C2^a C4^b C6^c` of weight `k`, in canonical order.
pub fn monomials(k: i32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    if k < 0 || k % 2 == 1 {
        return out;
    }
    for c in 0..=(k / 6) {
        for b in 0..=((k - 6 * c) / 4) {
            let rest = k - 6 * c - 4 * b;
            if rest % 2 == 0 {
                out.push([(rest / 2) as u32, b as u32, c as u32]);
            }
        }
    }
    out.sort();
    out
}

/// Monomials of `C4, C6` only.
pub fn modular_monomials(k: i32) -> Vec<[u32; 3]> {
    monomials(k).into_iter().filter(|e| e[0] == 0).collect()
}

/// `dim QMod_k`.
pub fn dim(k: i32) -> usize {
    monomials(k).len()
}

/// The generators `C2, C4, C6` to precision `q^n`.
pub fn generators(n: i32) -> [Series; 3] {
    [
        eisenstein_series(2, n).unwrap(),
        eisenstein_series(4, n).unwrap(),
        eisenstein_series(6, n).unwrap(),
    ]
}

/// q-expansion of `p` to precision `q^n`.
pub fn evaluate(p: &QModPoly, n: i32) -> Result<Series> {
    if p.is_zero() {
        return Ok(Series::zero(&[Var::Q], &[Some(n)], &[0]));
    }
    p.evaluate(&generators(n))
}

/// Recognition in an explicit monomial basis. Returns the polynomial and
/// the number of surplus coefficients verified.
pub fn recognize_in(s: &Series, basis: &[[u32; 3]]) -> Result<(QModPoly, usize)> {
    if s.vars() != [Var::Q] {
        return Err(Error::Precondition("recognition needs a series in q alone".into()));
    }
    let p = s.precs()[0]
        .ok_or_else(|| Error::Precondition("recognition needs finite q-precision".into()))?;
    let lo = s.floors()[0].min(0);
    let nrows = (p - lo).max(0) as usize;
    if nrows < basis.len() + SURPLUS {
        return Err(Error::InsufficientPrecision(format!(
            "{nrows} coefficients for a basis of {} (need {} more)",
            basis.len(),
            SURPLUS
        )));
    }
    let gens = generators(p);
    let cols: Vec<Series> = basis
        .iter()
        .map(|e| QModPoly::monomial(*e, int(1)).evaluate(&gens))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(nrows);
    let mut rhs = Vec::with_capacity(nrows);
    for e in lo..p {
        rows.push(cols.iter().map(|c| c.coeff(&[e])).collect::<Vec<_>>());
        rhs.push(s.coeff(&[e]));
    }
    let sol = solve_certified(&rows, &rhs, basis.len(), SURPLUS, |i| {
        format!("coefficient of q^{}", lo + i as i32)
    })?;
    let mut poly = QModPoly::zero();
    for (e, x) in basis.iter().zip(sol.x) {
        poly.add_term(*e, x);
    }
    Ok((poly, sol.surplus))
}

/// The unique weight-`k` quasimodular form matching `s`.
pub fn recognize(s: &Series, k: i32) -> Result<QModPoly> {
    recognize_in(s, &monomials(k)).map(|r| r.0)
}

/// Recognition inside the modular forms `Q[C4, C6]` of weight `k`.
pub fn recognize_modular(s: &Series, k: i32) -> Result<QModPoly> {
    recognize_in(s, &modular_monomials(k)).map(|r| r.0)
}

/// Recognition in `QMod_{<=k}` (mixed weights).
pub fn recognize_upto(s: &Series, k: i32) -> Result<QModPoly> {
    let basis: Vec<[u32; 3]> = (0..=k).step_by(2).flat_map(monomials).collect();
    recognize_in(s, &basis).map(|r| r.0)
}

/// Formal derivative in `C2`.
pub fn ddc2(p: &QModPoly) -> QModPoly {
    p.partial(0)
}

/// Sets `C2` to zero.
pub fn project_modular(p: &QModPoly) -> QModPoly {
    p.filter(|e| e[0] == 0)
}

/// Weight of a homogeneous polynomial.
pub fn weight(p: &QModPoly) -> Option<i32> {
    p.weight(&WEIGHTS)
}

/// Human-readable form, e.g. `(-2)*C2^2 + (10)*C4`.
pub fn show(p: &QModPoly) -> String {
    Named { poly: p, names: ["C2", "C4", "C6"] }.to_string()
}

/// JSON list of `{"e": [a, b, c], "c": "num/den"}`.
pub fn to_json(p: &QModPoly) -> serde_json::Value {
    serde_json::Value::Array(
        p.terms()
            .map(|(e, c)| serde_json::json!({"e": e, "c": fmt_rational(c)}))
            .collect(),
    )
}

pub fn from_json(v: &serde_json::Value) -> Result<QModPoly> {
    let err = || Error::Parse("expected [{\"e\": [a,b,c], \"c\": \"n/d\"}]".into());
    let mut p = QModPoly::zero();
    for t in v.as_array().ok_or_else(err)? {
        let e = t["e"].as_array().ok_or_else(err)?;
        if e.len() != 3 {
            return Err(err());
        }
        let mut k = [0u32; 3];
        for i in 0..3 {
            k[i] = e[i].as_u64().ok_or_else(err)? as u32;
        }
        let c = t["c"].as_str().and_then(parse_rational).ok_or_else(err)?;
        p.add_term(k, c);
    }
    Ok(p)
}

/// Checks `[d/dC2, q d/dq] f = -2k f` for the monomial `f` of weight `k`
/// at the level of recognized polynomials, using `q`-precision `n`.
pub fn commutator_defect(f: &QModPoly, k: i32, n: i32) -> Result<QModPoly> {
    let df = evaluate(f, n)?.q_derive(Var::Q)?;
    let lhs = ddc2(&recognize(&df, k + 2)?);
    let g = ddc2(f);
    let dg = evaluate(&g, n)?.q_derive(Var::Q)?;
    let rhs = if k >= 2 { recognize(&dg, k)? } else { QModPoly::zero() };
    Ok(lhs.sub(&rhs).add(&f.scale(&int(2 * k as i64))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(7), int(0));
    }

    #[test]
    fn eisenstein_values() {
        let c2 = eisenstein_series(2, 4).unwrap();
        assert_eq!(
            (0..4).map(|e| c2.coeff(&[e])).collect::<Vec<_>>(),
            vec![rat(-1, 24), int(1), int(3), int(4)]
        );
        let c4 = eisenstein_series(4, 2).unwrap();
        assert_eq!(c4.coeff(&[0]), rat(1, 2880));
        assert_eq!(c4.coeff(&[1]), rat(1, 12));
        assert_eq!(eisenstein_series(6, 1).unwrap().coeff(&[0]), rat(-1, 181440));
        assert!(eisenstein_series(3, 5).is_err());
        assert!(eisenstein_series(0, 5).is_err());
    }

    #[test]
    fn delta_and_inverse() {
        let d = delta_series(5);
        let v: Vec<_> = (1..5).map(|e| d.coeff(&[e])).collect();
        assert_eq!(v, vec![int(1), int(-24), int(252), int(-1472)]);
        let inv = inverse_delta(3);
        let v: Vec<_> = (-1..3).map(|e| inv.coeff(&[e])).collect();
        assert_eq!(v, vec![int(1), int(24), int(324), int(3200)]);
        let one = delta_series(7).mul(&inverse_delta(5)).unwrap();
        assert_eq!(one, Series::one(&[Var::Q], &[Some(6)]));
    }

    #[test]
    fn evaluation() {
        let p = c2().mul(&c2());
        assert_eq!(evaluate(&p, 3).unwrap().coeff(&[1]), rat(-1, 12));
        assert!(evaluate(&QModPoly::zero(), 3).unwrap().is_zero());
    }

    #[test]
    fn recognize_derivative_of_c2() {
        let d = eisenstein_series(2, 12).unwrap().q_derive(Var::Q).unwrap();
        let p = recognize(&d, 4).unwrap();
        let expected = c2().mul(&c2()).scale(&int(-2)).add(&c4().scale(&int(10)));
        assert_eq!(p, expected);
        assert_eq!(ddc2(&p), c2().scale(&int(-4)));
    }

    #[test]
    fn recognize_delta_as_cusp_form() {
        let p = recognize_modular(&delta_series(12), 12).unwrap();
        assert_eq!(weight(&p), Some(12));
        assert_eq!(evaluate(&p, 3).unwrap().coeff(&[0]), int(0));
        assert!(recognize(&eisenstein_series(4, 6).unwrap(), 6).is_err());
    }

    #[test]
    fn recognition_needs_surplus() {
        let s = eisenstein_series(4, 5).unwrap();
        assert!(matches!(recognize(&s, 4), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn projection() {
        let p = c2().add(&c4());
        assert_eq!(project_modular(&p), c4());
        assert_eq!(project_modular(&project_modular(&p)), project_modular(&p));
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim(0), 1);
        assert_eq!(dim(2), 1);
        assert_eq!(dim(4), 2);
        assert_eq!(dim(12), 7);
        assert_eq!(monomials(4), vec![[0, 1, 0], [2, 0, 0]]);
    }
}
