//! Weak Jacobi forms of even weight, `Q[C4, C6, phi_{-2,1}, phi_{0,1}]`.
//!
//! Generators are normalized so that `phi_{-2,1} = (p^{1/2} - p^{-1/2})^2
//! prod (...)` and `phi_{0,1} = p + 10 + p^{-1} + O(q)`. Fourier series
//! use `y = -p` unless stated otherwise; Hecke operators act in `p`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Roots;
use num_traits::{One, Zero};

use crate::elliptic::{self, WSeries};
use crate::error::{Error, Result};
use crate::linalg::{RowReducer, RowStatus};
use crate::poly::{Named, Poly};
use crate::qmod::{self, QModPoly, SURPLUS};
use crate::scalar::{int, Rational};
use crate::series::Var;
use crate::Series;

/// Polynomial in `C4, C6, phi_{-2,1}, phi_{0,1}`.
pub type JacobiPoly = Poly<4, Rational>;

pub const WEIGHTS: [i32; 4] = [4, 6, -2, 0];
pub const INDEX: [i32; 4] = [0, 0, 1, 1];

/// The two index-one generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    PhiM2,
    Phi0,
}

pub fn phi_m2() -> JacobiPoly {
    JacobiPoly::generator(2)
}

pub fn phi_0() -> JacobiPoly {
    JacobiPoly::generator(3)
}

pub fn index(p: &JacobiPoly) -> Option<i32> {
    p.weight(&INDEX)
}

pub fn weight(p: &JacobiPoly) -> Option<i32> {
    p.weight(&WEIGHTS)
}

pub fn show(p: &JacobiPoly) -> String {
    Named { poly: p, names: ["C4", "C6", "phi_m2_1", "phi_0_1"] }.to_string()
}

/// Monomials of weight `k` and index `m`.
pub fn monomials(k: i32, m: i32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    for c in 0..=m {
        let d = m - c;
        let rest = k + 2 * c;
        for e in qmod::modular_monomials(rest) {
            out.push([e[1], e[2], c as u32, d as u32]);
        }
    }
    out.sort();
    out
}

pub fn dim(k: i32, m: i32) -> usize {
    monomials(k, m).len()
}

/// Largest `|r|` with `r^2 <= 4nm + m^2`, the support of `q^n` in a weak
/// Jacobi form of index `m >= 0`.
pub fn support_radius(n: i32, m: i32) -> Option<i32> {
    let b = 4 * n as i64 * m as i64 + (m as i64) * (m as i64);
    if b < 0 {
        return None;
    }
    Some(b.sqrt() as i32)
}

/// `p -> -y`: reads a `p`-series as a `y`-series.
pub fn p_to_y(s: &Series) -> Result<Series> {
    s.negate_var(Var::P)?.rename(Var::P, Var::Y)
}

/// `y -> -p`.
pub fn y_to_p(s: &Series) -> Result<Series> {
    s.negate_var(Var::Y)?.rename(Var::Y, Var::P)
}

/// `phi_{-2,1}` in `(p, q)` to `q^n`, exact in `p`.
pub fn phi_m2_fourier_p(n: i32) -> Series {
    let part = elliptic::theta_product_part(n);
    let lead = Series::from_terms(
        &[Var::P, Var::Q],
        &[None, Some(n)],
        &[-1, 0],
        [(vec![1, 0], int(1)), (vec![0, 0], int(-2)), (vec![-1, 0], int(1))],
    )
    .unwrap();
    lead.mul(&part).unwrap().mul(&part).unwrap().tighten_floor(Var::P).unwrap()
}

/// `1/phi_{-2,1}` in `(p, q)` to `q^n`, expanded in `|q| < |p| < 1` and
/// known below `p^pprec`.
pub fn inverse_phi_m2_p(n: i32, pprec: i32) -> Result<Series> {
    let part = elliptic::theta_product_part(n);
    let inv_part = part.mul(&part)?.invert()?;
    // 1/(p - 2 + 1/p) = p/(1-p)^2 = sum_{r>=1} r p^r
    let lead = Series::from_terms(
        &[Var::P, Var::Q],
        &[Some(pprec), Some(n)],
        &[1, 0],
        (1..pprec).map(|r| (vec![r, 0], int(r as i64))),
    )?;
    lead.mul(&inv_part)
}

/// `phi_{0,1} = 12 phi_{-2,1} wp` in `(p, q)` to `q^n`, exact in `p`.
pub fn phi_0_fourier_p(n: i32) -> Result<Series> {
    let rmax = support_radius(n.max(1) - 1, 1).unwrap();
    let phi = phi_m2_fourier_p(n);
    // the product is known for p-exponents below pprec + floor(phi_{-2,1})
    let pprec = rmax + 1 - phi.floors()[0];
    let wp = elliptic::wp_fourier(0, pprec, n);
    let prod = phi.mul(&wp)?.scale(&int(12));
    promote_weak_jacobi(&prod, Var::P, 1)
}

/// Declares the elliptic variable `v` exact after checking that, on
/// the known window, every coefficient satisfies the weak Jacobi support
/// bound for index `m` and that the window covers that support.
pub fn promote_weak_jacobi(s: &Series, v: Var, m: i32) -> Result<Series> {
    let iv = s.index_of(v)?;
    let iq = s.index_of(Var::Q).or_else(|_| s.index_of(Var::Qt))?;
    let qp = s.precs()[iq]
        .ok_or_else(|| Error::Precondition("q-variable must be truncated".into()))?;
    let qlo = s.floors()[iq];
    for (e, _) in s.terms() {
        let ok = support_radius(e[iq], m).is_some_and(|r| e[iv].abs() <= r);
        if !ok {
            return Err(Error::Precondition(format!(
                "coefficient at {v}^{} q^{} outside weak Jacobi support of index {m}",
                e[iv], e[iq]
            )));
        }
    }
    if let Some(vp) = s.precs()[iv] {
        for n in qlo..qp {
            if let Some(r) = support_radius(n, m) {
                if r >= vp {
                    return Err(Error::InsufficientPrecision(format!(
                        "{v}-window below {} does not cover the support at q^{n}",
                        vp
                    )));
                }
            }
        }
    }
    s.promote_exact(v)
}

/// Fourier expansion of a generator in `(y, q)` to `q^n`.
pub fn generator_fourier(g: Generator, n: i32) -> Result<Series> {
    let s = match g {
        Generator::PhiM2 => phi_m2_fourier_p(n),
        Generator::Phi0 => phi_0_fourier_p(n)?,
    };
    p_to_y(&s)
}

/// `u`-Taylor expansion of a generator, known below `u^prec`.
pub fn generator_utaylor(g: Generator, prec: i32) -> Result<WSeries> {
    let th = elliptic::theta_taylor_w(prec + 2);
    let t2 = th.mul(&th).truncate(prec);
    let w = match g {
        Generator::PhiM2 => t2,
        Generator::Phi0 => t2
            .mul(&elliptic::wp_taylor(0, prec + 2))
            .scale(&QModPoly::constant(int(12)))
            .truncate(prec),
    };
    w.w_to_u()
}

fn fourier_generators(n: i32) -> Result<[Series; 4]> {
    let vars = [Var::Y, Var::Q];
    Ok([
        qmod::eisenstein_series(4, n)?.embed(&vars)?,
        qmod::eisenstein_series(6, n)?.embed(&vars)?,
        generator_fourier(Generator::PhiM2, n)?,
        generator_fourier(Generator::Phi0, n)?,
    ])
}

/// Fourier expansion in `(y, q)` to `q^n`.
pub fn evaluate(p: &JacobiPoly, n: i32) -> Result<Series> {
    if p.is_zero() {
        return Ok(Series::zero(&[Var::Y, Var::Q], &[None, Some(n)], &[0, 0]));
    }
    p.evaluate(&fourier_generators(n)?)
}

/// `u`-Taylor expansion with QMod coefficients, known below `u^prec`.
pub fn evaluate_utaylor(p: &JacobiPoly, prec: i32) -> Result<WSeries> {
    let extra = 2 * p.terms().map(|(e, _)| (e[2] + e[3]) as i32).max().unwrap_or(0) + 2;
    let a = generator_utaylor(Generator::PhiM2, prec + extra)?;
    let b = generator_utaylor(Generator::Phi0, prec + extra)?;
    let mut acc = WSeries::zero(Var::U, prec);
    for (e, c) in p.terms() {
        let mut m = WSeries::one(Var::U, prec + extra);
        let coeff = qmod::c4().pow(e[0]).mul(&qmod::c6().pow(e[1])).scale(c);
        m = m.scale(&coeff);
        for _ in 0..e[2] {
            m = m.mul(&a);
        }
        for _ in 0..e[3] {
            m = m.mul(&b);
        }
        acc = acc.add(&m.truncate(prec));
    }
    Ok(acc)
}

/// Recognition result.
#[derive(Clone, Debug, PartialEq)]
pub struct Recognized {
    pub poly: JacobiPoly,
    /// Verified coefficients beyond the rank.
    pub surplus: usize,
}

/// The unique element of `J_{k,m}` matching `s`, a series in `(y, q)`
/// (or `(y, qt)`) exact in `y`.
pub fn recognize(s: &Series, k: i32, m: i32) -> Result<Recognized> {
    let qv = *s
        .vars()
        .iter()
        .find(|v| matches!(v, Var::Q | Var::Qt))
        .ok_or_else(|| Error::Precondition("need a q-variable".into()))?;
    let s = if qv == Var::Qt { s.rename(Var::Qt, Var::Q)? } else { s.clone() };
    if s.vars() != [Var::Y, Var::Q] {
        return Err(Error::Precondition("recognition needs a series in (y, q)".into()));
    }
    let qp = s.precs()[1].ok_or_else(|| Error::Precondition("need finite q-precision".into()))?;
    let s = if s.precs()[0].is_some() { promote_weak_jacobi(&s, Var::Y, m)? } else { s };
    for (e, _) in s.terms() {
        if !support_radius(e[1], m).is_some_and(|r| e[0].abs() <= r) {
            return Err(Error::Precondition(format!(
                "y^{} q^{} outside weak Jacobi support of index {m}",
                e[0], e[1]
            )));
        }
    }
    let basis = monomials(k, m);
    let qlo = s.floors()[1].min(0);
    if ((qp - qlo) as usize) < basis.len() + SURPLUS {
        return Err(Error::InsufficientPrecision(format!(
            "q-precision {qp} for dim J_{{{k},{m}}} = {}",
            basis.len()
        )));
    }
    let gens = fourier_generators(qp)?;
    let cols: Vec<Series> = basis
        .iter()
        .map(|e| JacobiPoly::monomial(*e, int(1)).evaluate(&gens))
        .collect::<Result<_>>()?;
    // every coefficient inside the support is an equation, zeros included
    let mut keys: BTreeSet<(i32, i32)> = BTreeSet::new();
    for n in qlo..qp {
        if let Some(r) = support_radius(n, m) {
            keys.extend((-r..=r).map(|x| (n, x)));
        }
    }
    let mut red = RowReducer::new(basis.len());
    for &(n, r) in &keys {
        if n >= qp {
            continue;
        }
        let row: BTreeMap<usize, Rational> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.coeff(&[r, n])))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        if red.push(row, s.coeff(&[r, n])) == RowStatus::Inconsistent {
            return Err(Error::Inconsistent(format!("coefficient of y^{r} q^{n}")));
        }
    }
    let x = red.unique_solution()?;
    if red.surplus() < SURPLUS {
        return Err(Error::InsufficientPrecision(format!(
            "only {} surplus coefficients",
            red.surplus()
        )));
    }
    let mut poly = JacobiPoly::zero();
    for (e, c) in basis.iter().zip(x) {
        poly.add_term(*e, c);
    }
    Ok(Recognized { poly, surplus: red.surplus() })
}

/// Certificate from [`elliptic_law_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCertificate {
    pub checked: usize,
    pub q_window: (i32, i32),
}

/// Verifies `c(n, r) = c(n + r + m, -r - 2m)` (equivalently
/// `psi(y^{-1} q, q) = y^{2m} q^{-m} psi(y, q)`) on every pair of
/// coefficients inside the known window of a series in `(y, q)`.
pub fn elliptic_law_check(s: &Series, m: i32) -> Result<LawCertificate> {
    let iy = s.index_of(Var::Y).or_else(|_| s.index_of(Var::P))?;
    let iq = s.index_of(Var::Q).or_else(|_| s.index_of(Var::Qt))?;
    if s.nvars() != 2 {
        return Err(Error::Precondition("need a two-variable series".into()));
    }
    let qp = s.precs()[iq].ok_or_else(|| Error::Precondition("need finite q-precision".into()))?;
    let yp = s.precs()[iy];
    let (qlo, ylo) = (s.floors()[iq], s.floors()[iy]);
    let at = |r: i32, n: i32| {
        let mut e = vec![0; 2];
        e[iy] = r;
        e[iq] = n;
        e
    };
    // exponents present anywhere, plus the images of stored ones
    let mut cand: BTreeSet<(i32, i32)> = BTreeSet::new();
    for (e, _) in s.terms() {
        let (r, n) = (e[iy], e[iq]);
        cand.insert((n, r));
        cand.insert((n + r + m, -r - 2 * m));
        // preimage: (n', r') with n' + r' + m = n, -r' - 2m = r
        let r0 = -r - 2 * m;
        cand.insert((n - r0 - m, r0));
    }
    let known = |n: i32, r: i32| n < qp && yp.map_or(true, |p| r < p);
    let mut checked = 0;
    for (n, r) in cand {
        let (n2, r2) = (n + r + m, -r - 2 * m);
        if !(known(n, r) && known(n2, r2)) {
            continue;
        }
        let a = if n < qlo || r < ylo { Rational::zero() } else { s.coeff(&at(r, n)) };
        let b = if n2 < qlo || r2 < ylo { Rational::zero() } else { s.coeff(&at(r2, n2)) };
        if a != b {
            return Err(Error::IdentityFailure(format!(
                "c({n},{r}) = {a} but c({n2},{r2}) = {b}"
            )));
        }
        checked += 1;
    }
    Ok(LawCertificate { checked, q_window: (qlo, qp) })
}

/// Hecke operator `V_l` on Fourier coefficients in `(p, q)` of a form of
/// weight `k`: `c_l(n, r) = sum_{a | (n, r, l)} a^{k-1} c(n l / a^2, r / a)`.
/// The input must be exact in `p` with floor `q^0`; the output has
/// `q`-precision `(N - 1) / l + 1`.
pub fn hecke_v(s: &Series, k: i32, l: u32) -> Result<Series> {
    if l == 0 {
        return Err(Error::Precondition("Hecke index must be >= 1".into()));
    }
    let ip = s.index_of(Var::P)?;
    let iq = s.index_of(Var::Q).or_else(|_| s.index_of(Var::Qt))?;
    if s.precs()[ip].is_some() {
        return Err(Error::Precondition("Hecke input must be exact in p".into()));
    }
    if s.floors()[iq] < 0 {
        return Err(Error::Precondition("Hecke input must be holomorphic in q".into()));
    }
    let n_in = s.precs()[iq].ok_or_else(|| Error::Precondition("need finite q-precision".into()))?;
    let l = l as i32;
    let n_out = (n_in - 1).div_euclid(l) + 1;
    if n_out < 1 {
        return Err(Error::InsufficientPrecision("no output coefficient determined".into()));
    }
    let divisors: Vec<i32> = (1..=l).filter(|a| l % a == 0).collect();
    let mut prec = s.precs().to_vec();
    prec[iq] = Some(n_out);
    let mut floor = s.floors().to_vec();
    floor[ip] *= l;
    let mut out = Series::zero(s.vars(), &prec, &floor);
    for (e, c) in s.terms() {
        let (n1, r1) = (e[iq], e[ip]);
        for &a in &divisors {
            if (n1 * a * a) % l != 0 {
                continue;
            }
            let n = n1 * a * a / l;
            if n % a != 0 || n >= n_out {
                continue;
            }
            let r = r1 * a;
            let f = Rational::from_integer(a.into()).pow(k - 1);
            let mut key = e.to_vec();
            key[iq] = n;
            key[ip] = r;
            out.add_term(&key, c.clone() * f)?;
        }
    }
    Ok(out)
}

/// Symmetric Laurent object in `y` on the basis
/// `s^{2g-2}`, `s = y^{1/2} + y^{-1/2}`, `g >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymYLaurent {
    pub coeffs: BTreeMap<u32, Rational>,
    /// Raw `y`-expansion the coefficients were fitted to, if any.
    pub raw: Option<Series>,
}

/// `s^{2g-2}` expanded in `y` (in `|y| < 1` for `g = 0`), known below `y^prec`.
pub fn basis_element_y(g: u32, prec: i32) -> Series {
    let g = g as i32;
    if g == 0 {
        // y/(1+y)^2 = sum_{n>=1} (-1)^{n-1} n y^n
        let coeffs = (1..prec.max(1)).map(|n| (n, int(if n % 2 == 1 { n as i64 } else { -(n as i64) })));
        return Series::univariate(Var::Y, Some(prec), 1.min(prec), coeffs).unwrap();
    }
    // y^{1-g} (1+y)^{2g-2}
    let e = 2 * g - 2;
    let mut b = num_bigint::BigInt::one();
    let mut terms = Vec::new();
    for j in 0..=e {
        terms.push((1 - g + j, Rational::from_integer(b.clone())));
        b = b * (e - j) / (j + 1);
    }
    Series::univariate(Var::Y, Some(prec), 1 - g, terms).unwrap()
}

/// `s^2 = -(e^v - 2 + e^{-v})` as a series in `v` (variable `w`),
/// known below `v^prec`.
pub fn s_squared_v(prec: i32) -> Series {
    let mut fact = Rational::one();
    let mut terms = Vec::new();
    for j in 1..prec.max(1) {
        fact *= int(j as i64);
        if j % 2 == 0 {
            terms.push((j, int(-2) / fact.clone()));
        }
    }
    Series::univariate(Var::W, Some(prec), 2.min(prec), terms).unwrap()
}

impl SymYLaurent {
    pub fn from_coeffs(coeffs: BTreeMap<u32, Rational>) -> Self {
        SymYLaurent { coeffs, raw: None }
    }

    /// Fits `g = 0..=gmax` to a raw `y`-series, demanding at least
    /// `SURPLUS` redundant coefficients.
    pub fn fit(raw: &Series, gmax: u32) -> Result<(Self, usize)> {
        if raw.vars() != [Var::Y] {
            return Err(Error::Precondition("raw data must be a series in y".into()));
        }
        let yp = raw.precs()[0].ok_or_else(|| Error::Precondition("need finite y-order".into()))?;
        let lo = raw.floors()[0].min(1 - gmax as i32);
        let cols: Vec<Series> = (0..=gmax).map(|g| basis_element_y(g, yp)).collect();
        let mut red = RowReducer::new(cols.len());
        for e in lo..yp {
            let row: BTreeMap<usize, Rational> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.coeff(&[e])))
                .filter(|(_, x)| !x.is_zero())
                .collect();
            if red.push(row, raw.coeff(&[e])) == RowStatus::Inconsistent {
                return Err(Error::Inconsistent(format!("coefficient of y^{e}")));
            }
        }
        let x = red.unique_solution()?;
        if red.surplus() < SURPLUS {
            return Err(Error::InsufficientPrecision(format!(
                "{} surplus y-coefficients, need {SURPLUS}",
                red.surplus()
            )));
        }
        let coeffs = (0..=gmax).zip(x).filter(|(_, c)| !c.is_zero()).collect();
        Ok((SymYLaurent { coeffs, raw: Some(raw.clone()) }, red.surplus()))
    }

    /// Basis expansion in `y`, known below `y^prec`.
    pub fn expand_y(&self, prec: i32) -> Series {
        let gmax = self.coeffs.keys().max().copied().unwrap_or(0) as i32;
        let mut acc = Series::zero(&[Var::Y], &[Some(prec)], &[(1 - gmax).min(0)]);
        for (g, c) in &self.coeffs {
            acc = acc.add(&basis_element_y(*g, prec).scale(c)).unwrap();
        }
        acc.truncate(Var::Y, prec).unwrap()
    }

    /// Whether the stored raw expansion matches the basis expansion.
    pub fn raw_consistent(&self) -> bool {
        match &self.raw {
            None => true,
            Some(r) => {
                let p = r.precs()[0].unwrap_or(0);
                self.expand_y(p).agrees_with(r).unwrap_or(false)
            }
        }
    }

    /// `sum c_g (-2 sin(u/2))^{2g-2}` as a series in `u`, known below `u^prec`.
    pub fn to_u(&self, prec: i32) -> Result<Series> {
        let s2 = s_squared_v(prec + 4);
        let mut acc = Series::zero(&[Var::W], &[Some(prec)], &[-2]);
        for (g, c) in &self.coeffs {
            let term = if *g == 0 { s2.invert()? } else { s2.pow(g - 1)? };
            acc = acc.add(&term.scale(c))?;
        }
        elliptic::v_to_u(&acc.truncate(Var::W, prec)?)
    }
}

/// `d/dC2 f_l = 2m f_{l-2}` on the `u`-Taylor coefficients of a form of
/// index `m`, and each `f_l` homogeneous of weight `l + k`.
pub fn taylor_structure_check(p: &JacobiPoly, prec: i32) -> Result<usize> {
    let k = weight(p).ok_or_else(|| Error::Precondition("inhomogeneous weight".into()))?;
    let m = index(p).ok_or_else(|| Error::Precondition("inhomogeneous index".into()))?;
    let t = evaluate_utaylor(p, prec)?;
    let mut checked = 0;
    for l in 0..prec {
        let f = t.coeff(l)?;
        if !f.is_homogeneous(&qmod::WEIGHTS, l + k) {
            return Err(Error::IdentityFailure(format!("u^{l} coefficient has wrong weight")));
        }
        let lower = if l >= 2 { t.coeff(l - 2)? } else { QModPoly::zero() };
        if qmod::ddc2(&f) != lower.scale(&int(2 * m as i64)) {
            return Err(Error::IdentityFailure(format!("d/dC2 f_{l} != 2m f_{}", l - 2)));
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn generator_leading_terms() {
        let a = generator_fourier(Generator::PhiM2, 4).unwrap();
        let row = a.slice(Var::Q, 0).unwrap();
        assert_eq!(row.coeff(&[1]), int(-1));
        assert_eq!(row.coeff(&[0]), int(-2));
        assert_eq!(row.coeff(&[-1]), int(-1));
        let b = generator_fourier(Generator::Phi0, 6).unwrap();
        let row = b.slice(Var::Q, 0).unwrap();
        assert_eq!((row.coeff(&[1]), row.coeff(&[0]), row.coeff(&[-1])), (int(-1), int(10), int(-1)));
        // q^1 row of phi_{0,1} in p: 10p^2 - 64p + 108 - 64/p + 10/p^2
        let p = phi_0_fourier_p(3).unwrap();
        assert_eq!(p.coeff(&[2, 1]), int(10));
        assert_eq!(p.coeff(&[1, 1]), int(-64));
        assert_eq!(p.coeff(&[0, 1]), int(108));
    }

    #[test]
    fn utaylor_leading_terms() {
        let b = generator_utaylor(Generator::Phi0, 4).unwrap();
        assert_eq!(b.coeff(0).unwrap(), QModPoly::constant(int(12)));
        let a = generator_utaylor(Generator::PhiM2, 4).unwrap();
        assert_eq!(a.coeff(2).unwrap(), QModPoly::constant(int(-1)));
        // phi_{-2,1} = -Theta_u^2
        let t = elliptic::theta_taylor(8);
        assert_eq!(t.mul(&t).neg().truncate(8), generator_utaylor(Generator::PhiM2, 8).unwrap());
    }

    #[test]
    fn fourier_matches_taylor() {
        for g in [Generator::PhiM2, Generator::Phi0] {
            let n = 5;
            let f = match g {
                Generator::PhiM2 => phi_m2_fourier_p(n),
                Generator::Phi0 => phi_0_fourier_p(n).unwrap(),
            };
            let w = elliptic::exp_substitute(&f, Var::P, false, 8).unwrap();
            let u = elliptic::v_to_u(&w).unwrap();
            let t = generator_utaylor(g, 8).unwrap().to_series(n).unwrap();
            assert_eq!(u.first_disagreement(&t).unwrap(), None);
        }
    }

    #[test]
    fn taylor_structure() {
        for p in [phi_m2(), phi_0(), phi_0().mul(&phi_m2()), phi_0().pow(2).add(&phi_m2().pow(2).mul(&JacobiPoly::generator(0)))] {
            assert!(taylor_structure_check(&p, 10).unwrap() == 10);
        }
    }

    #[test]
    fn recognition_round_trip() {
        let p = phi_0().pow(2);
        let s = evaluate(&p, 7).unwrap();
        assert_eq!(recognize(&s, 0, 2).unwrap().poly, p);
        let mut bad = Series::zero(&[Var::Y, Var::Q], &[None, Some(8)], &[-3, 0]);
        bad.add_term(&[2, 0], int(1)).unwrap();
        assert!(recognize(&bad, 0, 1).is_err());
    }

    #[test]
    fn elliptic_law() {
        let s = generator_fourier(Generator::Phi0, 8).unwrap();
        assert!(elliptic_law_check(&s, 1).unwrap().checked > 10);
        let one = Series::one(&[Var::Y, Var::Q], &[None, Some(6)]);
        assert!(elliptic_law_check(&one, 1).is_err());
        // 1/phi_{-2,1}, index -1, expanded in |q| < |y| < 1
        let inv = p_to_y(&inverse_phi_m2_p(8, 12).unwrap()).unwrap();
        assert!(elliptic_law_check(&inv, -1).unwrap().checked > 10);
        assert_eq!(inv.coeff(&[2, 0]), int(2));
        assert_eq!(inv.coeff(&[1, 0]), int(-1));
        assert_eq!(inv.coeff(&[0, 1]), int(2));
    }

    #[test]
    fn hecke_identity_and_index() {
        let s = phi_0_fourier_p(6).unwrap();
        assert_eq!(hecke_v(&s, 0, 1).unwrap(), s);
        let v2 = p_to_y(&hecke_v(&phi_0_fourier_p(13).unwrap(), 0, 2).unwrap()).unwrap();
        let r = recognize(&v2, 0, 2).unwrap();
        assert_eq!(index(&r.poly), Some(2));
    }

    #[test]
    fn y_basis() {
        let raw = basis_element_y(0, 8);
        let (b, surplus) = SymYLaurent::fit(&raw, 0).unwrap();
        assert_eq!(b.coeffs, BTreeMap::from([(0, int(1))]));
        assert!(surplus >= 4);
        assert!(b.raw_consistent());
        let one = SymYLaurent::from_coeffs(BTreeMap::from([(1, int(1))]));
        assert_eq!(one.to_u(4).unwrap().coeff(&[0]), int(1));
        let g0 = SymYLaurent::from_coeffs(BTreeMap::from([(0, int(1))]));
        let u = g0.to_u(4).unwrap();
        assert_eq!(u.coeff(&[-2]), int(1));
        assert_eq!(u.coeff(&[0]), rat(1, 12));
    }
}
