//! Theta, the Weierstrass function and `A(z)`, as Fourier series in
//! `(p, q)` and as Laurent series in `w = log p` with quasimodular
//! coefficients.
//!
//! `d/dz` always means `p d/dp = d/dw`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qmod::{self, QModPoly};
use crate::scalar::{int, rat, Rational};
use crate::series::Var;
use crate::Series;

/// `C_{2k}` as a polynomial in `C2, C4, C6` (`k >= 1`).
pub fn c_coeff(k: u32) -> QModPoly {
    match k {
        0 => panic!("C_0 is not defined"),
        1 => qmod::c2(),
        _ => {
            // a_n = (2n+1)(2n+2) C_{2n+2} satisfy the recurrence coming
            // from the differential equation of the Weierstrass function
            let a = wp_even_coeffs(k as usize - 1);
            let n = k as i64;
            a[k as usize - 1].scale(&rat(1, (2 * n - 1) * 2 * n))
        }
    }
}

/// `a_1 .. a_n` (index 0 unused) of `wp = 1/w^2 + sum a_m w^{2m}`.
fn wp_even_coeffs(n: usize) -> Vec<QModPoly> {
    let mut a = vec![QModPoly::zero(); n.max(2) + 1];
    a[1] = qmod::c4().scale(&int(12));
    a[2] = qmod::c6().scale(&int(30));
    for m in 3..=n {
        let mut s = QModPoly::zero();
        for i in 1..=(m - 2) {
            s = s.add(&a[i].mul(&a[m - 1 - i]));
        }
        let mm = m as i64;
        a[m] = s.scale(&rat(3, (2 * mm + 3) * (mm - 2)));
    }
    a
}

/// Laurent series in one formal variable with coefficients in QMod,
/// known for exponents `< prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct WSeries {
    var: Var,
    prec: i32,
    terms: BTreeMap<i32, QModPoly>,
}

/// Parity of a [`WSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl WSeries {
    pub fn zero(var: Var, prec: i32) -> Self {
        WSeries { var, prec, terms: BTreeMap::new() }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub fn add_term(&mut self, j: i32, c: QModPoly) {
        if j >= self.prec || c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&j) {
            Some(x) => x.add(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(j, s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &QModPoly)> {
        self.terms.iter()
    }

    /// Coefficient of `var^j`; error beyond precision.
    pub fn coeff(&self, j: i32) -> Result<QModPoly> {
        if j >= self.prec {
            return Err(Error::InsufficientPrecision(format!(
                "{}^{j} beyond precision {}",
                self.var, self.prec
            )));
        }
        Ok(self.terms.get(&j).cloned().unwrap_or_default())
    }

    /// Lowest stored exponent.
    pub fn floor(&self) -> i32 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn truncate(&self, prec: i32) -> Self {
        let mut r = WSeries::zero(self.var, prec.min(self.prec));
        for (j, c) in &self.terms {
            r.add_term(*j, c.clone());
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.truncate(o.prec);
        for (j, c) in &o.terms {
            r.add_term(*j, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&QModPoly::constant(int(-1)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &QModPoly) -> Self {
        let mut r = WSeries::zero(self.var, self.prec);
        for (j, x) in &self.terms {
            r.add_term(*j, x.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.prec + o.floor()).min(o.prec + self.floor());
        let mut r = WSeries::zero(self.var, prec);
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                if i + j < prec {
                    r.add_term(i + j, a.mul(b));
                }
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = WSeries::one(self.var, i32::MAX / 4);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn one(var: Var, prec: i32) -> Self {
        let mut r = WSeries::zero(var, prec);
        r.add_term(0, QModPoly::one());
        r
    }

    pub fn mul_monomial(&self, s: i32) -> Self {
        WSeries {
            var: self.var,
            prec: self.prec + s,
            terms: self.terms.iter().map(|(j, c)| (j + s, c.clone())).collect(),
        }
    }

    /// `d/dvar`.
    pub fn derivative(&self) -> Self {
        let mut r = WSeries::zero(self.var, self.prec - 1);
        for (j, c) in &self.terms {
            r.add_term(j - 1, c.scale(&int(*j as i64)));
        }
        r
    }

    /// Coefficientwise `d/dC2`.
    pub fn ddc2(&self) -> Self {
        let mut r = WSeries::zero(self.var, self.prec);
        for (j, c) in &self.terms {
            r.add_term(*j, qmod::ddc2(c));
        }
        r
    }

    /// Exponential of a series with only positive exponents.
    pub fn exp(&self) -> Result<Self> {
        if self.floor() <= 0 && !self.terms.is_empty() {
            return Err(Error::Precondition("exp needs positive exponents".into()));
        }
        let n = self.prec.max(0);
        let mut e: Vec<QModPoly> = vec![QModPoly::zero(); n as usize];
        if n > 0 {
            e[0] = QModPoly::one();
        }
        for m in 1..n {
            let mut s = QModPoly::zero();
            for k in 1..=m {
                if let Some(a) = self.terms.get(&k) {
                    s = s.add(&a.mul(&e[(m - k) as usize]).scale(&int(k as i64)));
                }
            }
            e[m as usize] = s.scale(&rat(1, m as i64));
        }
        let mut r = WSeries::zero(self.var, n);
        for (j, c) in e.into_iter().enumerate() {
            r.add_term(j as i32, c);
        }
        Ok(r)
    }

    pub fn parity(&self) -> Parity {
        if self.terms.keys().all(|j| j % 2 == 0) {
            Parity::Even
        } else if self.terms.keys().all(|j| j.rem_euclid(2) == 1) {
            Parity::Odd
        } else {
            Parity::None
        }
    }

    /// Whether the `var^j` coefficient is homogeneous of weight `j + shift`.
    pub fn weights_ok(&self, shift: i32) -> bool {
        self.terms.iter().all(|(j, c)| c.is_homogeneous(&qmod::WEIGHTS, j + shift))
    }

    /// Evaluates every coefficient to `q^n`: a series in `[var, q]`.
    pub fn to_series(&self, n: i32) -> Result<Series> {
        let gens = qmod::generators(n);
        let floor = self.floor().min(0);
        let mut out = Series::zero(&[self.var, Var::Q], &[Some(self.prec), Some(n)], &[floor, 0]);
        for (j, c) in &self.terms {
            let s = c.evaluate(&gens)?;
            for (e, x) in s.terms() {
                out.add_term(&[*j, e[0]], x.clone())?;
            }
        }
        Ok(out)
    }

    /// Re-reads a series in `w` as one in `u` with `w = i u`: the
    /// coefficient of `w^j` is multiplied by `i^j`. Odd exponents must be
    /// absent.
    pub fn w_to_u(&self) -> Result<Self> {
        let mut r = WSeries::zero(Var::U, self.prec);
        for (j, c) in &self.terms {
            if j.rem_euclid(2) == 1 {
                return Err(Error::Precondition(format!("odd power w^{j} has no real u-form")));
            }
            r.add_term(*j, if (j / 2).rem_euclid(2) == 0 { c.clone() } else { c.neg() });
        }
        Ok(r)
    }
}

/// Central `w = i u` conversion for rational series: the variable `W` is
/// renamed to `U` and the `w^j` coefficient multiplied by `(-1)^{j/2}`.
pub fn v_to_u(s: &Series) -> Result<Series> {
    let i = s.index_of(Var::W)?;
    let bad = s.terms().find(|(e, _)| e[i].rem_euclid(2) == 1).map(|(e, _)| e.to_vec());
    if let Some(e) = bad {
        return Err(Error::Precondition(format!("odd w-exponent in {e:?}")));
    }
    let r = s.map_terms(s.precs(), s.floors(), |e, c| {
        let sign = if (e[i] / 2).rem_euclid(2) == 0 { c.clone() } else { -c.clone() };
        Some((e.to_vec(), sign))
    })?;
    r.rename(Var::W, Var::U)
}

/// Taylor form of `wp^{(k)}` in `w`, known below `w^prec`.
pub fn wp_taylor(k: u32, prec: i32) -> WSeries {
    // each derivative lowers the precision by one
    let p0 = prec + k as i32;
    let mut s = WSeries::zero(Var::W, p0);
    s.add_term(-2, QModPoly::one());
    let nmax = ((p0 - 1) / 2).max(2) as usize;
    let a = wp_even_coeffs(nmax);
    for (m, am) in a.iter().enumerate().skip(1) {
        s.add_term(2 * m as i32, am.clone());
    }
    for _ in 0..k {
        s = s.derivative();
    }
    s
}

/// Taylor form of `A(z) = 1/w - sum 2l C_{2l} w^{2l-1}`.
pub fn afun_taylor(prec: i32) -> WSeries {
    let mut s = WSeries::zero(Var::W, prec);
    s.add_term(-1, QModPoly::one());
    let mut l = 1;
    while 2 * l - 1 < prec {
        s.add_term(2 * l - 1, c_coeff(l as u32).scale(&int(-2 * l as i64)));
        l += 1;
    }
    s
}

/// Theta in the `u`-normalization, `u exp(sum (-1)^{k-1} C_{2k} u^{2k})`.
pub fn theta_taylor(prec: i32) -> WSeries {
    let mut arg = WSeries::zero(Var::U, prec - 1);
    let mut k = 1;
    while 2 * k < prec - 1 {
        let c = c_coeff(k as u32);
        arg.add_term(2 * k, if k % 2 == 1 { c } else { c.neg() });
        k += 1;
    }
    arg.exp().expect("positive exponents").mul_monomial(1)
}

/// Theta in the `w`-normalization, `w exp(-sum C_{2k} w^{2k})`, which
/// equals the product form `(p^{1/2} - p^{-1/2}) prod ...` at `p = e^w`.
pub fn theta_taylor_w(prec: i32) -> WSeries {
    let mut arg = WSeries::zero(Var::W, prec - 1);
    let mut k = 1;
    while 2 * k < prec - 1 {
        arg.add_term(2 * k, c_coeff(k as u32).neg());
        k += 1;
    }
    arg.exp().expect("positive exponents").mul_monomial(1)
}

/// A series whose variable `doubled` carries twice the true exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubledSeries {
    pub series: Series,
    pub doubled: Var,
}

/// `prod_{m>=1} (1 - p q^m)(1 - p^{-1} q^m)` times `(1 - q^m)^{-2}`
/// to `q^n`, exact in `p`.
pub fn theta_product_part(n: i32) -> Series {
    let vars = [Var::P, Var::Q];
    let prec = [None, Some(n)];
    let floor = -(n - 1).max(0);
    let mut acc = Series::one(&vars, &prec).assert_floor(Var::P, floor).unwrap();
    let mut denom = Series::one(&vars, &prec);
    for m in 1..n {
        for sgn in [1, -1] {
            let f = Series::from_terms(
                &vars,
                &prec,
                &[sgn.min(0), 0],
                [(vec![0, 0], int(1)), (vec![sgn, m], int(-1))],
            )
            .unwrap();
            acc = acc.mul(&f).unwrap();
        }
        let g = Series::from_terms(&vars, &prec, &[0, 0], [(vec![0, 0], int(1)), (vec![0, m], int(-1))])
            .unwrap();
        denom = denom.mul(&g).unwrap().mul(&g).unwrap();
    }
    let r = acc.mul(&denom.invert().unwrap()).unwrap();
    r.assert_floor(Var::P, floor).unwrap()
}

/// Fourier form of Theta to `q^n`, with doubled `p`-exponents.
pub fn theta_fourier(n: i32) -> DoubledSeries {
    let part = theta_product_part(n).substitute_power(Var::P, 2).unwrap();
    let lead = Series::from_terms(
        &[Var::P, Var::Q],
        &[None, Some(n)],
        &[-1, 0],
        [(vec![1, 0], int(1)), (vec![-1, 0], int(-1))],
    )
    .unwrap();
    DoubledSeries { series: lead.mul(&part).unwrap(), doubled: Var::P }
}

/// Fourier form of `wp^{(k)}` in `0 < |q| < |p| < 1`, known for
/// `p^e, e < pprec` and `q^d, d < n`. The `p`-floor `-(n-1)` bounds the
/// exponents inside the known `q`-window.
pub fn wp_fourier(k: u32, pprec: i32, n: i32) -> Series {
    let floor = -(n - 1).max(0);
    let mut s = Series::zero(&[Var::P, Var::Q], &[Some(pprec), Some(n)], &[floor, 0]);
    let pw = |x: i64| -> Rational { Rational::from_integer(x.into()).pow(k as i32 + 1) };
    if k == 0 {
        s.add_term(&[0, 0], rat(1, 12)).unwrap();
    }
    // p/(1-p)^2 = sum_{m>=1} m p^m
    for m in 1..pprec {
        s.add_term(&[m, 0], pw(m as i64)).unwrap();
    }
    for d in 1..n {
        for j in 1..=d {
            if d % j != 0 {
                continue;
            }
            s.add_term(&[j, d], pw(j as i64)).unwrap();
            let neg = if k % 2 == 0 { pw(j as i64) } else { -pw(j as i64) };
            s.add_term(&[-j, d], neg).unwrap();
            if k == 0 {
                s.add_term(&[0, d], int(-2 * j as i64)).unwrap();
            }
        }
    }
    s
}

/// Fourier form of `A(z) = -1/2 - sum_{m != 0} p^m / (1 - q^m)`.
pub fn afun_fourier(pprec: i32, n: i32) -> Series {
    let floor = -(n - 1).max(0);
    let mut s = Series::zero(&[Var::P, Var::Q], &[Some(pprec), Some(n)], &[floor, 0]);
    s.add_term(&[0, 0], rat(-1, 2)).unwrap();
    for m in 1..pprec.max(n) {
        // m > 0: -p^m sum_{j>=0} q^{jm}
        let mut j = 0;
        while j * m < n {
            s.add_term(&[m, j * m], int(-1)).unwrap();
            j += 1;
        }
        // m < 0: +p^{-m} sum_{j>=1} q^{jm}
        let mut j = 1;
        while j * m < n {
            s.add_term(&[-m, j * m], int(1)).unwrap();
            j += 1;
        }
    }
    s
}

/// Substitutes `p = e^w` (or `p^{1/2} = e^{w/2}` for doubled exponents)
/// into a series exact in `p`; the result lives in `w` (replacing `p`)
/// with `w`-precision `wprec`.
pub fn exp_substitute(s: &Series, p: Var, doubled: bool, wprec: i32) -> Result<Series> {
    let i = s.index_of(p)?;
    if s.precs()[i].is_some() {
        return Err(Error::Precondition(format!("{p} must be exact to substitute e^w")));
    }
    let mut vars = s.vars().to_vec();
    vars[i] = Var::W;
    let mut prec = s.precs().to_vec();
    prec[i] = Some(wprec);
    let mut floor = s.floors().to_vec();
    floor[i] = 0;
    let mut out = Series::zero(&vars, &prec, &floor);
    // e^{a w} = sum a^j w^j / j!
    let mut fact = vec![Rational::one()];
    for j in 1..wprec.max(1) {
        let f = fact[j as usize - 1].clone() * int(j as i64);
        fact.push(f);
    }
    for (e, c) in s.terms() {
        let a = if doubled { rat(e[i] as i64, 2) } else { int(e[i] as i64) };
        let mut apow = Rational::one();
        for j in 0..wprec.max(0) {
            if !apow.is_zero() || j == 0 {
                let mut k = e.to_vec();
                k[i] = j;
                out.add_term(&k, c.clone() * &apow / &fact[j as usize])?;
            }
            apow *= &a;
        }
    }
    Ok(out)
}

/// Checks the shift law of `A` on its Fourier coefficients: for each
/// `m != 0` with `|m| < mmax` and `1 <= lambda <= lmax`,
/// `(q^{lambda m} - 1) a_m(q) = sum_{j<lambda} q^{jm}` on all known
/// coefficients, and `a_0 = -1/2`. Returns the number of coefficients checked.
pub fn afun_shift_check(mmax: i32, lmax: i32, n: i32) -> Result<usize> {
    let a = afun_fourier(mmax, n);
    let mut checked = 0;
    if a.coeff(&[0, 0]) != rat(-1, 2) || (1..n).any(|d| !a.coeff(&[0, d]).is_zero()) {
        return Err(Error::IdentityFailure("a_0 differs from -1/2".into()));
    }
    for m in (1 - mmax)..mmax {
        if m == 0 {
            continue;
        }
        let am = Series::univariate(
            Var::Q,
            Some(n),
            0,
            (0..n).map(|d| (d, a.coeff(&[m, d]))),
        )?;
        for lambda in 1..=lmax {
            let e = lambda * m;
            let f = Series::univariate(
                Var::Q,
                None,
                e.min(0),
                [(e, int(1)), (0, int(-1))],
            )?;
            let lhs = f.mul(&am)?;
            let known = lhs.precs()[0].unwrap();
            for d in (-(lambda * m.abs()))..known {
                let rhs = if (0..lambda).any(|j| j * m == d) { int(1) } else { int(0) };
                if lhs.coeff(&[d]) != rhs {
                    return Err(Error::IdentityFailure(format!(
                        "A shift law at m={m}, lambda={lambda}, q^{d}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmod::{c2, c4};

    #[test]
    fn wp_taylor_low_terms() {
        let p = wp_taylor(0, 6);
        assert_eq!(p.coeff(-2).unwrap(), QModPoly::one());
        assert!(p.coeff(0).unwrap().is_zero());
        assert_eq!(p.coeff(2).unwrap(), c4().scale(&int(12)));
        assert_eq!(p.parity(), Parity::Even);
        assert!(p.weights_ok(2));
        let d = wp_taylor(1, 4);
        assert_eq!(d.coeff(-3).unwrap(), QModPoly::constant(int(-2)));
        assert_eq!(d.parity(), Parity::Odd);
        assert!(d.weights_ok(3));
    }

    #[test]
    fn c8_from_recurrence_matches_eisenstein() {
        let c8 = c_coeff(4);
        assert_eq!(c8, c4().mul(&c4()).scale(&rat(6, 7)));
        for k in 4..=7 {
            let lhs = qmod::evaluate(&c_coeff(k), 12).unwrap();
            assert_eq!(lhs, qmod::eisenstein_series(2 * k, 12).unwrap());
        }
    }

    #[test]
    fn theta_taylor_low_terms() {
        let t = theta_taylor(7);
        assert_eq!(t.coeff(1).unwrap(), QModPoly::one());
        assert_eq!(t.coeff(3).unwrap(), c2());
        assert_eq!(t.coeff(5).unwrap(), c2().mul(&c2()).scale(&rat(1, 2)).sub(&c4()));
        // d/dC2 Theta = u^2 Theta
        let d = theta_taylor(11).ddc2();
        let shifted = theta_taylor(9).mul_monomial(2);
        assert_eq!(d.truncate(11), shifted);
    }

    #[test]
    fn theta_fourier_matches_taylor() {
        let n = 6;
        let f = theta_fourier(n);
        assert_eq!(f.series.slice(Var::Q, 0).unwrap().terms().count(), 2);
        let w = exp_substitute(&f.series, Var::P, true, 9).unwrap();
        let t = theta_taylor_w(9).to_series(n).unwrap();
        assert!(w.agrees_with(&t).unwrap());
        assert_eq!(w.first_disagreement(&t).unwrap(), None);
    }

    #[test]
    fn afun_derivative_is_minus_wp_minus_2c2() {
        let a = afun_taylor(10).derivative();
        let mut rhs = wp_taylor(0, 9).neg();
        rhs.add_term(0, c2().scale(&int(-2)));
        assert_eq!(a, rhs);
        assert_eq!(afun_fourier(3, 3).coeff(&[0, 0]), rat(-1, 2));
    }

    #[test]
    fn afun_fourier_derivative() {
        let (pp, n) = (6, 6);
        let lhs = afun_fourier(pp, n).q_derive(Var::P).unwrap();
        let c2s = qmod::eisenstein_series(2, n).unwrap().embed(&[Var::P, Var::Q]).unwrap();
        let rhs = wp_fourier(0, pp, n).neg().sub(&c2s.scale(&int(2))).unwrap();
        assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn wp_constant_term() {
        let n = 8;
        let row = wp_fourier(0, 4, n).slice(Var::P, 0).unwrap();
        let expect = qmod::evaluate(&c2().scale(&int(-2)), n).unwrap();
        assert_eq!(row, expect);
    }

    #[test]
    fn afun_shift_law() {
        assert!(afun_shift_check(5, 3, 12).unwrap() > 0);
    }

    #[test]
    fn w_to_u_signs() {
        let p = wp_taylor(0, 5).w_to_u().unwrap();
        assert_eq!(p.coeff(-2).unwrap(), QModPoly::constant(int(-1)));
        assert_eq!(p.coeff(2).unwrap(), c4().scale(&int(-12)));
        assert!(afun_taylor(3).w_to_u().is_err());
    }
}
