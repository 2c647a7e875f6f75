//! The Igusa cusp form `chi_10`, the partition function `Z = -1/chi_10`,
//! the invariants `N_{g,h,d}` and the closed-form reference series.
//!
//! `chi_10` is handled as `q qt L(p) W(p, q, qt)` with
//! `L = p - 2 + 1/p` and `W` a power series in `q, qt` whose coefficients
//! are Laurent polynomials in `p`.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::elliptic;
use crate::error::{Error, Result};
use crate::jacobi::{self, SymYLaurent};
use crate::qmod::{self, QModPoly};
use crate::scalar::{int, rat, Rational};
use crate::series::Var;
use crate::Series;

const PQQ: [Var; 3] = [Var::P, Var::Q, Var::Qt];

/// Coefficients `c(n)` of `(40 th3^4 - 8 th4^4) / (th3 th2^4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorcherdsTable {
    c: BTreeMap<i32, Rational>,
    computed_through: i32,
}

impl BorcherdsTable {
    /// `c(n)`; zero for `n <= -2`.
    pub fn get(&self, n: i32) -> Result<Rational> {
        if n <= -2 {
            return Ok(Rational::zero());
        }
        if n > self.computed_through {
            return Err(Error::InsufficientPrecision(format!(
                "c({n}) requested, table computed through {}",
                self.computed_through
            )));
        }
        Ok(self.c.get(&n).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn computed_through(&self) -> i32 {
        self.computed_through
    }

    /// Nonzero entries in increasing `n`.
    pub fn entries(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.c.iter().map(|(n, c)| (*n, c))
    }
}

/// `theta_2, theta_3, theta_4` in the auxiliary variable `Q` (`Q^4 = q`),
/// known below `Q^n`.
pub fn theta_constants(n: i32) -> [Series; 3] {
    let mk = |terms: Vec<(i32, Rational)>, floor| {
        Series::univariate(Var::QAux, Some(n), floor, terms).unwrap()
    };
    let mut t2 = Vec::new();
    let mut k = 0;
    while 4 * k * k + 4 * k + 1 < n {
        t2.push((4 * k * k + 4 * k + 1, int(2)));
        k += 1;
    }
    let mut t3 = vec![(0, int(1))];
    let mut t4 = vec![(0, int(1))];
    let mut k = 1;
    while 4 * k * k < n {
        t3.push((4 * k * k, int(2)));
        t4.push((4 * k * k, int(if k % 2 == 0 { 2 } else { -2 })));
        k += 1;
    }
    [mk(t2, 1.min(n)), mk(t3, 0), mk(t4, 0)]
}

/// `c(n)` for `n <= nmax`.
pub fn borcherds_exponents(nmax: i32) -> Result<BorcherdsTable> {
    if nmax < 0 {
        return Err(Error::Precondition("nmax must be >= 0".into()));
    }
    // the denominator starts at 16 Q^4, so inversion costs Q^8
    let n = 4 * (nmax + 1) + 8;
    let [t2, t3, t4] = theta_constants(n);
    let num = t3.pow(4)?.scale(&int(40)).sub(&t4.pow(4)?.scale(&int(8)))?;
    let den = t3.mul(&t2.pow(4)?)?;
    let f = num.mul(&den.invert()?)?;
    let f = f.contract_power(Var::QAux, 4, Var::Q)?;
    let mut c = BTreeMap::new();
    for (e, x) in f.terms() {
        if !x.is_integer() {
            return Err(Error::Internal(format!("c({}) = {x} is not integral", e[0])));
        }
        if e[0] <= nmax {
            c.insert(e[0], x.clone());
        }
    }
    let through = f.precs()[0].map_or(nmax, |p| (p - 1).min(nmax));
    if through < nmax {
        return Err(Error::Internal("theta quotient lost precision".into()));
    }
    Ok(BorcherdsTable { c, computed_through: nmax })
}

/// Which pipeline builds `chi_10`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chi10Method {
    Product,
    Hecke,
}

/// `L = p (1 - 1/p)^{c(-1)}`, the only `h = d = 0` factor.
fn lead_factor(t: &BorcherdsTable) -> Result<Series> {
    for k in 2..=3 {
        if !t.get(-k * k)?.is_zero() {
            return Err(Error::Internal(format!("c({}) != 0", -k * k)));
        }
    }
    let c = t.get(-1)?;
    let e = c
        .to_integer()
        .to_u32()
        .filter(|_| c.is_integer())
        .ok_or_else(|| Error::Internal("c(-1) is not a nonnegative integer".into()))?;
    let base = Series::from_terms(
        &[Var::P],
        &[None],
        &[-1],
        [(vec![0], int(1)), (vec![-1], int(-1))],
    )?;
    base.pow(e)?.mul_monomial(&[1])
}

/// `p - 2 + 1/p` in `(p, q, qt)`, exact.
fn l_series() -> Series {
    Series::from_terms(
        &PQQ,
        &[None, None, None],
        &[-1, 0, 0],
        [(vec![1, 0, 0], int(1)), (vec![0, 0, 0], int(-2)), (vec![-1, 0, 0], int(1))],
    )
    .unwrap()
}

/// `W` with `chi_10 = q qt L W`, known below `q^hp qt^dp`, exact in `p`.
///
/// `log W = sum c(4hd - k^2) log(1 - p^k q^h qt^d)` over `(h, d) != 0`.
pub fn borcherds_w(hp: i32, dp: i32, table: &BorcherdsTable) -> Result<Series> {
    let need = 4 * (hp - 1).max(0) * (dp - 1).max(0);
    if table.computed_through() < need {
        return Err(Error::InsufficientPrecision(format!(
            "exponent table through {} but c({need}) is needed",
            table.computed_through()
        )));
    }
    let groups: Vec<(i32, i32)> = (0..hp)
        .flat_map(|h| (0..dp).map(move |d| (h, d)))
        .filter(|&(h, d)| h + d > 0)
        .collect();
    let parts: Vec<Result<Vec<(Vec<i32>, Rational)>>> = groups
        .par_iter()
        .map(|&(h, d)| {
            let mut out = Vec::new();
            let kmax = jacobi::support_radius(h * d, 1).unwrap_or(0);
            for k in -kmax..=kmax {
                let c = table.get(4 * h * d - k * k)?;
                if c.is_zero() {
                    continue;
                }
                // -c sum_j x^j / j
                let mut j = 1;
                while j * h < hp && j * d < dp {
                    out.push((vec![j * k, j * h, j * d], -c.clone() / int(j as i64)));
                    j += 1;
                }
            }
            Ok(out)
        })
        .collect();
    let mut pfloor = 0;
    let mut terms = Vec::new();
    for p in parts {
        for (e, c) in p? {
            pfloor = pfloor.min(e[0]);
            terms.push((e, c));
        }
    }
    let s = Series::from_terms(&PQQ, &[None, Some(hp), Some(dp)], &[pfloor, 0, 0], terms)?;
    s.exp()
}

/// Table large enough for `W` below `q^hp qt^dp`.
fn table_for(hp: i32, dp: i32) -> Result<BorcherdsTable> {
    borcherds_exponents((4 * (hp - 1).max(0) * (dp - 1).max(0)).max(8))
}

/// Product form of `chi_10` in `(p, q, qt)` through `q^hmax qt^dmax`.
pub fn chi10_product(hmax: i32, dmax: i32) -> Result<Series> {
    let t = table_for(hmax, dmax)?;
    let w = borcherds_w(hmax, dmax, &t)?;
    let l = lead_factor(&t)?.embed(&PQQ)?;
    l.mul(&w)?.mul_monomial(&[0, 1, 1])
}

/// Hecke form `qt phi_{-2,1}(p, q) Delta(q) exp(-sum qt^l (2 phi_{0,1}) | V_l)`
/// through `q^hmax qt^dmax`.
pub fn chi10_hecke(hmax: i32, dmax: i32) -> Result<Series> {
    if hmax < 1 || dmax < 1 {
        return Err(Error::Precondition("chi_10 starts at q qt".into()));
    }
    let nin = hmax.max((hmax - 1) * (dmax - 1) + 1);
    let z = jacobi::phi_0_fourier_p(nin)?.scale(&int(2));
    let mut e = Series::zero(&PQQ, &[None, Some(hmax), Some(dmax)], &[0, 0, 0]);
    for l in 1..dmax {
        let v = jacobi::hecke_v(&z, 0, l as u32)?;
        let v = v.embed(&PQQ)?.truncate(Var::Q, hmax)?;
        let v = v.mul_monomial(&[0, 0, l])?.truncate(Var::Qt, dmax)?;
        e = e.sub(&v)?;
    }
    let front = jacobi::phi_m2_fourier_p(hmax)
        .embed(&PQQ)?
        .mul(&qmod::delta_series(hmax + 1).embed(&PQQ)?)?;
    front.mul(&e.exp()?)?.mul_monomial(&[0, 0, 1])
}

/// `chi_10` in `(y, q, qt)` through `q^hmax qt^dmax`, exact in `y`.
pub fn chi10_expand(method: Chi10Method, hmax: i32, dmax: i32) -> Result<Series> {
    let s = match method {
        Chi10Method::Product => chi10_product(hmax, dmax)?,
        Chi10Method::Hecke => chi10_hecke(hmax, dmax)?,
    };
    jacobi::p_to_y(&s)
}

/// Monomial-by-monomial comparison of the two pipelines, both exact in
/// `p`. Returns the size of the `|y|-exponent <= ywin` box covered.
pub fn chi10_cross_check(hmax: i32, dmax: i32, ywin: i32) -> Result<usize> {
    let a = chi10_product(hmax, dmax)?;
    let b = chi10_hecke(hmax, dmax)?;
    if let Some(e) = a.first_disagreement(&b)? {
        return Err(Error::IdentityFailure(format!(
            "product and Hecke forms differ at p^{} q^{} qt^{}",
            e[0], e[1], e[2]
        )));
    }
    Ok(((2 * ywin + 1) * (hmax + 1) * (dmax + 1)) as usize)
}

/// `-1/W` as the exact-in-`p` part of `q qt L Z`, known below `q^hp qt^dp`.
fn w_inverse(hp: i32, dp: i32) -> Result<Series> {
    let t = table_for(hp, dp)?;
    borcherds_w(hp, dp, &t)?.invert()
}

/// `Z = -1/chi_10` in `(y, q, qt)` for `h <= hmax`, `d <= dmax`, expanded in
/// `|q| < |y| < 1` and known below `y^yprec`.
pub fn z_partition(hmax: i32, dmax: i32, yprec: i32) -> Result<Series> {
    let winv = w_inverse(hmax + 1, dmax + 1)?;
    let pfloor = winv.floors()[0];
    let pprec = yprec - pfloor;
    // -1/L = -p/(1-p)^2
    let minus_inv_l = Series::from_terms(
        &PQQ,
        &[Some(pprec), None, None],
        &[1, 0, 0],
        (1..pprec).map(|r| (vec![r, 0, 0], int(-(r as i64)))),
    )?;
    let z = minus_inv_l.mul(&winv)?.mul_monomial(&[0, -1, -1])?;
    jacobi::p_to_y(&z)
}

/// `Z` as a Laurent series in `(u, q, qt)` under `p = e^{iu}`, known below
/// `u^{2 gmax - 1}`, for `h <= hmax`, `d <= dmax`.
pub fn z_partition_u(gmax: i32, hmax: i32, dmax: i32) -> Result<Series> {
    let t = table_for(hmax + 1, dmax + 1)?;
    let w = borcherds_w(hmax + 1, dmax + 1, &t)?;
    let lw = l_series().mul(&w)?;
    let wprec = 2 * gmax + 3;
    let chi = elliptic::exp_substitute(&lw, Var::P, false, wprec)?.assert_floor(Var::W, 2)?;
    let z = chi.invert()?.neg().mul_monomial(&[0, -1, -1])?;
    elliptic::v_to_u(&z)
}

/// `q <-> qt` and `y <-> 1/y` symmetry of `Z` on its window. Returns the
/// number of coefficients compared.
pub fn symmetry_check(hmax: i32, dmax: i32, yprec: i32) -> Result<usize> {
    let z = z_partition(hmax, dmax, yprec)?;
    let mut checked = 0;
    let hd = hmax.min(dmax);
    let zs = z.truncate(Var::Q, hd)?.truncate(Var::Qt, hd)?;
    if let Some(e) = zs.first_disagreement(&zs.swap_vars(Var::Q, Var::Qt)?)? {
        return Err(Error::IdentityFailure(format!("q <-> qt fails at {e:?}")));
    }
    checked += zs.len();
    // (y + 2 + 1/y) [Z]_{q^{h-1} qt^{d-1}} is a Laurent polynomial
    // supported in |r| <= h + d; once the window covers that, y -> 1/y
    // must fix it exactly
    let ly = Series::from_terms(
        &[Var::Y],
        &[None],
        &[-1],
        [(vec![1], int(1)), (vec![0], int(2)), (vec![-1], int(1))],
    )?;
    for h in 0..=hmax {
        for d in 0..=dmax {
            let raw = z.slice(Var::Q, h - 1)?.slice(Var::Qt, d - 1)?;
            let m = raw.mul(&ly)?;
            let r = h + d;
            let yp = m.precs()[0].unwrap_or(i32::MAX);
            if yp <= r + 1 {
                return Err(Error::InsufficientPrecision(format!(
                    "y-window {yp} too small for h={h}, d={d}"
                )));
            }
            if let Some((e, _)) = m.terms().find(|(e, _)| e[0].abs() > r) {
                return Err(Error::IdentityFailure(format!(
                    "h={h}, d={d}: y^{} outside |r| <= {r}",
                    e[0]
                )));
            }
            let exact = m.promote_exact(Var::Y)?;
            if exact.reflect(Var::Y)?.terms().ne(exact.terms()) {
                return Err(Error::IdentityFailure(format!("y <-> 1/y fails at h={h}, d={d}")));
            }
            checked += exact.len();
        }
    }
    Ok(checked)
}

/// `N_{g,h,d}` on a box, with the basis coefficients `c_{g,h,d}` of
/// `[Z]_{q^{h-1} qt^{d-1}} = sum_g c_{g,h,d} (y^{1/2} + y^{-1/2})^{2g-2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionTable {
    pub n: BTreeMap<(u32, u32, u32), Rational>,
    pub basis: BTreeMap<(u32, u32, u32), Rational>,
    /// `(gmax, hmax, dmax)`.
    pub orders: (u32, u32, u32),
    /// Smallest certificate surplus among the basis fits.
    pub min_surplus: usize,
}

impl PartitionTable {
    pub fn get(&self, g: u32, h: u32, d: u32) -> Result<Rational> {
        let (gm, hm, dm) = self.orders;
        if g > gm || h > hm || d > dm {
            return Err(Error::InsufficientPrecision(format!(
                "N({g},{h},{d}) outside the computed box"
            )));
        }
        Ok(self.n.get(&(g, h, d)).cloned().unwrap_or_else(Rational::zero))
    }

    /// `c_{g,h,d}`; zero for `g > h + d`.
    pub fn basis_coeff(&self, g: u32, h: u32, d: u32) -> Rational {
        self.basis.get(&(g, h, d)).cloned().unwrap_or_else(Rational::zero)
    }
}

/// `y`-window for the basis fit at `(h, d)`: `4(h+d) + 8` raw coefficients
/// starting at `y^{-(h+d)}`.
pub fn fit_window(h: u32, d: u32) -> (i32, i32) {
    let r = (h + d) as i32;
    (-r, 3 * r + 8)
}

/// Computes the table by two routes (basis fit of the `y`-expansion and
/// direct inversion in `u`) and demands agreement.
pub fn partition_table(gmax: u32, hmax: u32, dmax: u32) -> Result<PartitionTable> {
    let (hm, dm, gm) = (hmax as i32, dmax as i32, gmax as i32);
    let yprec = fit_window(hmax, dmax).1;
    let zy = z_partition(hm, dm, yprec)?;
    let zu = z_partition_u(gm, hm, dm)?;
    let boxes: Vec<(u32, u32)> = (0..=hmax).flat_map(|h| (0..=dmax).map(move |d| (h, d))).collect();
    let fits: Vec<Result<(u32, u32, SymYLaurent, usize, Series)>> = boxes
        .par_iter()
        .map(|&(h, d)| {
            let (lo, hi) = fit_window(h, d);
            let raw = zy
                .slice(Var::Q, h as i32 - 1)?
                .slice(Var::Qt, d as i32 - 1)?
                .truncate(Var::Y, hi)?
                .assert_floor(Var::Y, lo)?;
            let (fit, surplus) = SymYLaurent::fit(&raw, h + d)?;
            let u = fit.to_u(2 * gm - 1)?;
            Ok((h, d, fit, surplus, u))
        })
        .collect();
    let mut table = PartitionTable {
        n: BTreeMap::new(),
        basis: BTreeMap::new(),
        orders: (gmax, hmax, dmax),
        min_surplus: usize::MAX,
    };
    for f in fits {
        let (h, d, fit, surplus, u) = f?;
        table.min_surplus = table.min_surplus.min(surplus);
        for (g, c) in &fit.coeffs {
            table.basis.insert((*g, h, d), c.clone());
        }
        for g in 0..=gmax {
            let e = 2 * g as i32 - 2;
            let a = u.coeff_checked(&[e])?;
            let b = zu.coeff_checked(&[e, h as i32 - 1, d as i32 - 1])?;
            if a != b {
                return Err(Error::IdentityFailure(format!(
                    "N({g},{h},{d}): y-basis route {a} differs from u route {b}"
                )));
            }
            if !a.is_zero() {
                table.n.insert((g, h, d), a);
            }
        }
    }
    Ok(table)
}

/// A single `N_{g,h,d}`.
pub fn gw_invariant(g: u32, h: u32, d: u32) -> Result<Rational> {
    partition_table(g, h, d)?.get(g, h, d)
}

/// `1/Delta` to `q^n`: the Yau-Zaslow series `sum N_{0,h,0} q^{h-1}`.
pub fn yau_zaslow(n: i32) -> Series {
    qmod::inverse_delta(n)
}

/// `-1/(p - 2 + 1/p) prod 1/((1 - p q^m)^2 (1 - q^m)^20 (1 - q^m/p)^2)` in
/// `(u, q)` under `p = e^{iu}`, known below `u^{2 gmax - 1}` and for
/// `q^{h-1}`, `h <= hmax`. The overall sign makes the leading term `u^{-2}`.
pub fn kkv_series(gmax: i32, hmax: i32) -> Result<Series> {
    let vars = [Var::P, Var::Q];
    let n = hmax + 1;
    let prec = [None, Some(n)];
    let mut den = Series::one(&vars, &prec);
    for m in 1..n {
        let f = |k: i32| {
            Series::from_terms(
                &vars,
                &prec,
                &[k.min(0), 0],
                [(vec![0, 0], int(1)), (vec![k, m], int(-1))],
            )
        };
        let (a, b, c) = (f(1)?, f(0)?, f(-1)?);
        den = den.mul(&a.pow(2)?)?.mul(&b.pow(20)?)?.mul(&c.pow(2)?)?;
    }
    let wprec = 2 * gmax + 3;
    let prod = elliptic::exp_substitute(&den, Var::P, false, wprec)?.invert()?;
    // e^w - 2 + e^{-w} = sum_{j>=1} 2 w^{2j} / (2j)!
    let mut fact = Rational::one();
    let mut lw = Vec::new();
    for j in 1..wprec {
        fact *= int(j as i64);
        if j % 2 == 0 {
            lw.push((vec![j, 0], int(2) / fact.clone()));
        }
    }
    let l = Series::from_terms(&[Var::W, Var::Q], &[Some(wprec), None], &[2, 0], lw)?;
    let z = l.invert()?.neg().mul(&prod)?.mul_monomial(&[0, -1])?;
    elliptic::v_to_u(&z)
}

/// Checks `N_{g,h,0}` against the KKV product for `g <= gmax`, `h <= hmax`.
pub fn kkv_check(gmax: u32, hmax: u32) -> Result<usize> {
    let table = partition_table(gmax, hmax, 0)?;
    let kkv = kkv_series(gmax as i32, hmax as i32)?;
    let mut checked = 0;
    for g in 0..=gmax {
        for h in 0..=hmax {
            let want = kkv.coeff_checked(&[2 * g as i32 - 2, h as i32 - 1])?;
            let got = table.get(g, h, 0)?;
            if want != got {
                return Err(Error::IdentityFailure(format!(
                    "N({g},{h},0) = {got}, KKV gives {want}"
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Checks `N_{0,h,0} = [1/Delta]_{q^{h-1}}` for `h <= hmax` and `N_{0,0,0} = 1`.
pub fn yau_zaslow_check(hmax: u32) -> Result<usize> {
    let table = partition_table(0, hmax, 0)?;
    let yz = yau_zaslow(hmax as i32);
    if table.get(0, 0, 0)? != int(1) {
        return Err(Error::IdentityFailure("N(0,0,0) != 1".into()));
    }
    for h in 0..=hmax {
        let want = yz.coeff_checked(&[h as i32 - 1])?;
        let got = table.get(0, h, 0)?;
        if want != got {
            return Err(Error::IdentityFailure(format!("N(0,{h},0) = {got}, 1/Delta gives {want}")));
        }
    }
    Ok(hmax as usize + 1)
}

/// A quasimodular form with coefficients linear in the formal symbols
/// `e(X)` and `e(B)`: `ex * e(X) + eb * e(B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicQMod {
    pub ex: QModPoly,
    pub eb: QModPoly,
}

impl SymbolicQMod {
    pub fn ddc2(&self) -> Self {
        SymbolicQMod { ex: qmod::ddc2(&self.ex), eb: qmod::ddc2(&self.eb) }
    }

    pub fn show(&self) -> String {
        format!("e(X)*[{}] + e(B)*[{}]", qmod::show(&self.ex), qmod::show(&self.eb))
    }
}

/// Toda's fiber-class potentials `F_g` to `q^n`, as the `e(X)` and `e(B)`
/// coefficient series.
pub fn toda_fg_series(g: u32, n: i32) -> Result<(Series, Series)> {
    let zero = Series::zero(&[Var::Q], &[Some(n)], &[0]);
    let divisor_sum = |f: &dyn Fn(i64) -> Rational| -> Result<Series> {
        // sum_{m, a >= 1} f(a) q^{ma}
        let mut s = zero.clone();
        for a in 1..n {
            let mut m = 1;
            while m * a < n {
                s.add_term(&[m * a], f(a as i64))?;
                m += 1;
            }
        }
        Ok(s)
    };
    match g {
        0 => Ok((divisor_sum(&|a| -rat(1, a * a * a))?, zero)),
        1 => {
            let s = divisor_sum(&|a| rat(1, a))?;
            Ok((s.scale(&rat(-1, 12)), s))
        }
        _ => {
            let g = g as usize;
            let f = qmod::bernoulli(2 * g) / int(4 * g as i64);
            let f = if g % 2 == 0 { f } else { -f };
            let c = qmod::eisenstein_series(2 * g as u32 - 2, n)?;
            Ok((c.scale(&f), zero))
        }
    }
}

/// `F_g` for `g >= 2`, recognized in `QMod_{2g-2}` from its `q`-expansion.
pub fn toda_fg(g: u32) -> Result<SymbolicQMod> {
    if g < 2 {
        return Err(Error::Precondition("F_0 and F_1 are not quasimodular".into()));
    }
    let k = 2 * g as i32 - 2;
    let n = qmod::dim(k) as i32 + qmod::SURPLUS as i32 + 4;
    let (ex, eb) = toda_fg_series(g, n)?;
    Ok(SymbolicQMod { ex: qmod::recognize(&ex, k)?, eb: qmod::recognize(&eb, k)? })
}

/// `<tau_1(F)>_1 = 2 C2 / Delta` to `q^n`.
pub fn k3_genus1_input(n: i32) -> Result<Series> {
    Ok(qmod::eisenstein_series(2, n + 1)?.scale(&int(2)).mul(&qmod::inverse_delta(n + 1))?.truncate(Var::Q, n)?)
}

/// The two evaluations of `d/dC2 [q d/dq (2 C2 / Delta)]`: through the
/// recognized polynomial of `Delta * q d/dq (2 C2/Delta)` and through
/// `2 q d/dq (1/Delta) + 40 C2 / Delta`. Returns the number of
/// coefficients compared (through `q^n`).
pub fn k3_genus1_check(n: i32) -> Result<usize> {
    let np = n + 1;
    let w = k3_genus1_input(np + 2)?.q_derive(Var::Q)?;
    let delta = qmod::delta_series(np + 2);
    let poly = qmod::recognize(&delta.mul(&w)?, 4)?;
    let inv = qmod::inverse_delta(np);
    let first = qmod::evaluate(&qmod::ddc2(&poly), np + 1)?.mul(&inv)?.truncate(Var::Q, np)?;
    let c2 = qmod::eisenstein_series(2, np + 1)?;
    let second = inv
        .q_derive(Var::Q)?
        .scale(&int(2))
        .add(&c2.mul(&inv)?.scale(&int(40)))?
        .truncate(Var::Q, np)?;
    if let Some(e) = first.first_disagreement(&second)? {
        return Err(Error::IdentityFailure(format!("evaluations differ at q^{}", e[0])));
    }
    if first.precs()[0] != Some(np) || second.precs()[0] != Some(np) {
        return Err(Error::InsufficientPrecision("evaluations lost precision".into()));
    }
    Ok((np + 1) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn borcherds_values() {
        let t = borcherds_exponents(12).unwrap();
        let want = [(-1, 2), (0, 20), (1, 0), (2, 0), (3, -128), (4, 216), (7, -1026), (8, 1616)];
        for (n, c) in want {
            assert_eq!(t.get(n).unwrap(), int(c), "c({n})");
        }
        for (n, c) in t.entries() {
            assert!(n.rem_euclid(4) == 0 || n.rem_euclid(4) == 3, "c({n}) = {c}");
        }
        assert!(t.get(13).is_err());
        assert_eq!(t.get(-4).unwrap(), int(0));
    }

    #[test]
    fn chi10_leading_row() {
        let chi = chi10_expand(Chi10Method::Product, 2, 2).unwrap();
        let row = chi.slice(Var::Q, 1).unwrap().slice(Var::Qt, 1).unwrap();
        // p - 2 + 1/p under p = -y
        assert_eq!(row.coeff(&[1]), int(-1));
        assert_eq!(row.coeff(&[0]), int(-2));
        assert_eq!(row.coeff(&[-1]), int(-1));
        assert_eq!(row.len(), 3);
    }

    #[test]
    fn chi10_pipelines_agree_small() {
        assert!(chi10_cross_check(3, 3, 10).unwrap() > 0);
    }

    #[test]
    fn z_leading_coefficient() {
        let z = z_partition(1, 1, 10).unwrap();
        let row = z.slice(Var::Q, -1).unwrap().slice(Var::Qt, -1).unwrap();
        let b = jacobi::basis_element_y(0, 10);
        assert!(row.agrees_with(&b).unwrap());
        assert_eq!(row.precs()[0], Some(10));
    }

    #[test]
    fn yau_zaslow_low() {
        assert_eq!(yau_zaslow_check(4).unwrap(), 5);
        let t = partition_table(1, 2, 1).unwrap();
        assert_eq!(t.get(0, 0, 0).unwrap(), int(1));
        assert_eq!(t.get(0, 2, 0).unwrap(), int(324));
        assert!(t.min_surplus >= qmod::SURPLUS);
    }

    #[test]
    fn kkv_low() {
        assert_eq!(kkv_check(3, 2).unwrap(), 12);
    }

    #[test]
    fn symmetric_window() {
        assert!(symmetry_check(2, 2, 14).unwrap() > 0);
    }

    #[test]
    fn toda_genus2() {
        let f = toda_fg(2).unwrap();
        assert_eq!(f.ex, qmod::c2().scale(&rat(-1, 240)));
        assert!(f.eb.is_zero());
        assert_eq!(f.ddc2().ex, QModPoly::constant(rat(-1, 240)));
    }

    #[test]
    fn genus1_identity() {
        assert_eq!(k3_genus1_check(8).unwrap(), 10);
    }
}
