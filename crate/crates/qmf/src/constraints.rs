//! Properties 1-3 of three-variable series `F(u, q, qt)` and the finite
//! linear system behind the uniqueness statement.
//!
//! `F` is written two ways: as `sum a_{g,h,d} u^{2g-2} q^{h-1} qt^{d-1}`
//! (the `u`-form, variables `[U, Q, Qt]`) and as
//! `sum c_{g,h,d} s^{2g-2} q^{h-1} qt^{d-1}` with `s = y^{1/2} + y^{-1/2}`
//! (the `y`-form, variables `[Y, Q, Qt]`).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::elliptic;
use crate::error::{Error, Result};
use crate::jacobi::{self, Generator, JacobiPoly, SymYLaurent};
use crate::linalg::{RowReducer, RowStatus, SparseRow};
use crate::qmod::{self, QModPoly, SURPLUS};
use crate::report::ConstraintReport;
use crate::scalar::{int, Rational};
use crate::series::Var;
use crate::Series;

/// Property 1: floors `u^{-2}` (even powers only), `q^{-1}`, `qt^{-1}` on
/// every stored term.
pub fn check_property1(f: &Series) -> ConstraintReport {
    let window = format!("{} stored terms", f.len());
    ConstraintReport::run("property 1", window, || {
        let iq = f.index_of(Var::Q)?;
        let it = f.index_of(Var::Qt)?;
        let iu = f.index_of(Var::U).ok();
        if iu.is_none() && f.index_of(Var::Y).is_err() {
            return Err(Error::Precondition("need a u- or y-variable".into()));
        }
        for (e, _) in f.terms() {
            let bad_u = iu.is_some_and(|i| e[i] < -2 || e[i].rem_euclid(2) != 0);
            if bad_u || e[iq] < -1 || e[it] < -1 {
                return Err(Error::IdentityFailure(format!("term {e:?} violates the shape")));
            }
        }
        Ok(f.len())
    })
}

/// `-(phi_{-2,1} / (p - 2 + 1/p)) Delta` in `(y, qt)`, known below `qt^n`.
/// Multiplying `s^{2g-2}` by `phi_{-2,1} Delta` equals `s^{2g}` times this.
fn phi_over_l_delta(n: i32) -> Result<Series> {
    let part = elliptic::theta_product_part(n);
    let sq = jacobi::p_to_y(&part.mul(&part)?)?.rename(Var::Q, Var::Qt)?;
    let delta = qmod::delta_series(n + 1).rename(Var::Q, Var::Qt)?.embed(&[Var::Y, Var::Qt])?;
    Ok(sq.mul(&delta)?.neg())
}

/// `phi_{-2,1}(y, qt) Delta(qt)` to `qt^n`.
fn phi_delta(n: i32) -> Result<Series> {
    let phi = jacobi::generator_fourier(Generator::PhiM2, n)?.rename(Var::Q, Var::Qt)?;
    let delta = qmod::delta_series(n + 1).rename(Var::Q, Var::Qt)?.embed(&[Var::Y, Var::Qt])?;
    phi.mul(&delta)
}

/// Recognizes `[F]_{q^{h-1}} phi_{-2,1} Delta` in `J_{0,h}`; `f` is a `y`-form.
pub fn property2_recognize(f: &Series, h: u32) -> Result<jacobi::Recognized> {
    let slice = f.slice(Var::Q, h as i32 - 1)?;
    if slice.vars() != [Var::Y, Var::Qt] {
        return Err(Error::Precondition("property 2 needs a series in (y, q, qt)".into()));
    }
    let n = slice.precs()[1].ok_or_else(|| Error::Precondition("need finite qt-order".into()))? + 2;
    let prod = slice.mul(&phi_delta(n)?)?;
    jacobi::recognize(&prod, 0, h as i32)
}

/// Property 2 for the `q^{h-1}` slice of a `y`-form.
pub fn check_property2(f: &Series, h: u32) -> ConstraintReport {
    let window = format!("h={h}, qt-prec {:?}, y-prec {:?}", f.prec_of(Var::Qt).ok().flatten(), f.precs()[0]);
    match property2_recognize(f, h) {
        Ok(r) => ConstraintReport::pass("property 2", window, r.surplus)
            .with_details(vec![format!("h={h}: {}", jacobi::show(&r.poly))]),
        Err(e) => ConstraintReport::from_error("property 2", window, &e),
    }
}

/// `y`-form of `Z` sized for property 2 at `h`.
pub fn property2_window(h: u32) -> Result<Series> {
    let d = jacobi::dim(0, h as i32) as i32 + SURPLUS as i32 + 1;
    let r = jacobi::support_radius(d, h as i32).unwrap_or(0);
    crate::igusa::z_partition(h as i32, d, r + 8)
}

/// Recognized `Delta(q) F_{g,d}(q)` for `g <= gmax`, `d <= dmax`; `f` is a
/// `u`-form. The relation `d/dC2 F_{g,d} = (2d - 2) F_{g-1,d}` is enforced.
pub fn property3_polys(f: &Series, gmax: u32, dmax: u32) -> Result<BTreeMap<(u32, u32), QModPoly>> {
    if f.vars() != [Var::U, Var::Q, Var::Qt] {
        return Err(Error::Precondition("property 3 needs a series in (u, q, qt)".into()));
    }
    let qp = f.precs()[1].ok_or_else(|| Error::Precondition("need finite q-order".into()))?;
    let delta = qmod::delta_series(qp + 1);
    let mut out: BTreeMap<(u32, u32), QModPoly> = BTreeMap::new();
    for d in 0..=dmax {
        for g in 0..=gmax {
            let fgd = f.slice(Var::U, 2 * g as i32 - 2)?.slice(Var::Qt, d as i32 - 1)?;
            let poly = qmod::recognize(&delta.mul(&fgd)?, 2 * g as i32)
                .map_err(|e| annotate(e, &format!("(a) at g={g}, d={d}")))?;
            let lower = if g > 0 { out[&(g - 1, d)].clone() } else { QModPoly::zero() };
            if qmod::ddc2(&poly) != lower.scale(&int(2 * d as i64 - 2)) {
                return Err(Error::IdentityFailure(format!(
                    "(b) d/dC2 F_{{{g},{d}}} != (2d-2) F_{{{},{d}}}",
                    g as i64 - 1
                )));
            }
            out.insert((g, d), poly);
        }
    }
    Ok(out)
}

fn annotate(e: Error, at: &str) -> Error {
    match e {
        Error::InsufficientPrecision(m) => Error::InsufficientPrecision(format!("{at}: {m}")),
        Error::Inconsistent(m) => Error::Inconsistent(format!("{at}: {m}")),
        other => Error::IdentityFailure(format!("{at}: {other}")),
    }
}

/// Property 3 (a) and (b).
pub fn check_property3(f: &Series, gmax: u32, dmax: u32) -> ConstraintReport {
    let window = format!("g<={gmax}, d<={dmax}, q-prec {:?}", f.prec_of(Var::Q).ok().flatten());
    match property3_polys(f, gmax, dmax) {
        Ok(m) => {
            let details = m
                .iter()
                .map(|((g, d), p)| format!("Delta F_{{{g},{d}}} = {}", qmod::show(p)))
                .collect();
            ConstraintReport::pass("property 3", window, m.len()).with_details(details)
        }
        Err(e) => ConstraintReport::from_error("property 3", window, &e),
    }
}

/// The ansatz `Delta(qt) [Z]_{q^{h-1}} Theta(u, qt)^{2-2h} = sum_i f_i wp^{h-i}`:
/// returns `f_0 .. f_h`, each verified free of `C2`.
pub fn ansatz_check(h: u32, dmax: i32, uprec: i32) -> Result<Vec<QModPoly>> {
    let gmax = (uprec + 1) / 2 + 1;
    let z = crate::igusa::z_partition_u(gmax, h as i32, dmax)?;
    let slice = z.slice(Var::Q, h as i32 - 1)?.rename(Var::Qt, Var::Q)?;
    let n = dmax + 2;
    let up = uprec + 2 * h as i32 + 6;
    let in_qt = |s: &elliptic::WSeries| -> Result<Series> { s.to_series(n) };
    let theta = in_qt(&elliptic::theta_taylor(up))?.assert_floor(Var::U, 1)?;
    let t2 = theta.mul(&theta)?;
    let tpow = match h {
        0 => t2,
        1 => Series::one(&[Var::U, Var::Q], &[None, None]),
        2 => t2.invert()?,
        _ => return Err(Error::Precondition("the ansatz is checked for h <= 2".into())),
    };
    let delta = qmod::delta_series(n + 1).embed(&[Var::U, Var::Q])?;
    let x = delta.mul(&slice)?.mul(&tpow)?;
    let wp = in_qt(&elliptic::wp_taylor(0, up).w_to_u()?)?.assert_floor(Var::U, -2)?;
    let gens = qmod::generators(n);
    let mut cols: Vec<(usize, [u32; 3], Series)> = Vec::new();
    for i in 0..=h {
        let wpow = wp.pow(h - i)?;
        for m in qmod::monomials(2 * i as i32) {
            let c = QModPoly::monomial(m, int(1)).evaluate(&gens)?.embed(&[Var::U, Var::Q])?;
            cols.push((i as usize, m, wpow.mul(&c)?));
        }
    }
    let (upx, qpx) = (x.precs()[0].unwrap(), x.precs()[1].unwrap());
    let ulo = x.floors()[0].min(-2 * h as i32);
    let mut red = RowReducer::new(cols.len());
    for j in ulo..upx {
        for k in 0..qpx {
            let row: SparseRow<Rational> = cols
                .iter()
                .enumerate()
                .map(|(c, (_, _, s))| (c, s.coeff_checked(&[j, k])))
                .map(|(c, v)| v.map(|v| (c, v)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            if red.push(row, x.coeff(&[j, k])) == RowStatus::Inconsistent {
                return Err(Error::Inconsistent(format!("u^{j} qt^{k}")));
            }
        }
    }
    let sol = red.unique_solution()?;
    if red.surplus() < SURPLUS {
        return Err(Error::InsufficientPrecision(format!("{} surplus coefficients", red.surplus())));
    }
    let mut f = vec![QModPoly::zero(); h as usize + 1];
    for ((i, m, _), v) in cols.iter().zip(sol) {
        f[*i].add_term(*m, v);
    }
    for (i, fi) in f.iter().enumerate() {
        if qmod::project_modular(fi) != *fi {
            return Err(Error::IdentityFailure(format!("f_{i} = {} involves C2", qmod::show(fi))));
        }
    }
    Ok(f)
}

/// Kernel of the truncated constraint system.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    /// Dimension of the kernel projected to the unknowns `c_{g,h,d}`.
    pub dim: usize,
    /// Basis of that projection, keyed by `(g, h, d)`.
    pub basis: Vec<BTreeMap<(u32, u32, u32), Rational>>,
    /// Kernel directions that move only auxiliary unknowns; nonzero means
    /// the window is too small to pin them down.
    pub aux_only: usize,
    pub unknowns: usize,
    pub equations: usize,
}

/// `c_{g,h,d}` for `g <= h + d`, `h <= hmax`, `d <= dmax` subject to
/// property 2 on every `q`-slice, property 3 for `g <= gmax` on every
/// `qt`-slice, and optionally `c_{0,0,0} = 0`. Auxiliary unknowns carry the
/// Jacobi and quasimodular coordinates.
pub fn uniqueness_kernel(gmax: u32, hmax: u32, dmax: u32, fix_c000: bool) -> Result<Kernel> {
    let mut cidx: BTreeMap<(u32, u32, u32), usize> = BTreeMap::new();
    for h in 0..=hmax {
        for d in 0..=dmax {
            for g in 0..=(h + d) {
                let n = cidx.len();
                cidx.insert((g, h, d), n);
            }
        }
    }
    let mut ncols = cidx.len();
    let mut jidx: BTreeMap<(u32, usize), usize> = BTreeMap::new();
    let jbasis: Vec<Vec<[u32; 4]>> = (0..=hmax).map(|h| jacobi::monomials(0, h as i32)).collect();
    for h in 0..=hmax {
        for j in 0..jbasis[h as usize].len() {
            jidx.insert((h, j), ncols);
            ncols += 1;
        }
    }
    let mut midx: BTreeMap<(u32, u32, [u32; 3]), usize> = BTreeMap::new();
    for d in 0..=dmax {
        for g in 0..=gmax {
            for m in qmod::monomials(2 * g as i32) {
                midx.insert((g, d, m), ncols);
                ncols += 1;
            }
        }
    }
    let mut rows: Vec<SparseRow<Rational>> = Vec::new();

    // property 2: sum_{d,g} c s^{2g} B qt^{d-1} = sum_j x_j M_j, B = -phi/L Delta
    let qn = dmax as i32 + 1;
    let b = phi_over_l_delta(qn + 1)?;
    let s2 = Series::from_terms(
        &[Var::Y, Var::Qt],
        &[None, None],
        &[-1, 0],
        [(vec![1, 0], int(1)), (vec![0, 0], int(2)), (vec![-1, 0], int(1))],
    )?;
    let gmax_all = hmax + dmax;
    let mut s2pow = vec![Series::one(&[Var::Y, Var::Qt], &[None, None])];
    for g in 1..=gmax_all {
        let next = s2pow[g as usize - 1].mul(&s2)?;
        s2pow.push(next);
    }
    let bcols: Vec<Series> = s2pow.iter().map(|s| s.mul(&b)).collect::<Result<_>>()?;
    for h in 0..=hmax {
        let mons: Vec<Series> = jbasis[h as usize]
            .iter()
            .map(|e| {
                jacobi::evaluate(&JacobiPoly::monomial(*e, int(1)), qn)
                    .and_then(|s| s.rename(Var::Q, Var::Qt))
            })
            .collect::<Result<_>>()?;
        let mut eqs: BTreeMap<(i32, i32), SparseRow<Rational>> = BTreeMap::new();
        let mut add = |r: i32, n: i32, col: usize, v: Rational| {
            if n < qn && !v.is_zero() {
                let row = eqs.entry((n, r)).or_default();
                let x = row.remove(&col).unwrap_or_else(Rational::zero) + v;
                if !x.is_zero() {
                    row.insert(col, x);
                }
            }
        };
        for d in 0..=dmax {
            for g in 0..=(h + d) {
                let col = cidx[&(g, h, d)];
                for (e, v) in bcols[g as usize].terms() {
                    add(e[0], e[1] + d as i32 - 1, col, v.clone());
                }
            }
        }
        for (j, m) in mons.iter().enumerate() {
            for (e, v) in m.terms() {
                add(e[0], e[1], jidx[&(h, j)], -v.clone());
            }
        }
        rows.extend(eqs.into_values());
    }

    // property 3 (a): Delta(q) sum_h a_{g,h,d} q^{h-1} = sum_m y_m m(q), where
    // a_{g,h,d} = sum_{g'} c_{g',h,d} t(g', g)
    let hq = hmax as i32 + 1;
    let uprec = 2 * gmax as i32 - 1;
    let t: Vec<Series> = (0..=gmax_all)
        .map(|g| SymYLaurent::from_coeffs(BTreeMap::from([(g, Rational::one())])).to_u(uprec))
        .collect::<Result<_>>()?;
    let delta = qmod::delta_series(hq + 1);
    let gens = qmod::generators(hq);
    for d in 0..=dmax {
        for g in 0..=gmax {
            for n in 0..hq {
                let mut row: SparseRow<Rational> = BTreeMap::new();
                for h in 0..=hmax {
                    let dc = delta.coeff(&[n - h as i32 + 1]);
                    if dc.is_zero() {
                        continue;
                    }
                    for gp in 0..=(h + d) {
                        let tv = t[gp as usize].coeff(&[2 * g as i32 - 2]);
                        if !tv.is_zero() {
                            let col = cidx[&(gp, h, d)];
                            let x = row.remove(&col).unwrap_or_else(Rational::zero) + tv * dc.clone();
                            if !x.is_zero() {
                                row.insert(col, x);
                            }
                        }
                    }
                }
                for m in qmod::monomials(2 * g as i32) {
                    let v = QModPoly::monomial(m, int(1)).evaluate(&gens)?.coeff(&[n]);
                    if !v.is_zero() {
                        row.insert(midx[&(g, d, m)], -v);
                    }
                }
                rows.push(row);
            }
            // (b): d/dC2 of the g-polynomial equals (2d-2) times the (g-1)-polynomial
            if g > 0 {
                let mut eqs: BTreeMap<[u32; 3], SparseRow<Rational>> = BTreeMap::new();
                for m in qmod::monomials(2 * g as i32) {
                    if m[0] > 0 {
                        let lower = [m[0] - 1, m[1], m[2]];
                        eqs.entry(lower).or_default().insert(midx[&(g, d, m)], int(m[0] as i64));
                    }
                }
                let f = int(2 * d as i64 - 2);
                for m in qmod::monomials(2 * g as i32 - 2) {
                    if !f.is_zero() {
                        eqs.entry(m).or_default().insert(midx[&(g - 1, d, m)], -f.clone());
                    }
                }
                rows.extend(eqs.into_values());
            }
        }
    }
    if fix_c000 {
        rows.push(BTreeMap::from([(cidx[&(0, 0, 0)], Rational::one())]));
    }

    let equations = rows.len();
    let mut red = RowReducer::new(ncols);
    for r in rows {
        red.push(r, Rational::zero());
    }
    let null = red.nullspace();
    let nc = cidx.len();
    let mut proj = RowReducer::new(nc);
    let mut basis = Vec::new();
    for v in &null {
        let row: SparseRow<Rational> =
            (0..nc).filter(|&i| !v[i].is_zero()).map(|i| (i, v[i].clone())).collect();
        if proj.push(row, Rational::zero()) == RowStatus::Pivot {
            basis.push(
                cidx.iter()
                    .filter(|(_, &i)| !v[i].is_zero())
                    .map(|(k, &i)| (*k, v[i].clone()))
                    .collect(),
            );
        }
    }
    Ok(Kernel {
        dim: proj.rank(),
        basis,
        aux_only: null.len() - proj.rank(),
        unknowns: ncols,
        equations,
    })
}

/// Whether a kernel vector is proportional to the basis coefficients of `Z`
/// on the same box.
pub fn proportional_to_z(
    v: &BTreeMap<(u32, u32, u32), Rational>,
    table: &crate::igusa::PartitionTable,
) -> bool {
    let keys: BTreeSet<(u32, u32, u32)> = v.keys().chain(table.basis.keys()).copied().collect();
    let (_, hm, dm) = table.orders;
    let keys: Vec<_> = keys.into_iter().filter(|k| k.1 <= hm && k.2 <= dm).collect();
    let Some(k0) = keys.iter().find(|k| !table.basis_coeff(k.0, k.1, k.2).is_zero()) else {
        return false;
    };
    let zero = Rational::zero();
    let ratio = v.get(k0).unwrap_or(&zero).clone() / table.basis_coeff(k0.0, k0.1, k0.2);
    !ratio.is_zero()
        && keys
            .iter()
            .all(|k| *v.get(k).unwrap_or(&zero) == ratio.clone() * table.basis_coeff(k.0, k.1, k.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::igusa;

    #[test]
    fn property1_shapes() {
        let z = igusa::z_partition_u(2, 2, 2).unwrap();
        assert!(check_property1(&z).passed());
        let mut bad = Series::zero(&[Var::U, Var::Q, Var::Qt], &[None, None, None], &[-3, -1, -1]);
        bad.add_term(&[-3, 0, 0], int(1)).unwrap();
        assert!(!check_property1(&bad).passed());
        let zero = Series::zero(&[Var::U, Var::Q, Var::Qt], &[None, None, None], &[0, 0, 0]);
        assert!(check_property1(&zero).passed());
    }

    #[test]
    fn property2_base_case() {
        let z = property2_window(0).unwrap();
        let r = property2_recognize(&z, 0).unwrap();
        assert_eq!(r.poly, JacobiPoly::constant(int(-1)));
        for h in 1..=2 {
            let z = property2_window(h).unwrap();
            assert!(check_property2(&z, h).passed(), "h={h}");
        }
    }

    #[test]
    fn property2_rejects_asymmetric() {
        let mut z = property2_window(1).unwrap();
        z.add_term(&[3, 0, -1], int(1)).unwrap();
        assert!(!check_property2(&z, 1).passed());
    }

    #[test]
    fn property3_small() {
        let z = igusa::z_partition_u(2, 9, 1).unwrap();
        let m = property3_polys(&z, 2, 1).unwrap();
        // d = 1: purely modular
        for g in 0..=2 {
            let p = &m[&(g, 1)];
            assert_eq!(qmod::project_modular(p), *p);
        }
        assert_eq!(m[&(0, 0)], QModPoly::one());
    }

    #[test]
    fn ansatz_low() {
        let f0 = ansatz_check(0, 6, 6).unwrap();
        assert_eq!(f0.len(), 1);
        assert!(!f0[0].is_zero());
        let f1 = ansatz_check(1, 6, 6).unwrap();
        assert_eq!(f1.len(), 2);
    }

    #[test]
    fn kernel_small() {
        let k = uniqueness_kernel(1, 1, 1, true).unwrap();
        assert_eq!(k.dim, 0);
        let k = uniqueness_kernel(1, 1, 1, false).unwrap();
        assert_eq!(k.dim, 1);
        let t = igusa::partition_table(0, 1, 1).unwrap();
        assert!(proportional_to_z(&k.basis[0], &t));
    }
}
