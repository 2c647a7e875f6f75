//! Summation identities behind the constant-term formulas, and the
//! commutation relations of residue operators.

use num_traits::Zero;

use super::me::MEElement;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qmod::bernoulli;
use crate::report::ConstraintReport;
use crate::scalar::{int, Rational};

/// All orderings of `items`, lexicographic in positions.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// `binom(x, r)` for any rational `x`.
fn binom(x: &Rational, r: u32) -> Rational {
    let mut acc = int(1);
    for i in 0..r {
        acc = acc * (x - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// `sum_{tau in S_m} binom(x + m - 1 - asc(tau), m) = x^m` at `x = 0..=xmax`.
pub fn worpitzky_check(m: usize, xmax: i64) -> ConstraintReport {
    let name = format!("Worpitzky identity m={m}");
    let window = format!("x=0..{xmax}");
    ConstraintReport::run(name, window, || {
        if m > 7 {
            return Err(Error::Precondition("m <= 7".into()));
        }
        let items: Vec<usize> = (0..m).collect();
        let ascents: Vec<i64> = permutations(&items)
            .iter()
            .map(|t| t.windows(2).filter(|w| w[1] > w[0]).count() as i64)
            .collect();
        for x in 0..=xmax {
            let lhs: Rational = ascents.iter().map(|a| binom(&int(x + m as i64 - 1 - a), m as u32)).sum();
            let rhs = int(x).pow(m as i32);
            if lhs != rhs {
                return Err(Error::IdentityFailure(format!("x = {x}: {lhs} vs {rhs}")));
            }
        }
        Ok(xmax as usize + 1)
    })
}

/// Polynomials in `x_1..x_4`.
pub type EMPoly = Poly<4, Rational>;

/// Working ring: `x_1..x_4` and the simplex size `S` in slot 4.
type P5 = Poly<5, Rational>;
const S: usize = 4;

fn substitute(p: &P5, v: usize, q: &P5) -> P5 {
    let maxe = p.terms().map(|(e, _)| e[v]).max().unwrap_or(0);
    let mut pows = vec![P5::one()];
    for i in 0..maxe as usize {
        pows.push(pows[i].mul(q));
    }
    let mut r = P5::zero();
    for (e, c) in p.terms() {
        let mut rest = *e;
        rest[v] = 0;
        r = r.add(&P5::monomial(rest, c.clone()).mul(&pows[e[v] as usize]));
    }
    r
}

fn antiderivative(p: &P5, v: usize) -> P5 {
    let mut r = P5::zero();
    for (e, c) in p.terms() {
        let mut f = *e;
        f[v] += 1;
        r.add_term(f, c / int(f[v] as i64));
    }
    r
}

fn var(i: usize) -> P5 {
    P5::generator(i)
}

/// `zeta(-k) = (-1)^k B_{k+1} / (k+1)`.
fn zeta_neg(k: u32) -> Rational {
    let b = bernoulli(k as usize + 1) / int(k as i64 + 1);
    if k % 2 == 0 {
        b
    } else {
        -b
    }
}

/// Right side: over nonempty `I`, integrate over the simplex
/// `sum_{i in I} x_i = X - sum_{i not in I} x_i` by iterated integration,
/// then send `x_i^k` to `zeta(-k)` outside `I`.
fn em_rhs(p: &P5, m: usize, x: i64) -> Rational {
    let mut total = Rational::zero();
    for mask in 1u32..(1 << m) {
        let inside: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let outside: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).collect();
        let (&last, free) = inside.split_last().unwrap();
        // x_last = S - sum of the other inside variables
        let mut lin = var(S);
        for i in free {
            lin = lin.sub(&var(*i));
        }
        let mut q = substitute(p, last, &lin);
        for (j, i) in free.iter().enumerate() {
            let mut upper = var(S);
            for k in &free[j + 1..] {
                upper = upper.sub(&var(*k));
            }
            q = substitute(&antiderivative(&q, *i), *i, &upper);
        }
        let mut sval = P5::constant(int(x));
        for i in &outside {
            sval = sval.sub(&var(*i));
        }
        let q = substitute(&q, S, &sval);
        for (e, c) in q.terms() {
            let mut t = c.clone();
            for i in &outside {
                t *= zeta_neg(e[*i]);
            }
            total += t;
        }
    }
    total
}

fn compositions(x: i64, m: usize) -> Vec<Vec<i64>> {
    if m == 1 {
        return if x >= 1 { vec![vec![x]] } else { vec![] };
    }
    (1..x)
        .flat_map(|first| {
            compositions(x - first, m - 1).into_iter().map(move |mut c| {
                c.insert(0, first);
                c
            })
        })
        .collect()
}

fn em_lhs(p: &EMPoly, m: usize, x: i64) -> Rational {
    compositions(x, m)
        .iter()
        .map(|c| {
            p.terms()
                .map(|(e, k)| k * (0..m).map(|i| int(c[i]).pow(e[i] as i32)).product::<Rational>())
                .sum::<Rational>()
        })
        .sum()
}

fn em_sides(p: &EMPoly, m: usize, x: i64) -> Result<(Rational, Rational)> {
    if m == 0 || m > 4 || x < 1 {
        return Err(Error::Precondition("need 1 <= m <= 4 and X >= 1".into()));
    }
    if p.terms().any(|(e, _)| e[m..].iter().any(|x| *x > 0)) {
        return Err(Error::Precondition(format!("polynomial uses more than {m} variables")));
    }
    let mut lifted = P5::zero();
    for (e, c) in p.terms() {
        lifted.add_term([e[0], e[1], e[2], e[3], 0], c.clone());
    }
    Ok((em_lhs(p, m, x), em_rhs(&lifted, m, x)))
}

/// Sum of `P` over positive compositions of `X` against the simplex
/// integrals with negative zeta values.
pub fn euler_maclaurin_check(p: &EMPoly, m: usize, x: i64) -> ConstraintReport {
    ConstraintReport::run("Euler-Maclaurin sum", format!("m={m}, X={x}"), || {
        let (l, r) = em_sides(p, m, x)?;
        if l != r {
            return Err(Error::IdentityFailure(format!("{l} vs {r}")));
        }
        Ok(1)
    })
}

/// Every monomial of degree at most `max_deg` in `m <= max_m` variables,
/// for `X = 1..=max_x`.
pub fn euler_maclaurin_suite(max_deg: u32, max_m: usize, max_x: i64) -> ConstraintReport {
    let window = format!("deg<={max_deg}, m<={max_m}, X<={max_x}");
    ConstraintReport::run("Euler-Maclaurin sums", window, || {
        let mut count = 0;
        for m in 1..=max_m {
            let mut exps = vec![[0u32; 4]];
            for i in 0..m {
                exps = exps
                    .into_iter()
                    .flat_map(|e| {
                        (0..=max_deg).map(move |a| {
                            let mut f = e;
                            f[i] = a;
                            f
                        })
                    })
                    .filter(|e| e.iter().sum::<u32>() <= max_deg)
                    .collect();
            }
            for e in exps {
                let p = EMPoly::monomial(e, int(1));
                for x in 1..=max_x {
                    let (l, r) = em_sides(&p, m, x)?;
                    if l != r {
                        return Err(Error::IdentityFailure(format!("x^{e:?}, m={m}, X={x}: {l} vs {r}")));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    })
}

type WPoly = Poly<4, Rational>;

/// Clears denominators of a combination of `w`-difference monomials and
/// expands it as a polynomial in `w_1..w_4`.
fn expand_rational(f: &MEElement) -> Result<WPoly> {
    let mut clear: std::collections::BTreeMap<(usize, usize), i32> = Default::default();
    for (m, _) in f.terms() {
        if m.c != [0; 3] {
            return Err(Error::Precondition("rational samples carry no C-factors".into()));
        }
        for (g, e) in &m.g {
            let super::me::Gen::Lin { a, b } = *g else {
                return Err(Error::Precondition("rational samples use only w_a - w_b".into()));
            };
            if b > 4 {
                return Err(Error::Precondition("at most four variables".into()));
            }
            let x = clear.entry((a, b)).or_insert(0);
            *x = (*x).max(-e);
        }
    }
    let mut out = WPoly::zero();
    for (m, c) in f.terms() {
        let mut t = WPoly::constant(c.clone());
        let mut all = clear.clone();
        for (g, e) in &m.g {
            let super::me::Gen::Lin { a, b } = *g else { unreachable!() };
            *all.get_mut(&(a, b)).unwrap() += e;
        }
        for ((a, b), e) in all {
            let d = WPoly::generator(a - 1).sub(&WPoly::generator(b - 1));
            t = t.mul(&d.pow(e as u32));
        }
        out = out.add(&t);
    }
    Ok(out)
}

fn same_function(f: &MEElement, g: &MEElement) -> Result<bool> {
    Ok(expand_rational(&f.sub(g))?.is_zero())
}

/// `R_ab R_cb = R_cb R_ab + R_ca R_ab` and `R_ab R_bc = -R_ba R_ac` on each
/// sample, for all pairwise distinct `a, b, c` among the sample's variables.
pub fn residue_relations_check(samples: &[MEElement]) -> ConstraintReport {
    ConstraintReport::run("residue operator relations", format!("{} samples", samples.len()), || {
        let mut count = 0;
        for f in samples {
            let n = f.variables().last().copied().unwrap_or(3).max(3);
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        if a == b || b == c || a == c {
                            continue;
                        }
                        let lhs = f.residue(a, b)?.residue(c, b)?;
                        let rhs = f.residue(c, b)?.residue(a, b)?.add(&f.residue(c, a)?.residue(a, b)?);
                        if !same_function(&lhs, &rhs)? {
                            return Err(Error::IdentityFailure(format!("R{a}{b} R{c}{b} on {f}")));
                        }
                        let lhs = f.residue(a, b)?.residue(b, c)?;
                        let rhs = f.residue(b, a)?.residue(a, c)?.neg();
                        if !same_function(&lhs, &rhs)? {
                            return Err(Error::IdentityFailure(format!("R{a}{b} R{b}{c} on {f}")));
                        }
                        count += 2;
                    }
                }
            }
        }
        Ok(count)
    })
}

/// Monomials in differences `z_i - z_j` in three and four variables.
pub fn residue_relation_samples() -> Vec<MEElement> {
    let mono = |f: &[(usize, usize, i32)]| {
        f.iter().fold(MEElement::one(), |acc, (a, b, e)| acc.mul(&MEElement::lin_pow(*a, *b, *e)))
    };
    vec![
        mono(&[(1, 2, -1), (1, 3, -1)]),
        MEElement::one(),
        mono(&[(2, 3, -2), (1, 2, -1)]),
        mono(&[(1, 2, -2), (1, 3, -1), (2, 3, -1)]),
        mono(&[(1, 2, -1), (2, 3, -1), (1, 3, -1)]),
        mono(&[(1, 2, -3), (1, 3, 2)]),
        mono(&[(1, 2, -2), (2, 3, -2), (1, 3, 1)]),
        mono(&[(1, 2, 1), (1, 3, -2), (2, 3, -1)]),
        mono(&[(1, 2, -1), (1, 3, -1), (1, 4, -1)]),
        mono(&[(1, 2, -2), (3, 4, -1), (1, 4, -1)]),
        mono(&[(1, 3, -1), (2, 4, -2), (1, 2, -1), (3, 4, 1)]),
        mono(&[(1, 4, -2), (2, 3, -1), (2, 4, -1)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worpitzky_small() {
        assert!(worpitzky_check(1, 10).passed());
        assert!(worpitzky_check(2, 10).passed());
        assert!(worpitzky_check(4, 10).passed());
    }

    #[test]
    fn euler_maclaurin_examples() {
        let (l, r) = em_sides(&EMPoly::one(), 2, 3).unwrap();
        assert_eq!((l, r), (int(2), int(2)));
        let p = EMPoly::monomial([1, 2, 0, 0], int(1));
        assert!(euler_maclaurin_check(&p, 3, 10).passed());
        let q = EMPoly::monomial([3, 0, 0, 0], int(1));
        let (l, r) = em_sides(&q, 1, 5).unwrap();
        assert_eq!((l, r), (int(125), int(125)));
    }

    #[test]
    fn residue_relations_hold() {
        let r = residue_relations_check(&residue_relation_samples());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn clearing_denominators_sees_partial_fractions() {
        // 1/((a-b)(b-c)) + 1/((b-c)(c-a)) + 1/((c-a)(a-b)) = 0
        let l = |a, b| MEElement::lin_pow(a, b, -1);
        let s = l(1, 2).mul(&l(2, 3)).add(&l(2, 3).mul(&l(3, 1))).add(&l(3, 1).mul(&l(1, 2)));
        assert!(!s.is_zero());
        assert!(expand_rational(&s).unwrap().is_zero());
    }
}
