//! Sparse polynomials in a fixed number of formal generators.
//!
//! Used for QMod (3 generators) and the weak Jacobi ring (4 generators).
//! Grading is supplied by the caller as a weight vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

/// Polynomial in `N` commuting generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<const N: usize, T> {
    terms: BTreeMap<[u32; N], T>,
}

impl<const N: usize, T: Scalar> Default for Poly<N, T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize, T: Scalar> Poly<N, T> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn monomial(e: [u32; N], c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// The `i`-th generator.
    pub fn generator(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(e, T::one())
    }

    pub fn add_term(&mut self, e: [u32; N], c: T) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&e) {
            Some(x) => x + c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32; N]) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut r = Self::zero();
        for (e, x) in &self.terms {
            r.add_term(*e, x.clone() * c.clone());
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut e = [0; N];
                for i in 0..N {
                    e[i] = a[i] + b[i];
                }
                r.add_term(e, x.clone() * y.clone());
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Formal partial derivative in generator `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                r.add_term(f, c.clone() * T::from_u32(e[i]).unwrap());
            }
        }
        r
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[u32; N]) -> bool) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Weight of a monomial.
    pub fn monomial_weight(e: &[u32; N], weights: &[i32; N]) -> i32 {
        (0..N).map(|i| e[i] as i32 * weights[i]).sum()
    }

    /// The common weight of all monomials, if homogeneous and nonzero.
    pub fn weight(&self, weights: &[i32; N]) -> Option<i32> {
        let mut it = self.terms.keys().map(|e| Self::monomial_weight(e, weights));
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    pub fn is_homogeneous(&self, weights: &[i32; N], w: i32) -> bool {
        self.terms.keys().all(|e| Self::monomial_weight(e, weights) == w)
    }

    /// Substitutes series for the generators.
    pub fn evaluate(&self, gens: &[TruncatedSeries<T>; N]) -> Result<TruncatedSeries<T>> {
        let base = &gens[0];
        let mut acc = TruncatedSeries::zero(base.vars(), base.precs(), &vec![0; base.nvars()]);
        let mut first = true;
        let mut cache: HashMap<(usize, u32), TruncatedSeries<T>> = HashMap::new();
        for (e, c) in &self.terms {
            let mut m: Option<TruncatedSeries<T>> = None;
            for i in 0..N {
                if e[i] == 0 {
                    continue;
                }
                let pw = power_cached(&mut cache, &gens[i], i, e[i])?;
                m = Some(match m {
                    None => pw,
                    Some(x) => x.mul(&pw)?,
                });
            }
            let term = match m {
                None => TruncatedSeries::constant(base.vars(), base.precs(), c.clone()),
                Some(x) => x.scale(c),
            };
            acc = if first { term } else { acc.add(&term)? };
            first = false;
        }
        Ok(acc)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<N, U> {
        let mut r = Poly::<N, U>::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, f(c));
        }
        r
    }
}

fn power_cached<T: Scalar>(
    cache: &mut HashMap<(usize, u32), TruncatedSeries<T>>,
    g: &TruncatedSeries<T>,
    i: usize,
    n: u32,
) -> Result<TruncatedSeries<T>> {
    if let Some(s) = cache.get(&(i, n)) {
        return Ok(s.clone());
    }
    let s = if n == 1 {
        g.clone()
    } else {
        power_cached(cache, g, i, n - 1)?.mul(g)?
    };
    cache.insert((i, n), s.clone());
    Ok(s)
}

/// Display with generator names.
pub struct Named<'a, const N: usize, T> {
    pub poly: &'a Poly<N, T>,
    pub names: [&'a str; N],
}

impl<const N: usize, T: Scalar + fmt::Display> fmt::Display for Named<'_, N, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.poly.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for i in 0..N {
                match e[i] {
                    0 => {}
                    1 => write!(f, "*{}", self.names[i])?,
                    k => write!(f, "*{}^{}", self.names[i], k)?,
                }
            }
        }
        Ok(())
    }
}
