//! Sparse multivariate truncated Laurent series.
//!
//! A series lives in one to four named variables. For every variable `v`
//! it carries a precision `N_v` (exponents `>= N_v` are unknown; `None`
//! means the series is exact in `v`) and a floor (a lower bound on all
//! exponents of `v`, including the unknown tail). A coefficient at `e` is
//! known iff `e_v < N_v` for every truncated variable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{FieldScalar, Scalar};

/// Maximum number of variables in one series.
pub const MAX_VARS: usize = 4;

/// Exponent tuple; slots beyond the series' variable count are zero.
pub type Exp = [i32; MAX_VARS];

/// Truncation order of one variable; `None` means exact.
pub type Prec = Option<i32>;

/// Variable names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    U,
    Y,
    P,
    Q,
    Qt,
    W,
    /// Auxiliary fourth root of `q`, printed as `Q`.
    QAux,
}

impl Var {
    pub const ALL: [Var; 7] = [Var::U, Var::Y, Var::P, Var::Q, Var::Qt, Var::W, Var::QAux];

    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::Y => "y",
            Var::P => "p",
            Var::Q => "q",
            Var::Qt => "qt",
            Var::W => "w",
            Var::QAux => "Q",
        }
    }

    pub fn parse(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn prec_min(a: Prec, b: Prec) -> Prec {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn prec_shift(p: Prec, s: i32) -> Prec {
    p.map(|x| x + s)
}

/// Truncated Laurent series with coefficients in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    vars: Vec<Var>,
    prec: Vec<Prec>,
    floor: Vec<i32>,
    terms: BTreeMap<Exp, T>,
}

fn pack(e: &[i32]) -> Exp {
    let mut k = [0; MAX_VARS];
    k[..e.len()].copy_from_slice(e);
    k
}

fn add_exp(a: &Exp, b: &Exp) -> Exp {
    let mut k = [0; MAX_VARS];
    for i in 0..MAX_VARS {
        k[i] = a[i] + b[i];
    }
    k
}

impl<T: Scalar> TruncatedSeries<T> {
    /// The zero series with the given shape.
    ///
    /// # Panics
    /// Panics on an empty or oversized variable list, repeated variables,
    /// or length mismatches; these are programming errors.
    pub fn zero(vars: &[Var], prec: &[Prec], floor: &[i32]) -> Self {
        assert!(!vars.is_empty() && vars.len() <= MAX_VARS, "1..=4 variables");
        assert_eq!(prec.len(), vars.len());
        assert_eq!(floor.len(), vars.len());
        for (i, v) in vars.iter().enumerate() {
            assert!(!vars[..i].contains(v), "repeated variable {v}");
        }
        TruncatedSeries {
            vars: vars.to_vec(),
            prec: prec.to_vec(),
            floor: floor.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    /// Constant series with floor zero in every variable.
    pub fn constant(vars: &[Var], prec: &[Prec], c: T) -> Self {
        let mut s = Self::zero(vars, prec, &vec![0; vars.len()]);
        let k = [0; MAX_VARS];
        if s.in_range(&k) {
            s.push(k, c);
        }
        s
    }

    pub fn one(vars: &[Var], prec: &[Prec]) -> Self {
        Self::constant(vars, prec, T::one())
    }

    /// Builds a series from explicit terms; terms beyond precision are dropped.
    pub fn from_terms<I>(vars: &[Var], prec: &[Prec], floor: &[i32], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, T)>,
    {
        let mut s = Self::zero(vars, prec, floor);
        for (e, c) in terms {
            s.add_term(&e, c)?;
        }
        Ok(s)
    }

    /// One-variable series from `(exponent, coefficient)` pairs.
    pub fn univariate<I>(var: Var, prec: Prec, floor: i32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, T)>,
    {
        let mut s = Self::zero(&[var], &[prec], &[floor]);
        for (e, c) in coeffs {
            s.add_term(&[e], c)?;
        }
        Ok(s)
    }

    /// `c * x^e`, with the floor set to `e`.
    pub fn monomial(vars: &[Var], prec: &[Prec], e: &[i32], c: T) -> Self {
        let mut s = Self::zero(vars, prec, e);
        let k = pack(e);
        if s.in_range(&k) {
            s.push(k, c);
        }
        s
    }

    fn key(&self, e: &[i32]) -> Result<Exp> {
        if e.len() != self.vars.len() {
            return Err(Error::Precondition(format!(
                "exponent tuple of length {} for {} variables",
                e.len(),
                self.vars.len()
            )));
        }
        Ok(pack(e))
    }

    /// Adds `c * x^e`. Terms beyond precision are dropped (truncation);
    /// terms below the floor are rejected.
    pub fn add_term(&mut self, e: &[i32], c: T) -> Result<()> {
        let k = self.key(e)?;
        for i in 0..self.vars.len() {
            if k[i] < self.floor[i] {
                return Err(Error::BelowFloor(format!(
                    "{}^{} below floor {}",
                    self.vars[i], k[i], self.floor[i]
                )));
            }
        }
        if self.in_range(&k) {
            self.push(k, c);
        }
        Ok(())
    }

    fn push(&mut self, k: Exp, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn in_range(&self, k: &Exp) -> bool {
        self.prec
            .iter()
            .enumerate()
            .all(|(i, p)| p.map_or(true, |p| k[i] < p))
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn precs(&self) -> &[Prec] {
        &self.prec
    }

    pub fn floors(&self) -> &[i32] {
        &self.floor
    }

    pub fn index_of(&self, v: Var) -> Result<usize> {
        self.vars
            .iter()
            .position(|&x| x == v)
            .ok_or_else(|| Error::UnknownVariable(v.name().to_string()))
    }

    pub fn prec_of(&self, v: Var) -> Result<Prec> {
        Ok(self.prec[self.index_of(v)?])
    }

    pub fn floor_of(&self, v: Var) -> Result<i32> {
        Ok(self.floor[self.index_of(v)?])
    }

    /// Stored terms in canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &T)> + '_ {
        let n = self.vars.len();
        self.terms.iter().map(move |(k, c)| (&k[..n], c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at `e` (zero if not stored). Does not check precision.
    pub fn coeff(&self, e: &[i32]) -> T {
        self.terms.get(&pack(e)).cloned().unwrap_or_else(T::zero)
    }

    /// Whether the coefficient at `e` lies within the known region.
    pub fn is_known(&self, e: &[i32]) -> bool {
        e.len() == self.vars.len() && self.in_range(&pack(e))
    }

    /// Coefficient at `e`, or `None` if it lies beyond precision.
    pub fn known_coeff(&self, e: &[i32]) -> Option<T> {
        if self.is_known(e) {
            Some(self.coeff(e))
        } else {
            None
        }
    }

    /// Smallest stored exponent of `v`.
    pub fn min_exponent(&self, v: Var) -> Result<Option<i32>> {
        let i = self.index_of(v)?;
        Ok(self.terms.keys().map(|k| k[i]).min())
    }

    /// Largest stored exponent of `v`.
    pub fn max_exponent(&self, v: Var) -> Result<Option<i32>> {
        let i = self.index_of(v)?;
        Ok(self.terms.keys().map(|k| k[i]).max())
    }

    /// Same variables, precision, floor and terms.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.vars == other.vars && self.prec == other.prec && self.floor == other.floor
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(
                fmt_vars(&self.vars),
                fmt_vars(&other.vars),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let n = self.vars.len();
        let prec: Vec<Prec> = (0..n).map(|i| prec_min(self.prec[i], other.prec[i])).collect();
        let floor: Vec<i32> = (0..n).map(|i| self.floor[i].min(other.floor[i])).collect();
        let mut r = Self::zero(&self.vars, &prec, &floor);
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            if r.in_range(k) {
                r.push(*k, c.clone());
            }
        }
        Ok(r)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut r = Self::zero(&self.vars, &self.prec, &self.floor);
        if c.is_zero() {
            return r;
        }
        for (k, v) in &self.terms {
            r.terms.insert(*k, v.clone() * c.clone());
        }
        r
    }

    /// Exact product, truncated per variable at
    /// `min(N_a + floor_b, N_b + floor_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let n = self.vars.len();
        let prec: Vec<Prec> = (0..n)
            .map(|i| {
                prec_min(
                    prec_shift(self.prec[i], other.floor[i]),
                    prec_shift(other.prec[i], self.floor[i]),
                )
            })
            .collect();
        let floor: Vec<i32> = (0..n).map(|i| self.floor[i] + other.floor[i]).collect();
        let mut r = Self::zero(&self.vars, &prec, &floor);
        let (a, b) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let bterms: Vec<(&Exp, &T)> = b.terms.iter().collect();
        let aterms: Vec<(&Exp, &T)> = a.terms.iter().collect();
        let work = aterms.len().saturating_mul(bterms.len());
        let acc = if work > 50_000 {
            let parts: Vec<HashMap<Exp, T>> = aterms
                .par_chunks(64.max(aterms.len() / (4 * rayon::current_num_threads().max(1))))
                .map(|chunk| {
                    let mut m = HashMap::new();
                    accumulate(&mut m, chunk, &bterms, &r);
                    m
                })
                .collect();
            let mut total: HashMap<Exp, T> = HashMap::new();
            for part in parts {
                for (k, c) in part {
                    merge(&mut total, k, c);
                }
            }
            total
        } else {
            let mut m = HashMap::new();
            accumulate(&mut m, &aterms, &bterms, &r);
            m
        };
        for (k, c) in acc {
            if !c.is_zero() {
                r.terms.insert(k, c);
            }
        }
        Ok(r)
    }

    /// Multiplies by `x^e`; floor and precision shift along.
    pub fn mul_monomial(&self, e: &[i32]) -> Result<Self> {
        let s = self.key(e)?;
        let n = self.vars.len();
        let prec: Vec<Prec> = (0..n).map(|i| prec_shift(self.prec[i], s[i])).collect();
        let floor: Vec<i32> = (0..n).map(|i| self.floor[i] + s[i]).collect();
        let mut r = Self::zero(&self.vars, &prec, &floor);
        for (k, c) in &self.terms {
            r.terms.insert(add_exp(k, &s), c.clone());
        }
        Ok(r)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut result = Self::one(&self.vars, &vec![None; self.vars.len()]);
        let mut base = self.clone();
        let mut e = n;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { result.mul(&base)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        if first {
            // x^0: exact one, keep the input's precision for consistency
            return Ok(Self::one(&self.vars, &self.prec));
        }
        Ok(result)
    }

    /// Lowers the precision of `v` to at most `p`.
    pub fn truncate(&self, v: Var, p: i32) -> Result<Self> {
        let i = self.index_of(v)?;
        let mut r = self.clone();
        r.prec[i] = prec_min(r.prec[i], Some(p));
        let pr = r.prec.clone();
        r.terms.retain(|k, _| {
            pr.iter()
                .enumerate()
                .all(|(j, p)| p.map_or(true, |p| k[j] < p))
        });
        Ok(r)
    }

    /// Replaces the floor of `v` by `f`. Only valid when the caller knows
    /// the full (untruncated) series has no exponent of `v` below `f`;
    /// stored terms are checked.
    pub fn assert_floor(&self, v: Var, f: i32) -> Result<Self> {
        let i = self.index_of(v)?;
        if let Some(k) = self.terms.keys().find(|k| k[i] < f) {
            return Err(Error::BelowFloor(format!(
                "stored {}^{} below asserted floor {f}",
                v, k[i]
            )));
        }
        let mut r = self.clone();
        r.floor[i] = f;
        Ok(r)
    }

    /// Applies `v d/dv`.
    pub fn q_derive(&self, v: Var) -> Result<Self> {
        let i = self.index_of(v)?;
        let mut r = Self::zero(&self.vars, &self.prec, &self.floor);
        for (k, c) in &self.terms {
            let f = T::from_i64(k[i] as i64).expect("exponent fits");
            r.push(*k, c.clone() * f);
        }
        Ok(r)
    }

    /// Substitutes `v -> v^n`.
    pub fn substitute_power(&self, v: Var, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("power must be >= 1".into()));
        }
        let i = self.index_of(v)?;
        let n = n as i32;
        let mut r = self.clone();
        r.prec[i] = self.prec[i].map(|p| p * n);
        r.floor[i] = self.floor[i] * n;
        r.terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut k2 = *k;
                k2[i] *= n;
                (k2, c.clone())
            })
            .collect();
        Ok(r)
    }

    /// Inverse of [`substitute_power`](Self::substitute_power) followed by
    /// a rename: every exponent of `v` must be divisible by `n`; the result
    /// is read in variable `to`.
    pub fn contract_power(&self, v: Var, n: u32, to: Var) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("power must be >= 1".into()));
        }
        let i = self.index_of(v)?;
        let n = n as i32;
        if let Some(k) = self.terms.keys().find(|k| k[i].rem_euclid(n) != 0) {
            return Err(Error::Internal(format!(
                "exponent {}^{} is not a multiple of {n}",
                v, k[i]
            )));
        }
        let mut r = self.clone();
        r.prec[i] = self.prec[i].map(|p| div_ceil(p, n));
        r.floor[i] = div_ceil(self.floor[i], n);
        r.terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut k2 = *k;
                k2[i] /= n;
                (k2, c.clone())
            })
            .collect();
        if v != to {
            r = r.rename(v, to)?;
        }
        Ok(r)
    }

    /// Renames variable `from` to `to`.
    pub fn rename(&self, from: Var, to: Var) -> Result<Self> {
        let i = self.index_of(from)?;
        if from != to && self.vars.contains(&to) {
            return Err(Error::Precondition(format!("variable {to} already present")));
        }
        let mut r = self.clone();
        r.vars[i] = to;
        Ok(r)
    }

    /// The coefficient series of `v^e`, as a series in the other variables.
    pub fn slice(&self, v: Var, e: i32) -> Result<Self> {
        if self.vars.len() < 2 {
            return Err(Error::Precondition("slice needs at least two variables".into()));
        }
        let i = self.index_of(v)?;
        if let Some(p) = self.prec[i] {
            if e >= p {
                return Err(Error::InsufficientPrecision(format!(
                    "{v}^{e} is beyond precision {p}"
                )));
            }
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&j| j != i).collect();
        let vars: Vec<Var> = keep.iter().map(|&j| self.vars[j]).collect();
        let prec: Vec<Prec> = keep.iter().map(|&j| self.prec[j]).collect();
        let floor: Vec<i32> = keep.iter().map(|&j| self.floor[j]).collect();
        let mut r = Self::zero(&vars, &prec, &floor);
        for (k, c) in &self.terms {
            if k[i] == e {
                let k2: Vec<i32> = keep.iter().map(|&j| k[j]).collect();
                r.terms.insert(pack(&k2), c.clone());
            }
        }
        Ok(r)
    }

    /// Coefficient of a one-variable series at exponent `e`, checking precision.
    pub fn coeff_checked(&self, e: &[i32]) -> Result<T> {
        self.known_coeff(e).ok_or_else(|| {
            Error::InsufficientPrecision(format!("coefficient {e:?} beyond precision"))
        })
    }

    /// Re-expresses the series in a larger variable list; new variables
    /// are exact with floor zero.
    pub fn embed(&self, vars: &[Var]) -> Result<Self> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnknownVariable(v.name().into()))
            })
            .collect::<Result<_>>()?;
        let mut prec = vec![None; vars.len()];
        let mut floor = vec![0; vars.len()];
        for (i, &j) in map.iter().enumerate() {
            prec[j] = self.prec[i];
            floor[j] = self.floor[i];
        }
        let mut r = Self::zero(vars, &prec, &floor);
        for (k, c) in &self.terms {
            let mut k2 = [0; MAX_VARS];
            for (i, &j) in map.iter().enumerate() {
                k2[j] = k[i];
            }
            r.terms.insert(k2, c.clone());
        }
        Ok(r)
    }

    /// Exchanges the roles of two variables (exponents and metadata).
    pub fn swap_vars(&self, a: Var, b: Var) -> Result<Self> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        let mut r = self.clone();
        r.prec.swap(i, j);
        r.floor.swap(i, j);
        r.terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut k2 = *k;
                k2.swap(i, j);
                (k2, c.clone())
            })
            .collect();
        Ok(r)
    }

    /// Raises the floor of an exact variable to its smallest stored exponent.
    pub fn tighten_floor(&self, v: Var) -> Result<Self> {
        let i = self.index_of(v)?;
        if self.prec[i].is_some() {
            return Err(Error::Precondition(format!("{v} must be exact to tighten its floor")));
        }
        let mut r = self.clone();
        if let Some(m) = self.terms.keys().map(|k| k[i]).min() {
            r.floor[i] = m;
        }
        Ok(r)
    }

    /// Substitutes `v -> 1/v`; `v` must be exact.
    pub fn reflect(&self, v: Var) -> Result<Self> {
        let i = self.index_of(v)?;
        if self.prec[i].is_some() {
            return Err(Error::Precondition(format!("{v} must be exact to reflect")));
        }
        let mut r = self.clone();
        r.floor[i] = -self.terms.keys().map(|k| k[i]).max().unwrap_or(0);
        r.terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut k2 = *k;
                k2[i] = -k2[i];
                (k2, c.clone())
            })
            .collect();
        Ok(r)
    }

    /// Substitutes `v -> -v`.
    pub fn negate_var(&self, v: Var) -> Result<Self> {
        let i = self.index_of(v)?;
        let mut r = self.clone();
        for (k, c) in r.terms.iter_mut() {
            if k[i].rem_euclid(2) == 1 {
                *c = -c.clone();
            }
        }
        Ok(r)
    }

    /// Declares variable `v` exact. The caller must have verified that no
    /// unknown coefficient can be nonzero (e.g. by a support bound).
    pub fn promote_exact(&self, v: Var) -> Result<Self> {
        let i = self.index_of(v)?;
        let mut r = self.clone();
        r.prec[i] = None;
        Ok(r)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        let mut r = TruncatedSeries::<U>::zero(&self.vars, &self.prec, &self.floor);
        for (k, c) in &self.terms {
            let u = f(c);
            if !u.is_zero() {
                r.terms.insert(*k, u);
            }
        }
        r
    }

    /// Fallible coefficient map.
    pub fn try_map_coeffs<U: Scalar>(
        &self,
        f: impl Fn(&T) -> Option<U>,
    ) -> Result<TruncatedSeries<U>> {
        let mut r = TruncatedSeries::<U>::zero(&self.vars, &self.prec, &self.floor);
        for (k, c) in &self.terms {
            let u = f(c).ok_or_else(|| {
                Error::Precondition(format!("coefficient {c:?} not representable"))
            })?;
            if !u.is_zero() {
                r.terms.insert(*k, u);
            }
        }
        Ok(r)
    }

    /// Transforms each term; `f` returns the new exponent tuple (in the
    /// same variables) and coefficient factor. Metadata is supplied.
    pub fn map_terms(
        &self,
        prec: &[Prec],
        floor: &[i32],
        f: impl Fn(&[i32], &T) -> Option<(Vec<i32>, T)>,
    ) -> Result<Self> {
        let mut r = Self::zero(&self.vars, prec, floor);
        let n = self.vars.len();
        for (k, c) in &self.terms {
            if let Some((e, c2)) = f(&k[..n], c) {
                r.add_term(&e, c2)?;
            }
        }
        Ok(r)
    }

    /// Equality of the known coefficients on the common known region.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.first_disagreement(other)?.is_none())
    }

    /// First exponent (canonical order) on the common known region where
    /// the two series differ.
    pub fn first_disagreement(&self, other: &Self) -> Result<Option<Vec<i32>>> {
        self.check_vars(other)?;
        let n = self.vars.len();
        let prec: Vec<Prec> = (0..n).map(|i| prec_min(self.prec[i], other.prec[i])).collect();
        let inside = |k: &Exp| prec.iter().enumerate().all(|(i, p)| p.map_or(true, |p| k[i] < p));
        let mut keys: Vec<&Exp> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            if inside(k) && self.terms.get(k) != other.terms.get(k) {
                return Ok(Some(k[..n].to_vec()));
            }
        }
        Ok(None)
    }

    fn finite_mask(&self) -> Vec<bool> {
        self.prec.iter().map(|p| p.is_some()).collect()
    }

    fn degree(&self, k: &Exp) -> i32 {
        self.prec
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_some())
            .map(|(i, _)| k[i])
            .sum()
    }

    /// Largest total degree (over truncated variables) inside precision,
    /// assuming nonnegative floors.
    fn max_degree(&self) -> i32 {
        self.prec.iter().filter_map(|p| p.map(|p| (p - 1).max(0))).sum()
    }

    fn components(&self) -> Vec<Vec<(Exp, T)>> {
        let d = self.max_degree().max(0) as usize;
        let mut comps: Vec<Vec<(Exp, T)>> = vec![Vec::new(); d + 1];
        for (k, c) in &self.terms {
            let g = self.degree(k);
            if g >= 0 && (g as usize) <= d {
                comps[g as usize].push((*k, c.clone()));
            }
        }
        comps
    }

    fn mul_comp(&self, a: &[(Exp, T)], b: &[(Exp, T)], out: &mut HashMap<Exp, T>) {
        for (ka, ca) in a {
            for (kb, cb) in b {
                let k = add_exp(ka, kb);
                if self.in_range(&k) {
                    merge(out, k, ca.clone() * cb.clone());
                }
            }
        }
    }

    fn check_nonneg_finite_floors(&self, what: &str) -> Result<()> {
        for (i, p) in self.prec.iter().enumerate() {
            if p.is_some() && self.floor[i] < 0 {
                return Err(Error::Precondition(format!(
                    "{what}: negative floor in truncated variable {}",
                    self.vars[i]
                )));
            }
        }
        Ok(())
    }
}

fn div_ceil(a: i32, b: i32) -> i32 {
    -((-a).div_euclid(b))
}

fn fmt_vars(v: &[Var]) -> String {
    let names: Vec<&str> = v.iter().map(|x| x.name()).collect();
    format!("[{}]", names.join(","))
}

fn merge<T: Scalar>(m: &mut HashMap<Exp, T>, k: Exp, c: T) {
    match m.get_mut(&k) {
        Some(x) => *x = x.clone() + c,
        None => {
            m.insert(k, c);
        }
    }
}

fn accumulate<T: Scalar>(
    m: &mut HashMap<Exp, T>,
    a: &[(&Exp, &T)],
    b: &[(&Exp, &T)],
    shape: &TruncatedSeries<T>,
) {
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = add_exp(ka, kb);
            if shape.in_range(&k) {
                merge(m, k, (*ca).clone() * (*cb).clone());
            }
        }
    }
}

impl<T: FieldScalar> TruncatedSeries<T> {
    /// Multiplicative inverse.
    ///
    /// The terms whose truncated-variable exponents equal the declared
    /// floor must consist of a single monomial `c x^e0`; then
    /// `a = c x^e0 (1 + r)` and `1/(1 + r)` is built degree by degree.
    pub fn invert(&self) -> Result<Self> {
        let n = self.vars.len();
        let finite = self.finite_mask();
        let leads: Vec<(&Exp, &T)> = self
            .terms
            .iter()
            .filter(|(k, _)| (0..n).all(|i| !finite[i] || k[i] == self.floor[i]))
            .collect();
        if leads.len() != 1 {
            return Err(Error::NotInvertible);
        }
        let (lk, lc) = (*leads[0].0, leads[0].1.clone());
        let lc_inv = T::one() / lc;
        // r = a / (c x^e0) - 1, with nonnegative truncated exponents
        let rprec: Vec<Prec> = (0..n).map(|i| prec_shift(self.prec[i], -lk[i])).collect();
        let mut rfloor = vec![0; n];
        for i in 0..n {
            if !finite[i] {
                rfloor[i] = self
                    .terms
                    .keys()
                    .map(|k| k[i] - lk[i])
                    .min()
                    .unwrap_or(0)
                    .min(0);
            }
        }
        let mut r = Self::zero(&self.vars, &rprec, &rfloor);
        for (k, c) in &self.terms {
            if *k == lk {
                continue;
            }
            let mut k2 = *k;
            for i in 0..n {
                k2[i] -= lk[i];
            }
            if r.in_range(&k2) {
                r.push(k2, c.clone() * lc_inv.clone());
            }
        }
        // b' = 1/(1+r): B_0 = 1, B_m = -sum_{j>=1} r_j B_{m-j}
        let rc = r.components();
        let dmax = rc.len();
        let mut bc: Vec<Vec<(Exp, T)>> = Vec::with_capacity(dmax);
        if r.in_range(&[0; MAX_VARS]) {
            bc.push(vec![([0; MAX_VARS], T::one())]);
        } else {
            bc.push(Vec::new());
        }
        for m in 1..dmax {
            let mut acc: HashMap<Exp, T> = HashMap::new();
            for j in 1..=m {
                if rc[j].is_empty() || bc[m - j].is_empty() {
                    continue;
                }
                r.mul_comp(&rc[j], &bc[m - j], &mut acc);
            }
            let mut comp: Vec<(Exp, T)> = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, -c))
                .collect();
            comp.sort_by(|a, b| a.0.cmp(&b.0));
            bc.push(comp);
        }
        let prec: Vec<Prec> = (0..n).map(|i| prec_shift(rprec[i], -lk[i])).collect();
        let mut floor: Vec<i32> = (0..n).map(|i| -lk[i]).collect();
        let mut out: BTreeMap<Exp, T> = BTreeMap::new();
        for comp in bc {
            for (k, c) in comp {
                let mut k2 = k;
                for i in 0..n {
                    k2[i] -= lk[i];
                }
                out.insert(k2, c * lc_inv.clone());
            }
        }
        for i in 0..n {
            if !finite[i] {
                floor[i] = out.keys().map(|k| k[i]).min().unwrap_or(floor[i]).min(floor[i]);
            }
        }
        let mut b = Self::zero(&self.vars, &prec, &floor);
        for (k, c) in out {
            if b.in_range(&k) {
                b.terms.insert(k, c);
            }
        }
        Ok(b)
    }

    /// Formal exponential. Every term must have positive total degree in
    /// the truncated variables, and floors there must be nonnegative.
    pub fn exp(&self) -> Result<Self> {
        self.check_nonneg_finite_floors("exp")?;
        if let Some((k, _)) = self.terms.iter().find(|(k, _)| self.degree(k) <= 0) {
            return Err(Error::Precondition(format!(
                "exp: term {:?} has no positive degree",
                &k[..self.vars.len()]
            )));
        }
        let ac = self.components();
        let dmax = ac.len();
        let mut ec: Vec<Vec<(Exp, T)>> = Vec::with_capacity(dmax);
        ec.push(if self.in_range(&[0; MAX_VARS]) {
            vec![([0; MAX_VARS], T::one())]
        } else {
            Vec::new()
        });
        for m in 1..dmax {
            let mut acc: HashMap<Exp, T> = HashMap::new();
            for j in 1..=m {
                if ac[j].is_empty() || ec[m - j].is_empty() {
                    continue;
                }
                let jf = T::from_i64(j as i64).unwrap();
                let scaled: Vec<(Exp, T)> =
                    ac[j].iter().map(|(k, c)| (*k, c.clone() * jf.clone())).collect();
                self.mul_comp(&scaled, &ec[m - j], &mut acc);
            }
            let inv = T::one() / T::from_i64(m as i64).unwrap();
            let mut comp: Vec<(Exp, T)> = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c * inv.clone()))
                .collect();
            comp.sort_by(|a, b| a.0.cmp(&b.0));
            ec.push(comp);
        }
        let n = self.vars.len();
        let mut floor = vec![0; n];
        for i in 0..n {
            if self.prec[i].is_none() {
                floor[i] = ec
                    .iter()
                    .flatten()
                    .map(|(k, _)| k[i])
                    .min()
                    .unwrap_or(0)
                    .min(0);
            }
        }
        let mut r = Self::zero(&self.vars, &self.prec, &floor);
        for (k, c) in ec.into_iter().flatten() {
            r.terms.insert(k, c);
        }
        Ok(r)
    }

    /// Formal logarithm of a series `1 + (positive degree terms)`.
    pub fn log(&self) -> Result<Self> {
        self.check_nonneg_finite_floors("log")?;
        let ac = self.components();
        let zero = [0; MAX_VARS];
        let ok0 = ac
            .first()
            .map(|c0| c0.len() == 1 && c0[0].0 == zero && c0[0].1.is_one())
            .unwrap_or(false);
        if !ok0 {
            return Err(Error::Precondition("log: degree-zero part must be exactly 1".into()));
        }
        if self.terms.keys().any(|k| self.degree(k) < 0) {
            return Err(Error::Precondition("log: negative degree term".into()));
        }
        let dmax = ac.len();
        let mut lc: Vec<Vec<(Exp, T)>> = vec![Vec::new(); dmax];
        for m in 1..dmax {
            let mut acc: HashMap<Exp, T> = HashMap::new();
            for (k, c) in &ac[m] {
                merge(&mut acc, *k, c.clone());
            }
            let inv = T::one() / T::from_i64(m as i64).unwrap();
            for j in 1..m {
                if ac[j].is_empty() || lc[m - j].is_empty() {
                    continue;
                }
                let f = -(T::from_i64((m - j) as i64).unwrap() * inv.clone());
                let scaled: Vec<(Exp, T)> =
                    lc[m - j].iter().map(|(k, c)| (*k, c.clone() * f.clone())).collect();
                self.mul_comp(&ac[j], &scaled, &mut acc);
            }
            let mut comp: Vec<(Exp, T)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            comp.sort_by(|a, b| a.0.cmp(&b.0));
            lc[m] = comp;
        }
        let n = self.vars.len();
        let mut floor = vec![0; n];
        for i in 0..n {
            if self.prec[i].is_none() {
                floor[i] = lc
                    .iter()
                    .flatten()
                    .map(|(k, _)| k[i])
                    .min()
                    .unwrap_or(0)
                    .min(0);
            }
        }
        let mut r = Self::zero(&self.vars, &self.prec, &floor);
        for (k, c) in lc.into_iter().flatten() {
            r.terms.insert(k, c);
        }
        Ok(r)
    }

    /// Division by a nonzero scalar.
    pub fn div_scalar(&self, c: &T) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Precondition("division by zero".into()));
        }
        Ok(self.scale(&(T::one() / c.clone())))
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.vars.len();
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for i in 0..n {
                if k[i] != 0 {
                    write!(f, "*{}^{}", self.vars[i], k[i])?;
                }
            }
        }
        let p: Vec<String> = (0..n)
            .filter_map(|i| self.prec[i].map(|p| format!("{}^{}", self.vars[i], p)))
            .collect();
        if !p.is_empty() {
            write!(f, " + O({})", p.join(", "))?;
        }
        Ok(())
    }
}

impl TruncatedSeries<crate::scalar::Rational> {
    /// JSON form: `{"vars", "prec", "floor", "terms": [{"e", "c"}]}` with
    /// coefficients as `"num/den"` strings and `null` for exact precision.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let mut prec = Map::new();
        let mut floor = Map::new();
        for (i, v) in self.vars.iter().enumerate() {
            prec.insert(v.name().into(), self.prec[i].map_or(Value::Null, |p| json!(p)));
            floor.insert(v.name().into(), json!(self.floor[i]));
        }
        let terms: Vec<Value> = self
            .terms()
            .map(|(e, c)| json!({"e": e, "c": crate::scalar::fmt_rational(c)}))
            .collect();
        let vars: Vec<&str> = self.vars.iter().map(|v| v.name()).collect();
        json!({"vars": vars, "prec": prec, "floor": floor, "terms": terms})
    }

    /// Inverse of [`to_json`](Self::to_json). Missing floors default to the
    /// smallest stored exponent (or zero).
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let perr = |m: &str| Error::Parse(m.to_string());
        let vars: Vec<Var> = v["vars"]
            .as_array()
            .ok_or_else(|| perr("missing \"vars\""))?
            .iter()
            .map(|x| {
                x.as_str()
                    .and_then(Var::parse)
                    .ok_or_else(|| perr(&format!("bad variable {x}")))
            })
            .collect::<Result<_>>()?;
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(perr("expected 1 to 4 variables"));
        }
        for (i, x) in vars.iter().enumerate() {
            if vars[..i].contains(x) {
                return Err(perr("repeated variable"));
            }
        }
        let mut raw: Vec<(Vec<i32>, crate::scalar::Rational)> = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| perr("missing \"terms\""))? {
            let e: Vec<i32> = t["e"]
                .as_array()
                .ok_or_else(|| perr("term without \"e\""))?
                .iter()
                .map(|x| x.as_i64().map(|x| x as i32).ok_or_else(|| perr("bad exponent")))
                .collect::<Result<_>>()?;
            if e.len() != vars.len() {
                return Err(perr("exponent length mismatch"));
            }
            let c = match &t["c"] {
                serde_json::Value::String(s) => crate::scalar::parse_rational(s),
                serde_json::Value::Number(n) => n.as_i64().map(crate::scalar::int),
                _ => None,
            }
            .ok_or_else(|| perr("bad coefficient"))?;
            raw.push((e, c));
        }
        let mut prec = Vec::new();
        let mut floor = Vec::new();
        for (i, x) in vars.iter().enumerate() {
            let p = &v["prec"][x.name()];
            prec.push(if p.is_null() {
                None
            } else {
                Some(p.as_i64().ok_or_else(|| perr("bad precision"))? as i32)
            });
            let f = &v["floor"][x.name()];
            floor.push(if f.is_null() {
                raw.iter().map(|(e, _)| e[i]).min().unwrap_or(0).min(0)
            } else {
                f.as_i64().ok_or_else(|| perr("bad floor"))? as i32
            });
        }
        Self::from_terms(&vars, &prec, &floor, raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    type S = TruncatedSeries<Rational>;

    fn q(prec: i32, c: &[(i32, i64)]) -> S {
        S::univariate(Var::Q, Some(prec), 0, c.iter().map(|&(e, x)| (e, int(x)))).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = q(3, &[(0, 1), (1, 1)]);
        let b = q(3, &[(0, 1), (1, -1)]);
        assert_eq!(a.mul(&b).unwrap(), q(3, &[(0, 1), (2, -1)]));
    }

    #[test]
    fn shift_by_negative_power() {
        let a = q(3, &[(1, 1), (2, 24)]);
        let m = S::univariate(Var::Q, None, -1, [(-1, int(1))]).unwrap();
        let p = a.mul(&m).unwrap();
        assert_eq!(p.prec_of(Var::Q).unwrap(), Some(2));
        assert_eq!(p.terms().count(), 2);
        assert_eq!(p.coeff(&[0]), int(1));
        assert_eq!(p.coeff(&[1]), int(24));
    }

    #[test]
    fn geometric_series() {
        let a = q(3, &[(0, 1), (1, -1)]);
        assert_eq!(a.invert().unwrap(), q(3, &[(0, 1), (1, 1), (2, 1)]));
    }

    #[test]
    fn invert_needs_leading_unit() {
        let z = S::zero(&[Var::Q], &[Some(4)], &[0]);
        assert_eq!(z.invert().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn exp_and_log() {
        let e = q(3, &[(1, 1)]).exp().unwrap();
        assert_eq!(e.coeff(&[2]), rat(1, 2));
        let l = q(4, &[(0, 1), (1, -1)]).log().unwrap();
        assert_eq!(l.coeff(&[1]), int(-1));
        assert_eq!(l.coeff(&[2]), rat(-1, 2));
        assert_eq!(l.coeff(&[3]), rat(-1, 3));
        assert_eq!(l.exp().unwrap(), q(4, &[(0, 1), (1, -1)]));
    }

    #[test]
    fn derivation_and_substitution() {
        let a = S::univariate(Var::Q, Some(5), -1, [(-1, int(1)), (2, int(5))]).unwrap();
        let d = a.q_derive(Var::Q).unwrap();
        assert_eq!(d.coeff(&[-1]), int(-1));
        assert_eq!(d.coeff(&[2]), int(10));
        let s = q(2, &[(0, 1), (1, 1)]).substitute_power(Var::Q, 4).unwrap();
        assert_eq!(s.coeff(&[4]), int(1));
        assert_eq!(s.prec_of(Var::Q).unwrap(), Some(8));
        let back = s.contract_power(Var::Q, 4, Var::Q).unwrap();
        assert_eq!(back, q(2, &[(0, 1), (1, 1)]));
    }

    #[test]
    fn multivariate_inverse_with_laurent_variable() {
        // (p - 2 + 1/p) * (1 + q) inverted in q, exact Laurent in p fails:
        // the q^0 part has three monomials
        let vars = [Var::P, Var::Q];
        let a = S::from_terms(
            &vars,
            &[None, Some(3)],
            &[-1, 0],
            [(vec![1, 0], int(1)), (vec![-1, 0], int(1)), (vec![0, 1], int(1))],
        )
        .unwrap();
        assert_eq!(a.invert().unwrap_err(), Error::NotInvertible);
        // 1 + p q: fine
        let b = S::from_terms(&vars, &[None, Some(3)], &[0, 0], [(vec![0, 0], int(1)), (vec![1, 1], int(1))])
            .unwrap();
        let bi = b.invert().unwrap();
        assert_eq!(bi.coeff(&[2, 2]), int(1));
        assert_eq!(b.mul(&bi).unwrap(), S::one(&vars, &[None, Some(3)]));
    }

    #[test]
    fn json_round_trip() {
        let a = S::from_terms(
            &[Var::Y, Var::Q],
            &[None, Some(2)],
            &[-1, 0],
            [(vec![-1, 0], rat(-3, 7)), (vec![2, 1], int(5))],
        )
        .unwrap();
        let j = a.to_json();
        assert_eq!(j["terms"][0]["c"], "-3/7");
        assert_eq!(S::from_json(&j).unwrap(), a);
    }
}
