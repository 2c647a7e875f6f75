//! Constant terms of products of one-ratio Fourier series.
//!
//! Vertices are stacked by imaginary part, top first. With `r + 1`
//! vertices the coordinates are `t_i = p_{v_i} / p_{v_{i+1}}`, so every
//! ratio `p_a / p_b` with `a` above `b` is a product of consecutive
//! `t`'s. Expansions live in `|q| < |t_i ... t_j| < 1`: a term `x^m q^d`
//! with `m < 0` always has `d >= -m`.
//!
//! Products are truncated to `q^n`. A partial product term `t^e q^d` can
//! still reach the constant term below `q^n` only if
//! `d + max_i e_i < n` and `e` vanishes on every coordinate no remaining
//! factor touches; everything else is dropped.


use crate::scalar::Scalar;

/// `sum_m c_m(q) x^m` with `x = t_lo ... t_{hi-1}`; `lo == hi` is a
/// constant (only `m = 0` allowed).
#[derive(Clone, Debug)]
pub struct Factor<T> {
    pub lo: usize,
    pub hi: usize,
    /// `(m, d, c)` triples.
    pub terms: Vec<(i32, usize, T)>,
}

impl<T: Scalar> Factor<T> {
    pub fn constant(coeffs: Vec<T>) -> Self {
        let terms = coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(d, c)| (0, d, c)).collect();
        Factor { lo: 0, hi: 0, terms }
    }

    pub fn scale(mut self, c: &T) -> Self {
        for t in &mut self.terms {
            t.2 = t.2.clone() * c.clone();
        }
        self
    }
}

/// Dense box of coefficients over `t`-exponents in `(-n, n)` and `q^0..q^{n-1}`.
#[derive(Clone, Debug)]
pub struct Product<T> {
    r: usize,
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Product<T> {
    /// `n >= 1`.
    pub fn one(r: usize, n: usize) -> Self {
        let side = 2 * n - 1;
        let mut p = Product { r, n, data: vec![T::zero(); side.pow(r as u32) * n] };
        let i = p.index(&vec![0; r], 0);
        p.data[i] = T::one();
        p
    }

    fn index(&self, e: &[i32], d: usize) -> usize {
        let side = 2 * self.n as i32 - 1;
        let off = self.n as i32 - 1;
        let mut i = 0usize;
        for x in e {
            i = i * side as usize + (x + off) as usize;
        }
        i * self.n + d
    }

    fn decode(&self, mut i: usize, e: &mut [i32]) -> usize {
        let side = 2 * self.n - 1;
        let off = self.n as i32 - 1;
        let d = i % self.n;
        i /= self.n;
        for x in e.iter_mut().rev() {
            *x = (i % side) as i32 - off;
            i /= side;
        }
        d
    }

    fn admissible(&self, e: &[i32], d: usize, covered: &[bool]) -> bool {
        let mut top = 0;
        for (x, c) in e.iter().zip(covered) {
            if *x != 0 && !c {
                return false;
            }
            top = top.max(*x);
        }
        d + (top as usize) < self.n && e.iter().all(|x| (x.unsigned_abs() as usize) < self.n)
    }

    /// Multiplies by `f`; `covered[i]` says whether a later factor touches `t_i`.
    pub fn mul(&self, f: &Factor<T>, covered: &[bool]) -> Self {
        let mut out = Product { r: self.r, n: self.n, data: vec![T::zero(); self.data.len()] };
        let mut e = vec![0i32; self.r];
        for (i, c) in self.data.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.decode(i, &mut e);
            for (m, d2, c2) in &f.terms {
                let dd = d + d2;
                if dd >= self.n {
                    continue;
                }
                for x in &mut e[f.lo..f.hi] {
                    *x += m;
                }
                if self.admissible(&e, dd, covered) {
                    let j = out.index(&e, dd);
                    out.data[j] = out.data[j].clone() + c.clone() * c2.clone();
                }
                for x in &mut e[f.lo..f.hi] {
                    *x -= m;
                }
            }
        }
        out
    }

    /// The `t^0` row of `self * f`, as `q`-coefficients.
    pub fn constant_term_with(&self, f: &Factor<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.n];
        let mut e = vec![0i32; self.r];
        for (m, d2, c2) in &f.terms {
            if *d2 >= self.n || (f.lo == f.hi && *m != 0) {
                continue;
            }
            for x in &mut e[f.lo..f.hi] {
                *x = -m;
            }
            if e.iter().any(|x| x.unsigned_abs() as usize >= self.n) {
                continue;
            }
            let base = self.index(&e, 0);
            for d in 0..self.n - d2 {
                let c = &self.data[base + d];
                if !c.is_zero() {
                    out[d + d2] = out[d + d2].clone() + c.clone() * c2.clone();
                }
            }
        }
        out
    }

    /// The `t^0` row.
    pub fn constant_term(&self) -> Vec<T> {
        let base = self.index(&vec![0; self.r], 0);
        self.data[base..base + self.n].to_vec()
    }
}

/// `covered[j][i]`: whether some factor after position `j` touches `t_i`.
pub fn coverage<T>(r: usize, factors: &[Factor<T>]) -> Vec<Vec<bool>> {
    let mut out = vec![vec![false; r]; factors.len()];
    let mut acc = vec![false; r];
    for j in (0..factors.len()).rev() {
        out[j] = acc.clone();
        for x in &mut acc[factors[j].lo..factors[j].hi] {
            *x = true;
        }
    }
    out
}

/// Constant term of the product of `factors` to `q^n`.
pub fn constant_term<T: Scalar>(r: usize, n: usize, factors: &[Factor<T>]) -> Vec<T> {
    if n == 0 {
        return Vec::new();
    }
    let cov = coverage(r, factors);
    let mut p = Product::one(r, n);
    match factors.split_last() {
        None => p.constant_term(),
        Some((last, rest)) => {
            for (j, f) in rest.iter().enumerate() {
                p = p.mul(f, &cov[j]);
            }
            p.constant_term_with(last)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // x/(1-x)^2 + sum over d of (x^j + x^-j) q^d; constant term is 0 in t
    // against 1 alone, and the pair x * x^-1 pairs m with -m.
    #[test]
    fn pairs_opposite_ratios() {
        let n = 4;
        let up = Factor { lo: 0, hi: 1, terms: vec![(1, 0, 1i128), (2, 0, 1)] };
        let down = Factor { lo: 0, hi: 1, terms: vec![(-1, 1, 1i128), (-2, 2, 5)] };
        assert_eq!(constant_term(1, n, &[up.clone(), down.clone()]), vec![0, 1, 5, 0]);
        assert_eq!(constant_term(1, n, &[down, up]), vec![0, 1, 5, 0]);
    }

    #[test]
    fn uncovered_coordinates_are_pruned() {
        let f = Factor { lo: 0, hi: 2, terms: vec![(1, 0, 1i128)] };
        let g = Factor { lo: 1, hi: 2, terms: vec![(-1, 1, 1i128)] };
        // t1 t2 * t2^-1 leaves t1: nothing constant
        assert_eq!(constant_term(2, 3, &[f, g]), vec![0, 0, 0]);
    }
}
