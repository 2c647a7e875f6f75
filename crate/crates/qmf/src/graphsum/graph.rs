//! Graph sums over balanced weightings and their elliptic-function form.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::fourier::{self, Factor};
use crate::elliptic::{c_coeff, wp_fourier};
use crate::error::{Error, Result};
use crate::qmod::{self, QModPoly};
use crate::report::ConstraintReport;
use crate::scalar::{int, Rational};
use crate::series::Var;
use crate::{qmod::bernoulli, Series};

/// A connected graph on vertices `1..=n` with exponents on half-edges and a
/// total vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    pub n: usize,
    /// Endpoints of each edge, 1-based.
    pub edges: Vec<(usize, usize)>,
    /// Exponents at the first and second listed endpoint of each edge.
    pub k: Vec<(u32, u32)>,
    /// Vertices from earliest to latest.
    pub sigma: Vec<usize>,
}

impl WeightedGraph {
    /// All exponents zero, identity order.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = vec![(0, 0); edges.len()];
        let g = WeightedGraph { n, edges, k, sigma: (1..=n).collect() };
        g.validate()?;
        Ok(g)
    }

    pub fn with_k(mut self, k: Vec<(u32, u32)>) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sigma(mut self, sigma: Vec<usize>) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if self.n == 0 {
            return bad("a graph needs a vertex".into());
        }
        if self.k.len() != self.edges.len() {
            return bad(format!("{} exponent pairs for {} edges", self.k.len(), self.edges.len()));
        }
        if let Some(e) = self.edges.iter().find(|(a, b)| *a < 1 || *b < 1 || *a > self.n || *b > self.n) {
            return bad(format!("edge {e:?} leaves the vertex set 1..={}", self.n));
        }
        let mut s = self.sigma.clone();
        s.sort_unstable();
        if s != (1..=self.n).collect::<Vec<_>>() {
            return bad(format!("{:?} is not an ordering of 1..={}", self.sigma, self.n));
        }
        if !self.is_connected() {
            return bad("graph is not connected".into());
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        while let Some(v) = queue.pop_front() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        seen[1..].iter().all(|s| *s)
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|(a, b)| a == b)
    }

    fn require_loopless(&self) -> Result<()> {
        if self.has_loops() {
            return Err(Error::Precondition("graph sums need a loopless graph".into()));
        }
        Ok(())
    }

    /// Position of each vertex in `sigma` (index 0 unused).
    fn rank(&self) -> Vec<usize> {
        let mut r = vec![0; self.n + 1];
        for (i, v) in self.sigma.iter().enumerate() {
            r[*v] = i;
        }
        r
    }

    /// Each edge as `(earlier, later, k_earlier, k_later)`.
    fn oriented(&self) -> Vec<(usize, usize, u32, u32)> {
        let r = self.rank();
        self.edges
            .iter()
            .zip(&self.k)
            .map(|(&(a, b), &(ka, kb))| if r[a] < r[b] { (a, b, ka, kb) } else { (b, a, kb, ka) })
            .collect()
    }

    /// `(s, sign)` per edge: `s = k + k'` and the sign `(-1)^{k'}` from the later end.
    fn profile(&self) -> (Vec<u32>, i128) {
        let o = self.oriented();
        let s = o.iter().map(|e| e.2 + e.3).collect();
        let odd = o.iter().map(|e| e.3).sum::<u32>() % 2 == 1;
        (s, if odd { -1 } else { 1 })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let err = |m: &str| Error::Parse(format!("graph JSON: {m}"));
        let n = v["n"].as_u64().ok_or_else(|| err("missing n"))? as usize;
        let mut edges = Vec::new();
        for e in v["edges"].as_array().ok_or_else(|| err("missing edges"))? {
            let p = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| err("edges are pairs"))?;
            let x = |i: usize| p[i].as_u64().map(|x| x as usize).ok_or_else(|| err("vertex ids are integers"));
            edges.push((x(0)?, x(1)?));
        }
        let mut k = vec![(0, 0); edges.len()];
        if let Some(obj) = v.get("k").and_then(Value::as_object) {
            for (key, val) in obj {
                let i: usize = key.parse().map_err(|_| err("k keys are edge indices"))?;
                let p = val.as_array().filter(|p| p.len() == 2).ok_or_else(|| err("k values are pairs"))?;
                let x = |j: usize| p[j].as_u64().map(|x| x as u32).ok_or_else(|| err("k entries are integers"));
                *k.get_mut(i).ok_or_else(|| err("k index out of range"))? = (x(0)?, x(1)?);
            }
        }
        let sigma = match v.get("sigma").and_then(Value::as_array) {
            Some(s) => s.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>()
                .ok_or_else(|| err("sigma lists vertex ids"))?,
            None => (1..=n).collect(),
        };
        let g = WeightedGraph { n, edges, k, sigma };
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> Value {
        let k: serde_json::Map<String, Value> = self
            .k
            .iter()
            .enumerate()
            .filter(|(_, k)| **k != (0, 0))
            .map(|(i, k)| (i.to_string(), json!([k.0, k.1])))
            .collect();
        json!({"n": self.n, "edges": self.edges.iter().map(|e| [e.0, e.1]).collect::<Vec<_>>(), "k": k, "sigma": self.sigma})
    }
}

/// All connected loopless multigraphs on `1..=n`, `n <= max_vertices`, with
/// at most `max_edges` edges; zero exponents, identity order.
pub fn connected_multigraphs(max_vertices: usize, max_edges: usize) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> =
            (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        let mut mult = vec![0usize; pairs.len()];
        fn rec(
            i: usize,
            left: usize,
            n: usize,
            pairs: &[(usize, usize)],
            mult: &mut Vec<usize>,
            out: &mut Vec<WeightedGraph>,
        ) {
            if i == pairs.len() {
                let edges: Vec<_> =
                    pairs.iter().zip(mult.iter()).flat_map(|(p, m)| std::iter::repeat(*p).take(*m)).collect();
                if let Ok(g) = WeightedGraph::new(n, edges) {
                    out.push(g);
                }
                return;
            }
            for m in 0..=left {
                mult[i] = m;
                rec(i + 1, left - m, n, pairs, mult, out);
            }
            mult[i] = 0;
        }
        rec(0, max_edges, n, &pairs, &mut mult, &mut out);
    }
    out
}

/// Balanced weightings whose minimal `q`-order is at most `qbound`. Each
/// weighting lists, per edge, the weight on the half-edge at the
/// `sigma`-earlier endpoint. Sorted lexicographically.
pub fn balanced_enumerate(g: &WeightedGraph, qbound: usize) -> Result<Vec<Vec<i64>>> {
    g.require_loopless()?;
    let o = g.oriented();
    let ne = o.len();
    // spanning tree from vertex 1; tree edges come last, deepest first,
    // so each is the final unassigned edge at its child and is forced
    let mut depth = vec![usize::MAX; g.n + 1];
    let mut parent_edge = vec![usize::MAX; g.n + 1];
    depth[1] = 0;
    let mut queue = VecDeque::from([1]);
    while let Some(v) = queue.pop_front() {
        for (i, &(a, b, _, _)) in o.iter().enumerate() {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && depth[y] == usize::MAX {
                    depth[y] = depth[v] + 1;
                    parent_edge[y] = i;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut forced_at = vec![None; ne];
    let mut tree: Vec<usize> = (2..=g.n).collect();
    tree.sort_by_key(|v| std::cmp::Reverse(depth[*v]));
    for v in &tree {
        forced_at[parent_edge[*v]] = Some(*v);
    }
    let mut order: Vec<usize> = (0..ne).filter(|i| forced_at[*i].is_none()).collect();
    order.extend(tree.iter().map(|v| parent_edge[*v]));

    struct Ctx<'a> {
        o: &'a [(usize, usize, u32, u32)],
        order: Vec<usize>,
        forced_at: Vec<Option<usize>>,
        qbound: i64,
        out: Vec<Vec<i64>>,
    }
    fn rec(c: &mut Ctx, step: usize, a: &mut Vec<i64>, bal: &mut Vec<i64>, cost: i64) {
        if step == c.order.len() {
            if bal.iter().all(|b| *b == 0) {
                c.out.push(a.clone());
            }
            return;
        }
        let e = c.order[step];
        let (u, v, _, _) = c.o[e];
        let choices: Vec<i64> = match c.forced_at[e] {
            Some(x) => vec![if x == u { -bal[x] } else { bal[x] }],
            None => (-c.qbound..=c.qbound).collect(),
        };
        for x in choices {
            let extra = if x < 0 { -x } else { 0 };
            if x == 0 || cost + extra > c.qbound {
                continue;
            }
            a[e] = x;
            bal[u] += x;
            bal[v] -= x;
            rec(c, step + 1, a, bal, cost + extra);
            bal[u] -= x;
            bal[v] += x;
        }
        a[e] = 0;
    }
    let mut ctx = Ctx { o: &o, order, forced_at, qbound: qbound as i64, out: Vec::new() };
    rec(&mut ctx, 0, &mut vec![0; ne], &mut vec![0; g.n + 1], 0);
    ctx.out.sort();
    Ok(ctx.out)
}

/// `1/(1 - q^a)` to `q^{n-1}`, with `-q^{-a} - q^{-2a} - ...` for `a < 0`.
fn geometric(a: i64, n: usize) -> Vec<i128> {
    let mut v = vec![0i128; n];
    let step = a.unsigned_abs() as usize;
    let (start, c) = if a > 0 { (0, 1) } else { (step, -1) };
    let mut j = start;
    while j < n {
        v[j] = c;
        j += step;
    }
    v
}

fn convolve(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len();
    let mut out = vec![0i128; n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
        for (j, y) in b[..n - i].iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn to_series(c: &[i128]) -> Series {
    let n = c.len() as i32;
    Series::univariate(Var::Q, Some(n), 0, c.iter().enumerate().map(|(d, x)| (d as i32, Rational::from_integer((*x).into()))))
        .expect("nonnegative exponents")
}

/// `F(Gamma, k, sigma)` through `q^order` by summing over balanced weightings.
pub fn graph_sum_direct(g: &WeightedGraph, order: usize) -> Result<Series> {
    let n = order + 1;
    let (s, sign) = g.profile();
    let mut acc = vec![0i128; n];
    for w in balanced_enumerate(g, order)? {
        let mut term = vec![0i128; n];
        term[0] = sign;
        for (a, se) in w.iter().zip(&s) {
            term = convolve(&term, &geometric(*a, n));
            let c = (*a as i128).pow(1 + se);
            term.iter_mut().for_each(|x| *x *= c);
        }
        for (x, y) in acc.iter_mut().zip(term) {
            *x += y;
        }
    }
    Ok(to_series(&acc))
}

/// `wp^{(s)}(z) + [s = 0] 2 C2` as a one-ratio factor through `q^{n-1}`.
fn edge_factor(s: u32, lo: usize, hi: usize, n: usize) -> Factor<i128> {
    let ni = n as i32;
    let mut f = wp_fourier(s, ni, ni);
    if s == 0 {
        let c2 = qmod::eisenstein_series(2, ni).expect("weight 2").scale(&int(2));
        for (e, c) in c2.terms() {
            f.add_term(&[0, e[0]], c.clone()).expect("inside window");
        }
    }
    let terms = f
        .terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| {
            assert!(c.is_integer(), "edge factor coefficient {c} is not integral");
            (e[0], e[1] as usize, c.to_integer().to_i128().expect("fits i128"))
        })
        .collect();
    Factor { lo, hi, terms }
}

fn factors_for(g: &WeightedGraph, s: &[u32], n: usize) -> Vec<Factor<i128>> {
    let r = g.rank();
    g.oriented()
        .iter()
        .zip(s)
        .map(|((a, b, _, _), se)| edge_factor(*se, r[*a], r[*b], n))
        .collect()
}

/// The same series as the `p^0` coefficient of the product of
/// `d^k d^k' (wp + 2 C2)` over edges, expanded in the region fixed by `sigma`.
pub fn graph_sum_analytic(g: &WeightedGraph, order: usize) -> Result<Series> {
    g.require_loopless()?;
    let n = order + 1;
    let (s, sign) = g.profile();
    let ct = fourier::constant_term(g.n - 1, n, &factors_for(g, &s, n));
    Ok(to_series(&ct.into_iter().map(|x| sign * x).collect::<Vec<_>>()))
}

/// Both pipelines for every exponent profile `s` (per edge `k + k'` in
/// `0..=smax`), as `s -> q`-coefficients before the sign `(-1)^{sum k'}`.
pub type ProfileTable = BTreeMap<Vec<u32>, Vec<i128>>;

fn profiles(ne: usize, smax: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..ne {
        out = out.into_iter().flat_map(|p| (0..=smax).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Direct pipeline over all profiles, sharing work across weightings with
/// a common prefix.
pub fn direct_profiles(g: &WeightedGraph, smax: u32, order: usize) -> Result<ProfileTable> {
    let n = order + 1;
    let ne = g.edges.len();
    let ws: Vec<(Vec<i64>, Vec<i128>)> = balanced_enumerate(g, order)?
        .into_iter()
        .map(|w| {
            let mut t = vec![0i128; n];
            t[0] = 1;
            for a in &w {
                t = convolve(&t, &geometric(*a, n));
            }
            (w, t)
        })
        .collect();
    let base = smax as usize + 1;
    // tensor over the profile suffix, q innermost
    fn contract(ws: &[(Vec<i64>, Vec<i128>)], depth: usize, ne: usize, base: usize, n: usize) -> Vec<i128> {
        let len = base.pow((ne - depth) as u32) * n;
        let mut out = vec![0i128; len];
        if depth == ne {
            for (_, t) in ws {
                for (x, y) in out.iter_mut().zip(t) {
                    *x += y;
                }
            }
            return out;
        }
        let stride = len / base;
        let mut i = 0;
        while i < ws.len() {
            let a = ws[i].0[depth];
            let mut j = i;
            while j < ws.len() && ws[j].0[depth] == a {
                j += 1;
            }
            let child = contract(&ws[i..j], depth + 1, ne, base, n);
            let mut c = a as i128;
            for s in 0..base {
                for (x, y) in out[s * stride..(s + 1) * stride].iter_mut().zip(&child) {
                    *x += c * y;
                }
                c *= a as i128;
            }
            i = j;
        }
        out
    }
    let t = contract(&ws, 0, ne, base, n);
    Ok(profiles(ne, smax)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, t[i * n..(i + 1) * n].to_vec()))
        .collect())
}

/// Analytic pipeline over all profiles, sharing partial products.
pub fn analytic_profiles(g: &WeightedGraph, smax: u32, order: usize) -> Result<ProfileTable> {
    g.require_loopless()?;
    let n = order + 1;
    let r = g.rank();
    let o = g.oriented();
    let ne = o.len();
    let nt = g.n - 1;
    let table: Vec<Vec<Factor<i128>>> = o
        .iter()
        .map(|(a, b, _, _)| (0..=smax).map(|s| edge_factor(s, r[*a], r[*b], n)).collect())
        .collect();
    let cov = fourier::coverage(nt, &table.iter().map(|f| f[0].clone()).collect::<Vec<_>>());
    let mut out = ProfileTable::new();
    if ne == 0 {
        out.insert(vec![], fourier::Product::one(nt, n).constant_term());
        return Ok(out);
    }
    fn walk(
        p: &fourier::Product<i128>,
        depth: usize,
        prefix: &mut Vec<u32>,
        table: &[Vec<Factor<i128>>],
        cov: &[Vec<bool>],
        out: &mut ProfileTable,
    ) {
        let last = depth + 1 == table.len();
        for (s, f) in table[depth].iter().enumerate() {
            prefix.push(s as u32);
            if last {
                out.insert(prefix.clone(), p.constant_term_with(f));
            } else {
                walk(&p.mul(f, &cov[depth]), depth + 1, prefix, table, cov, out);
            }
            prefix.pop();
        }
    }
    walk(&fourier::Product::one(nt, n), 0, &mut Vec::new(), &table, &cov, &mut out);
    Ok(out)
}

/// Compares both pipelines on every connected loopless multigraph with at
/// most `max_vertices` vertices and `max_edges` edges, all half-edge
/// exponents in `0..=kmax`, through `q^order`.
pub fn dual_pipeline_check(max_vertices: usize, max_edges: usize, kmax: u32, order: usize) -> ConstraintReport {
    let name = "graph-sum dual pipeline";
    let window = format!("vertices<={max_vertices}, edges<={max_edges}, k<={kmax}, q^{order}");
    let graphs = connected_multigraphs(max_vertices, max_edges);
    let results: Vec<Result<(usize, u64)>> = graphs
        .par_iter()
        .map(|g| {
            let d = direct_profiles(g, 2 * kmax, order)?;
            let a = analytic_profiles(g, 2 * kmax, order)?;
            for (p, x) in &d {
                if a.get(p) != Some(x) {
                    return Err(Error::IdentityFailure(format!(
                        "graph {:?}, profile {p:?}: direct {x:?} vs analytic {:?}",
                        g.edges,
                        a.get(p)
                    )));
                }
            }
            let kcount = ((kmax as u64) + 1).pow(2 * g.edges.len() as u32);
            Ok((d.len(), kcount))
        })
        .collect();
    let mut profiles_checked = 0;
    let mut assignments = 0;
    for r in results {
        match r {
            Ok((p, k)) => {
                profiles_checked += p;
                assignments += k;
            }
            Err(e) => return ConstraintReport::from_error(name, window, &e),
        }
    }
    ConstraintReport::pass(name, window, profiles_checked).with_details(vec![
        format!("{} graphs", graphs.len()),
        format!("{assignments} exponent assignments covered through their profiles"),
    ])
}

/// `L_{k1,k2} = 2 (-1)^{k1} sum_d d^{k1+k2+1} q^d / (1 - q^d)` through
/// `q^order`, with its closed quasimodular form. Odd `k1 + k2` gives zero.
pub fn loop_factor(k1: u32, k2: u32, order: usize) -> Result<(Series, QModPoly)> {
    let n = order as i32 + 1;
    if (k1 + k2) % 2 == 1 {
        return Ok((Series::zero(&[Var::Q], &[Some(n)], &[0]), QModPoly::zero()));
    }
    let e = k1 + k2 + 1;
    let sign = if k1 % 2 == 0 { 2 } else { -2 };
    let coeffs = (1..n).map(|m| (m, Rational::from_integer(qmod::sigma(e, m as u64) * sign)));
    let series = Series::univariate(Var::Q, Some(n), 0, coeffs)?;
    // sum d^{2m+1} q^d/(1-q^d) = B_{2m+2}/(4(m+1)) + ((2m+2)!/2) C_{2m+2}
    let m = (e - 1) / 2;
    let w = 2 * m + 2;
    let fact: i64 = (1..=w as i64).product();
    let poly = QModPoly::constant(bernoulli(w as usize) / int(4 * (m as i64 + 1)))
        .add(&c_coeff(m + 1).scale(&int(fact / 2)))
        .scale(&int(sign));
    let check = qmod::evaluate(&poly, n)?;
    if let Some(e) = series.first_disagreement(&check)? {
        return Err(Error::Internal(format!("loop factor closed form differs at q^{}", e[0])));
    }
    Ok((series, poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn cycle2() -> WeightedGraph {
        WeightedGraph::new(2, vec![(1, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn single_edge_has_no_weightings() {
        let g = WeightedGraph::new(2, vec![(1, 2)]).unwrap();
        assert!(balanced_enumerate(&g, 6).unwrap().is_empty());
        assert!(graph_sum_direct(&g, 6).unwrap().is_zero());
        assert!(graph_sum_analytic(&g, 6).unwrap().is_zero());
    }

    #[test]
    fn double_edge_weightings() {
        let w = balanced_enumerate(&cycle2(), 3).unwrap();
        let want: Vec<Vec<i64>> = vec![
            vec![-3, 3], vec![-2, 2], vec![-1, 1], vec![1, -1], vec![2, -2], vec![3, -3],
        ];
        assert_eq!(w, want);
    }

    #[test]
    fn enumeration_matches_box_search() {
        let tri = WeightedGraph::new(3, vec![(1, 2), (2, 3), (1, 3), (1, 3)]).unwrap();
        for g in [cycle2(), tri, WeightedGraph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()] {
            for qb in 0..4usize {
                let o = g.oriented();
                let b = 2 * qb as i64 + 2;
                let mut brute = Vec::new();
                let mut a = vec![-b; o.len()];
                'outer: loop {
                    let cost: i64 = a.iter().filter(|x| **x < 0).map(|x| -x).sum();
                    let mut bal = vec![0i64; g.n + 1];
                    for (x, (u, v, _, _)) in a.iter().zip(&o) {
                        bal[*u] += x;
                        bal[*v] -= x;
                    }
                    if a.iter().all(|x| *x != 0) && cost <= qb as i64 && bal.iter().all(|x| *x == 0) {
                        brute.push(a.clone());
                    }
                    for x in a.iter_mut() {
                        *x += 1;
                        if *x <= b {
                            continue 'outer;
                        }
                        *x = -b;
                    }
                    break;
                }
                brute.sort();
                assert_eq!(balanced_enumerate(&g, qb).unwrap(), brute, "{:?} qbound {qb}", g.edges);
            }
        }
    }

    #[test]
    fn two_cycle_is_derivative_of_c2() {
        let s = graph_sum_direct(&cycle2(), 8).unwrap();
        let dc2 = qmod::eisenstein_series(2, 9).unwrap().q_derive(Var::Q).unwrap().scale(&int(2));
        assert_eq!(s, dc2);
        assert_eq!(graph_sum_analytic(&cycle2(), 8).unwrap(), s);
        let p = qmod::recognize(&s, 4).unwrap();
        assert_eq!(qmod::weight(&p), Some(4));
    }

    #[test]
    fn triangle_and_path_agree() {
        let tri = WeightedGraph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(graph_sum_direct(&tri, 8).unwrap(), graph_sum_analytic(&tri, 8).unwrap());
        let path = WeightedGraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        assert!(graph_sum_analytic(&path, 8).unwrap().is_zero());
        let g = tri.with_k(vec![(1, 0), (2, 1), (0, 2)]).unwrap().with_sigma(vec![2, 3, 1]).unwrap();
        assert_eq!(graph_sum_direct(&g, 7).unwrap(), graph_sum_analytic(&g, 7).unwrap());
    }

    #[test]
    fn profile_tables_agree_on_small_graphs() {
        let r = dual_pipeline_check(3, 3, 1, 5);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn loop_factors() {
        let (_, l00) = loop_factor(0, 0, 10).unwrap();
        assert_eq!(l00, qmod::c2().scale(&int(2)).add(&QModPoly::constant(rat(1, 12))));
        let (_, l11) = loop_factor(1, 1, 10).unwrap();
        // -2 (B4/8 + 12 C4) with B4 = -1/30
        assert_eq!(l11, qmod::c4().scale(&int(-24)).add(&QModPoly::constant(rat(1, 120))));
        let (s, p) = loop_factor(0, 1, 10).unwrap();
        assert!(s.is_zero() && p.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let v = serde_json::json!({"n": 3, "edges": [[1, 2], [2, 3], [1, 3]], "k": {"1": [2, 0]}, "sigma": [1, 2, 3]});
        let g = WeightedGraph::from_json(&v).unwrap();
        assert_eq!(g.k[1], (2, 0));
        assert_eq!(WeightedGraph::from_json(&g.to_json()).unwrap(), g);
    }
}
