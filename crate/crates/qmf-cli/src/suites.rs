//! Registered check suites.

use clap::ValueEnum;
use qmf::constraints::{self, check_property1, check_property2, check_property3, property2_window};
use qmf::graphsum::{self, CtMode, MEElement};
use qmf::igusa;
use qmf::poly::Poly;
use qmf::qmod::{self, QModPoly};
use qmf::report::ConstraintReport;
use qmf::{int, rat, Error, Var};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Borcherds,
    IgusaCross,
    Symmetry,
    Kkv,
    YauZaslow,
    Properties,
    Kernel,
    ConstantTerms,
    Graphsum,
    EulerMaclaurin,
    Worpitzky,
    ResidueRelations,
    Commutator,
    K3Genus1,
    Toda,
    All,
}

/// Bounds `(G, H, D, N)`; `None` means the suite default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bounds {
    pub g: Option<u32>,
    pub h: Option<u32>,
    pub d: Option<u32>,
    pub n: Option<i32>,
}

impl Suite {
    pub fn every() -> Vec<Suite> {
        Suite::value_variants().iter().copied().filter(|s| *s != Suite::All).collect()
    }

    /// Default `(G, H, D, N)`.
    fn defaults(self) -> (u32, u32, u32, i32) {
        match self {
            Suite::Borcherds => (0, 0, 0, 8),
            Suite::IgusaCross => (0, 4, 4, 10),
            Suite::Symmetry => (0, 4, 4, 14),
            Suite::Kkv => (6, 5, 0, 0),
            Suite::YauZaslow => (0, 10, 0, 0),
            Suite::Properties => (4, 2, 3, 14),
            Suite::Kernel => (2, 2, 2, 0),
            Suite::ConstantTerms => (0, 0, 0, 10),
            // G vertices, H edges, D half-edge exponent, N q-order
            Suite::Graphsum => (4, 5, 2, 8),
            // D total degree, G variables, N range
            Suite::EulerMaclaurin => (4, 0, 5, 12),
            Suite::Worpitzky => (5, 0, 0, 10),
            Suite::ResidueRelations => (0, 0, 0, 0),
            Suite::Commutator => (0, 0, 0, 12),
            Suite::K3Genus1 => (0, 0, 0, 20),
            Suite::Toda => (5, 0, 0, 0),
            Suite::All => (0, 0, 0, 0),
        }
    }

    pub fn run(self, b: &Bounds) -> Vec<ConstraintReport> {
        if self == Suite::All {
            let parts: Vec<Vec<ConstraintReport>> =
                Suite::every().par_iter().map(|s| s.run(&Bounds::default())).collect();
            return parts.into_iter().flatten().collect();
        }
        let (g0, h0, d0, n0) = self.defaults();
        let (g, h, d, n) = (b.g.unwrap_or(g0), b.h.unwrap_or(h0), b.d.unwrap_or(d0), b.n.unwrap_or(n0));
        let (hi, di, ni) = (h as i32, d as i32, n);
        let nu = n.max(0) as usize;
        match self {
            Suite::Borcherds => vec![borcherds(ni)],
            Suite::IgusaCross => vec![ConstraintReport::run(
                "chi10 product vs Hecke",
                format!("H={h}, D={d}, |r|<={n}"),
                || igusa::chi10_cross_check(hi, di, ni),
            )],
            Suite::Symmetry => vec![ConstraintReport::run(
                "symmetries of Z",
                format!("H={h}, D={d}, y-prec {n}"),
                || igusa::symmetry_check(hi, di, ni),
            )],
            Suite::Kkv => vec![ConstraintReport::run("KKV specialization", format!("G={g}, H={h}"), || {
                igusa::kkv_check(g, h)
            })],
            Suite::YauZaslow => {
                vec![ConstraintReport::run("Yau-Zaslow", format!("H={h}"), || igusa::yau_zaslow_check(h))]
            }
            Suite::Properties => properties(g, h, d, ni),
            Suite::Kernel => kernel(g, h, d),
            Suite::ConstantTerms => constant_terms(nu),
            Suite::Graphsum => graph_sums(g as usize, h as usize, d, nu),
            Suite::EulerMaclaurin => vec![graphsum::euler_maclaurin_suite(d, g as usize, nu as i64)],
            Suite::Worpitzky => (1..=g as usize).map(|m| graphsum::worpitzky_check(m, nu as i64)).collect(),
            Suite::ResidueRelations => vec![graphsum::residue_relations_check(&graphsum::residue_relation_samples())],
            Suite::Commutator => vec![commutator(ni)],
            Suite::K3Genus1 => vec![ConstraintReport::run("genus-1 K3 evaluations", format!("q^{n}"), || {
                igusa::k3_genus1_check(ni)
            })],
            Suite::Toda => vec![toda(g)],
            Suite::All => unreachable!(),
        }
    }
}

fn borcherds(n: i32) -> ConstraintReport {
    let want = [(-1, 2), (0, 20), (3, -128), (4, 216), (7, -1026), (8, 1616)];
    ConstraintReport::run("Borcherds exponents", format!("n<={n}"), || {
        let t = igusa::borcherds_exponents(n)?;
        let mut count = 0;
        for (k, c) in want.into_iter().filter(|(k, _)| *k <= n) {
            let got = t.get(k)?;
            if got != int(c) {
                return Err(Error::IdentityFailure(format!("c({k}) = {got}, expected {c}")));
            }
            count += 1;
        }
        Ok(count)
    })
}

fn properties(g: u32, h: u32, d: u32, n: i32) -> Vec<ConstraintReport> {
    let window = format!("G={g}, D={d}, q-prec {n}");
    let z = match igusa::z_partition_u(g as i32, n, d as i32) {
        Ok(z) => z,
        Err(e) => return vec![ConstraintReport::from_error("partition function", window, &e)],
    };
    let mut out = vec![check_property1(&z)];
    for h in 0..=h {
        match property2_window(h) {
            Ok(w) => out.push(check_property2(&w, h)),
            Err(e) => out.push(ConstraintReport::from_error("property 2", format!("h={h}"), &e)),
        }
    }
    out.push(check_property3(&z, g, d));
    out
}

fn kernel(g: u32, h: u32, d: u32) -> Vec<ConstraintReport> {
    let window = format!("G={g}, H={h}, D={d}");
    [(true, 0), (false, 1)]
        .into_iter()
        .map(|(fix, want)| {
            let name = if fix { "uniqueness kernel, c(0,0,0) = 0" } else { "uniqueness kernel, c(0,0,0) free" };
            ConstraintReport::run(name, window.clone(), || {
                let k = constraints::uniqueness_kernel(g, h, d, fix)?;
                if k.aux_only != 0 {
                    return Err(Error::InsufficientPrecision(format!("{} auxiliary directions", k.aux_only)));
                }
                if k.dim != want {
                    return Err(Error::IdentityFailure(format!("dimension {}, expected {want}", k.dim)));
                }
                Ok(k.equations)
            })
        })
        .collect()
}

fn constant_terms(order: usize) -> Vec<ConstraintReport> {
    let wp = MEElement::wp(0, 1, 2);
    let first = ConstraintReport::run("constant term of wp", format!("q^{order}"), || {
        let want = qmod::c2().scale(&int(-2));
        let s = graphsum::const_term_single(&wp, order)?;
        let m = graphsum::const_term_multi(&wp, &CtMode::Averaged, order)?;
        if s.poly != want || m.poly != want {
            return Err(Error::IdentityFailure(format!("[wp] = {}", qmod::show(&s.poly))));
        }
        let (lhs, rhs, _) = graphsum::anomaly_sides(&wp, order)?;
        let two = QModPoly::constant(int(-2));
        if lhs != two || rhs != two {
            return Err(Error::IdentityFailure(format!("anomaly {} vs {}", qmod::show(&lhs), qmod::show(&rhs))));
        }
        Ok(order + 1)
    });
    let mut out = vec![first];
    out.extend(
        graphsum::anomaly_samples()
            .par_iter()
            .filter(|f| **f != wp)
            .map(|f| graphsum::anomaly_residue_check(f, order))
            .collect::<Vec<_>>(),
    );
    out
}

fn graph_sums(vertices: usize, edges: usize, kmax: u32, order: usize) -> Vec<ConstraintReport> {
    let dual = graphsum::dual_pipeline_check(vertices, edges, kmax, order);
    let cycle = ConstraintReport::run("2-cycle is 2 q d/dq C2", format!("q^{order}"), || {
        let g = graphsum::WeightedGraph::new(2, vec![(1, 2), (1, 2)])?;
        let s = graphsum::graph_sum_direct(&g, order)?;
        let want = qmod::eisenstein_series(2, order as i32 + 1)?.q_derive(Var::Q)?.scale(&int(2));
        if s != want || graphsum::graph_sum_analytic(&g, order)? != want {
            return Err(Error::IdentityFailure("2-cycle sum".into()));
        }
        qmod::recognize(&s, 4)?;
        Ok(order + 1)
    });
    vec![dual, cycle]
}

fn commutator(kmax: i32) -> ConstraintReport {
    ConstraintReport::run("commutator relation", format!("k<={kmax}"), || {
        let mut count = 0;
        for k in (0..=kmax).step_by(2) {
            let n = (qmod::dim(k + 2) + qmod::SURPLUS) as i32 + 4;
            for m in qmod::monomials(k) {
                let d = qmod::commutator_defect(&Poly::monomial(m, int(1)), k, n)?;
                if !d.is_zero() {
                    return Err(Error::IdentityFailure(format!("defect {} at {m:?}", qmod::show(&d))));
                }
                count += 1;
            }
        }
        Ok(count)
    })
}

fn toda(gmax: u32) -> ConstraintReport {
    let mut details = Vec::new();
    let r = ConstraintReport::run("Toda F_g", format!("g=2..{gmax}"), || {
        for g in 2..=gmax {
            details.push(format!("F_{g} = {}", igusa::toda_fg(g)?.show()));
        }
        let want = igusa::SymbolicQMod { ex: QModPoly::constant(rat(-1, 240)), eb: QModPoly::zero() };
        if gmax >= 2 && igusa::toda_fg(2)?.ddc2() != want {
            return Err(Error::IdentityFailure("d/dC2 F_2 != -e(X)/240".into()));
        }
        Ok(gmax.saturating_sub(1) as usize)
    });
    r.with_details(details)
}
