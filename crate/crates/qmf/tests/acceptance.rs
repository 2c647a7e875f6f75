//! Acceptance suite: one line per criterion, exit status nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qmf::constraints::{check_property1, check_property2, check_property3, property2_window, uniqueness_kernel};
use qmf::graphsum::{
    anomaly_residue_check, anomaly_samples, anomaly_sides, const_term_multi, const_term_single, dual_pipeline_check,
    euler_maclaurin_suite, graph_sum_analytic, graph_sum_direct, residue_relation_samples, residue_relations_check,
    worpitzky_check, CtMode, MEElement, WeightedGraph,
};
use qmf::igusa::{
    borcherds_exponents, chi10_cross_check, k3_genus1_check, kkv_check, symmetry_check, toda_fg, yau_zaslow_check,
    z_partition_u, SymbolicQMod,
};
use qmf::poly::Poly;
use qmf::qmod::{self, QModPoly};
use qmf::report::ConstraintReport;
use qmf::scalar::{int, rat};
use qmf::series::Var;

type Outcome = Result<String, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn report(r: ConstraintReport) -> Outcome {
    if r.passed() {
        Ok(r.to_string())
    } else {
        Err(r.to_string())
    }
}

fn borcherds() -> Outcome {
    let t = borcherds_exponents(8).map_err(fail)?;
    let want = [(-1, 2), (0, 20), (3, -128), (4, 216), (7, -1026), (8, 1616)];
    for (n, c) in want {
        let got = t.get(n).map_err(fail)?;
        if got != int(c) {
            return Err(format!("c({n}) = {got}, expected {c}"));
        }
    }
    Ok("c(-1), c(0), c(3), c(4), c(7), c(8) = 2, 20, -128, 216, -1026, 1616".into())
}

fn chi10() -> Outcome {
    let n = chi10_cross_check(4, 4, 10).map_err(fail)?;
    Ok(format!("product and Hecke forms agree on {n} coefficients (q, qt <= 4, |r| <= 10)"))
}

fn symmetry() -> Outcome {
    let n = symmetry_check(4, 4, 14).map_err(fail)?;
    Ok(format!("q <-> qt and y <-> 1/y exact on {n} coefficients"))
}

fn kkv() -> Outcome {
    let n = kkv_check(6, 5).map_err(fail)?;
    Ok(format!("N(g,h,0) matches the product for g <= 6, h <= 5 ({n} values)"))
}

fn yau_zaslow() -> Outcome {
    let n = yau_zaslow_check(10).map_err(fail)?;
    Ok(format!("N(0,h,0) = [1/Delta]_(q^(h-1)) for h <= 10 ({n} values), N(0,0,0) = 1"))
}

fn properties() -> Outcome {
    let z = z_partition_u(4, 14, 3).map_err(fail)?;
    if z.prec_of(Var::Q).map_err(fail)? != Some(14) {
        return Err("u-form lost q-precision".into());
    }
    let mut lines = vec![report(check_property1(&z))?];
    for h in 0..=2 {
        let w = property2_window(h).map_err(fail)?;
        lines.push(report(check_property2(&w, h))?);
    }
    lines.push(report(check_property3(&z, 4, 3))?);
    Ok(lines.join("; "))
}

fn kernel() -> Outcome {
    let fixed = uniqueness_kernel(2, 2, 2, true).map_err(fail)?;
    let free = uniqueness_kernel(2, 2, 2, false).map_err(fail)?;
    if fixed.aux_only != 0 || free.aux_only != 0 {
        return Err("window too small for auxiliary unknowns".into());
    }
    if (fixed.dim, free.dim) != (0, 1) {
        return Err(format!("dimensions {} (fixed) and {} (free), expected 0 and 1", fixed.dim, free.dim));
    }
    Ok(format!("dim 0 with c(0,0,0) = 0, dim 1 free ({} unknowns, {} equations)", free.unknowns, free.equations))
}

fn constant_terms() -> Outcome {
    let wp = MEElement::wp(0, 1, 2);
    let want = qmod::c2().scale(&int(-2));
    let single = const_term_single(&wp, 10).map_err(fail)?;
    if single.poly != want {
        return Err(format!("[wp]_(p^0) = {}", qmod::show(&single.poly)));
    }
    let avg = const_term_multi(&wp, &CtMode::Averaged, 10).map_err(fail)?;
    if avg.poly != want || avg.residue_poly != want {
        return Err(format!("averaged [wp] = {}", qmod::show(&avg.poly)));
    }
    let (lhs, rhs, _) = anomaly_sides(&wp, 10).map_err(fail)?;
    let minus_two = QModPoly::constant(int(-2));
    if lhs != minus_two || rhs != minus_two {
        return Err(format!("anomaly sides {} and {}", qmod::show(&lhs), qmod::show(&rhs)));
    }
    let mut further = 0;
    for f in anomaly_samples().iter().filter(|f| **f != wp) {
        report(anomaly_residue_check(f, 10))?;
        further += 1;
    }
    if further < 5 {
        return Err(format!("only {further} further samples"));
    }
    Ok(format!("[wp]_(p^0) = -2 C2 by both routes; anomaly -2 = -2 and {further} further samples to q^10"))
}

fn graph_sums() -> Outcome {
    let dual = report(dual_pipeline_check(4, 5, 2, 8))?;
    let cycle = WeightedGraph::new(2, vec![(1, 2), (1, 2)]).map_err(fail)?;
    let direct = graph_sum_direct(&cycle, 8).map_err(fail)?;
    let analytic = graph_sum_analytic(&cycle, 8).map_err(fail)?;
    let dc2 = qmod::eisenstein_series(2, 9).map_err(fail)?.q_derive(Var::Q).map_err(fail)?.scale(&int(2));
    if direct != dc2 || analytic != dc2 {
        return Err("2-cycle differs from 2 q d/dq C2".into());
    }
    let p = qmod::recognize(&direct, 4).map_err(fail)?;
    Ok(format!("{dual}; 2-cycle = {} in QMod_4", qmod::show(&p)))
}

fn euler_maclaurin() -> Outcome {
    let mut lines = vec![report(euler_maclaurin_suite(5, 4, 12))?];
    for m in 1..=5 {
        lines.push(report(worpitzky_check(m, 10))?);
    }
    let samples = residue_relation_samples();
    if samples.len() < 10 {
        return Err(format!("only {} residue samples", samples.len()));
    }
    lines.push(report(residue_relations_check(&samples))?);
    Ok(lines.join("; "))
}

fn commutator() -> Outcome {
    let mut count = 0;
    for k in (0..=12).step_by(2) {
        let n = (qmod::dim(k + 2) + qmod::SURPLUS) as i32 + 4;
        for m in qmod::monomials(k) {
            let f = Poly::monomial(m, int(1));
            let d = qmod::commutator_defect(&f, k, n).map_err(fail)?;
            if !d.is_zero() {
                return Err(format!("defect {} on C2^{} C4^{} C6^{}", qmod::show(&d), m[0], m[1], m[2]));
            }
            count += 1;
        }
    }
    Ok(format!("[d/dC2, q d/dq] = -2k on {count} monomials of weight <= 12"))
}

fn k3_and_toda() -> Outcome {
    let n = k3_genus1_check(20).map_err(fail)?;
    let mut shown = Vec::new();
    for g in 2..=5 {
        let f = toda_fg(g).map_err(fail)?;
        shown.push(format!("F_{g} = {}", f.show()));
    }
    let want = SymbolicQMod { ex: QModPoly::constant(rat(-1, 240)), eb: QModPoly::zero() };
    let got = toda_fg(2).map_err(fail)?.ddc2();
    if got != want {
        return Err(format!("d/dC2 F_2 = {}", got.show()));
    }
    Ok(format!("genus-1 evaluations agree on {n} coefficients; {}; d/dC2 F_2 = -e(X)/240", shown.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("borcherds exponents", borcherds),
        ("chi10 cross-validation", chi10),
        ("symmetries of Z", symmetry),
        ("KKV specialization", kkv),
        ("Yau-Zaslow", yau_zaslow),
        ("property suite", properties),
        ("uniqueness kernel", kernel),
        ("constant-term instances", constant_terms),
        ("graph-sum dual pipeline", graph_sums),
        ("Euler-Maclaurin and friends", euler_maclaurin),
        ("commutator relation", commutator),
        ("genus-1 K3 and Toda", k3_and_toda),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        match out {
            Ok(msg) => println!("PASS {:>2} {name} [{}]: {msg}", i + 1, secs(dt)),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{}]: {msg}", i + 1, secs(dt));
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
