//! Ring, derivation and exp/log laws on random truncated series.

use proptest::prelude::*;
use qmf::poly::Poly;
use qmf::qmod::{self, QModPoly};
use qmf::{int, rat, Series, TruncatedSeries, Var};

const VARS: [Var; 2] = [Var::Q, Var::Qt];
const PREC: [Option<i32>; 2] = [Some(5), Some(4)];

fn series(floor: [i32; 2], terms: Vec<((i32, i32), (i64, i64))>) -> Series {
    Series::from_terms(
        &VARS,
        &PREC,
        &floor,
        terms.into_iter().map(|((a, b), (n, d))| (vec![a, b], rat(n, d))),
    )
    .unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<((i32, i32), (i64, i64))>> {
    prop::collection::vec(((0..5, 0..4), (-9i64..10, 1i64..5)), 0..8)
}

fn laurent() -> impl Strategy<Value = Series> {
    (-1i32..1, coeffs()).prop_map(|(f, t)| series([f, 0], t.into_iter().map(|((a, b), c)| ((a + f, b), c)).collect()))
}

/// Positive total degree, nonnegative floors.
fn small() -> impl Strategy<Value = Series> {
    coeffs().prop_map(|t| series([0, 0], t.into_iter().filter(|((a, b), _)| a + b > 0).collect()))
}

fn qmod_poly() -> impl Strategy<Value = QModPoly> {
    prop::collection::vec(((0u32..3, 0u32..2, 0u32..2), (-5i64..6, 1i64..4)), 0..4).prop_map(|t| {
        t.into_iter().fold(QModPoly::zero(), |acc, ((a, b, c), (n, d))| acc.add(&Poly::monomial([a, b, c], rat(n, d))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(f in laurent(), g in laurent(), h in laurent()) {
        let fg = f.mul(&g).unwrap();
        prop_assert!(fg.agrees_with(&g.mul(&f).unwrap()).unwrap());
        let l = fg.mul(&h).unwrap();
        let r = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&r).unwrap());
        let l = f.mul(&g.add(&h).unwrap()).unwrap();
        let r = fg.add(&f.mul(&h).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&r).unwrap());
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn q_derivative_is_a_derivation(f in laurent(), g in laurent()) {
        for v in VARS {
            let l = f.mul(&g).unwrap().q_derive(v).unwrap();
            let r = f.q_derive(v).unwrap().mul(&g).unwrap().add(&f.mul(&g.q_derive(v).unwrap()).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r).unwrap());
        }
    }

    #[test]
    fn inverse(f in small(), c in 1i64..6) {
        let u = f.add(&Series::constant(&VARS, &PREC, rat(c, 1))).unwrap();
        let one = u.mul(&u.invert().unwrap()).unwrap();
        prop_assert!(one.agrees_with(&Series::one(&VARS, &PREC)).unwrap());
    }

    #[test]
    fn exp_log(f in small(), g in small()) {
        prop_assert!(f.exp().unwrap().log().unwrap().agrees_with(&f).unwrap());
        let efg = f.add(&g).unwrap().exp().unwrap();
        prop_assert!(efg.agrees_with(&f.exp().unwrap().mul(&g.exp().unwrap()).unwrap()).unwrap());
        let one_plus = f.add(&Series::one(&VARS, &PREC)).unwrap();
        prop_assert!(one_plus.log().unwrap().exp().unwrap().agrees_with(&one_plus).unwrap());
    }

    #[test]
    fn ddc2_is_a_derivation(p in qmod_poly(), r in qmod_poly()) {
        let l = qmod::ddc2(&p.mul(&r));
        let rr = qmod::ddc2(&p).mul(&r).add(&p.mul(&qmod::ddc2(&r)));
        prop_assert_eq!(l, rr);
    }

    #[test]
    fn evaluation_is_multiplicative(p in qmod_poly(), r in qmod_poly()) {
        let n = 8;
        let l = qmod::evaluate(&p.mul(&r), n).unwrap();
        let rr = qmod::evaluate(&p, n).unwrap().mul(&qmod::evaluate(&r, n).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&rr).unwrap());
    }

    #[test]
    fn integer_scalars_agree(a in prop::collection::vec(((0i32..5, 0i32..4), -50i128..50), 0..8),
                             b in prop::collection::vec(((0i32..5, 0i32..4), -50i128..50), 0..8)) {
        let mk = |t: &Vec<((i32, i32), i128)>| {
            TruncatedSeries::<i128>::from_terms(&VARS, &PREC, &[0, 0], t.iter().map(|((x, y), c)| (vec![*x, *y], *c)))
                .unwrap()
        };
        let (fa, fb) = (mk(&a), mk(&b));
        let lift = |s: &TruncatedSeries<i128>| s.map_coeffs(|c| int(*c as i64));
        let l = lift(&fa.mul(&fb).unwrap());
        prop_assert!(l.agrees_with(&lift(&fa).mul(&lift(&fb)).unwrap()).unwrap());
    }
}
