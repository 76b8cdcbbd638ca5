use num::Rational64;
use proptest::prelude::*;

use twistjet::coinv::{coinvariant_dims, OrbiSetup};
use twistjet::jetpoly::{divided_power_t, eigenindex, substitute_jets, JetPoly, JetVar};
use twistjet::jetscheme::{fixed_point_ring, twisted_jet_generators, DiagAutomorphism, SchemeSpec};
use twistjet::quasiconf::{l_op, ltilde_op};
use twistjet::rational::big_int;
use twistjet::suite::admissible_automorphisms;
use twistjet::twisted::{check_twisted_axioms, TwistedModule};

fn var(m: u32, i: u32, num: i64) -> JetPoly {
    JetPoly::var(m, JetVar::new(i, num))
}

/// Level-0 polynomial in two variables with small integer coefficients.
fn level0(m: u32) -> impl Strategy<Value = JetPoly> {
    prop::collection::vec((0u32..4, 0u32..3, -3i64..4), 1..4).prop_map(move |terms| {
        let mut p = JetPoly::zero(m);
        for (e1, e2, c) in terms {
            p = &p + &(&var(m, 1, 0).pow(e1) * &var(m, 2, 0).pow(e2)).scale_rational(&big_int(c));
        }
        p
    })
}

/// Untwisted monomial of degree <= 3 and weight <= 4.
fn monomial(m: u32) -> impl Strategy<Value = JetPoly> {
    prop::collection::vec((1u32..3, 0i64..3), 0..4).prop_map(move |factors| {
        let mut p = JetPoly::one(m);
        let mut budget = 4;
        for (i, n) in factors {
            let n = n.min(budget);
            budget -= n;
            p = &p * &var(m, i, -n * m as i64);
        }
        p
    })
}

proptest! {
    #[test]
    fn substitution_matches_translation(p in level0(1)) {
        let s = substitute_jets(&p, &[0, 0], Rational64::from_integer(6)).unwrap();
        for n in 0..=6u64 {
            prop_assert_eq!(s.coeff_num(n as i64).unwrap(), divided_power_t(&p, n));
        }
    }

    #[test]
    fn twisted_fields_on_monomials(m in 2u32..5, a1 in 0u32..4, a2 in 0u32..4, p in monomial(4), q in monomial(4)) {
        // rebuild the monomials in order m
        let p = p.map_vars(|v| JetVar { level: v.level / 4 * m as i64, ..*v });
        let q = q.map_vars(|v| JetVar { level: v.level / 4 * m as i64, ..*v });
        let p = JetPoly::from_terms(m, p.terms().keys().map(|k| (k.clone(), twistjet::cyclo::CycScalar::one(m))));
        let q = JetPoly::from_terms(m, q.terms().keys().map(|k| (k.clone(), twistjet::cyclo::CycScalar::one(m))));
        let g = DiagAutomorphism::new(m, vec![a1 % m, a2 % m]).unwrap();
        let module = TwistedModule::new(&g, Rational64::from_integer(4)).unwrap();
        let r = check_twisted_axioms(&module, &p, &q, &[JetPoly::one(m)]).unwrap();
        prop_assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn ltilde_is_derivation(r in 0u32..4, l1 in 0i64..4, l2 in 0i64..4, l3 in 0i64..4) {
        let g = DiagAutomorphism::new(3, vec![1, 2]).unwrap();
        let w = Rational64::from_integer(5);
        let p = &var(3, 1, -2 - 3 * l1) * &var(3, 2, -1 - 3 * l2);
        let q = &var(3, 1, -2 - 3 * l3) + &JetPoly::one(3);
        let lhs = ltilde_op(r, &(&p * &q), &g, w).unwrap();
        let rhs = &(&ltilde_op(r, &p, &g, w).unwrap() * &q) + &(&p * &ltilde_op(r, &q, &g, w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn l0_measures_weight(p in monomial(1)) {
        let w = p.max_weight_num();
        prop_assert_eq!(l_op(0, &p, 4).unwrap(), p.scale_rational(&big_int(w)));
    }
}

#[test]
fn twisted_generators_are_homogeneous_eigenvectors() {
    for m in 2..=4 {
        let x = |i| JetPoly::gen(m, i);
        let specs = [
            SchemeSpec::new(m, 2, vec![&x(1).pow(2) - &x(2)]).unwrap(),
            SchemeSpec::new(m, 2, vec![&x(1).pow(3) - &x(2).pow(2)]).unwrap(),
            SchemeSpec::new(m, 2, vec![&x(1) * &x(2)]).unwrap(),
        ];
        for spec in &specs {
            for g in admissible_automorphisms(spec) {
                let pres = twisted_jet_generators(spec, &g, Rational64::from_integer(3)).unwrap();
                for gen in &pres.generators {
                    assert_eq!(gen.poly.homogeneous_weight(), Some(gen.weight));
                    assert!(eigenindex(g.exponents(), &gen.poly).is_some());
                }
                let fixed = fixed_point_ring(spec, &g).unwrap();
                let again = fixed_point_ring(&fixed, &g).unwrap();
                assert_eq!(again, fixed);
            }
        }
    }
}

#[test]
fn coinvariants_shrink_as_windows_grow() {
    let m = 2;
    let spec = SchemeSpec::new(m, 2, vec![&JetPoly::gen(m, 1) * &JetPoly::gen(m, 2)]).unwrap();
    let g = DiagAutomorphism::new(m, vec![1, 1]).unwrap();
    let setup = OrbiSetup::new(spec, g, Rational64::from_integer(2), 2).unwrap();
    let mut previous = None;
    for half_width in 0..=5 {
        let dims = coinvariant_dims(&setup.clone().with_j_range(-half_width, half_width)).unwrap();
        if let Some(prev) = &previous {
            for (k, v) in &dims {
                assert!(v <= &twistjet::jetscheme::DimTable::get(prev, k).copied().unwrap_or(0));
            }
        }
        previous = Some(dims);
    }
    let last = previous.unwrap();
    assert_eq!(last.values().sum::<usize>(), 1);
}
