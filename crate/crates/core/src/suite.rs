//! Sampled runs of the identity checkers over a scheme, shared by the command
//! line tool and the test suites.

use num::{BigInt, BigRational, Rational64};
use rand::Rng;

use crate::error::{Error, Result};
use crate::jetpoly::{eigen_decompose, eigenindex, JetPoly, JetVar};
use crate::jetscheme::{DiagAutomorphism, SchemeSpec};
use crate::report::CheckReport;
use crate::twisted::{check_descent, check_twisted_axioms, check_twisted_borcherds, TwistedModule};
use crate::{rational::numerator_over, va};

#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    pub report: CheckReport,
    /// Index combinations left out because a needed mode was outside the window.
    pub skipped: usize,
}

fn push_unique(out: &mut Vec<JetPoly>, p: JetPoly) {
    if !p.is_zero() && !out.contains(&p) {
        out.push(p);
    }
}

/// `1`, `x[i,0]`, `x[i,-1]`, the relations, and the products `x[i,0] x[j,-1]`.
pub fn generator_sample(spec: &SchemeSpec) -> Vec<JetPoly> {
    let m = spec.order();
    let level = |i: u32, n: i64| JetPoly::var(m, JetVar::new(i, -n * m as i64));
    let mut out = vec![JetPoly::one(m)];
    for &i in spec.variables() {
        push_unique(&mut out, level(i, 0));
        push_unique(&mut out, level(i, 1));
    }
    for p in spec.relations() {
        push_unique(&mut out, p.clone());
    }
    for &i in spec.variables() {
        for &j in spec.variables() {
            push_unique(&mut out, &level(i, 0) * &level(j, 1));
        }
    }
    out
}

/// Random polynomials in untwisted variables with weight and degree bounded, small
/// rational coefficients and at most `terms` terms.
pub fn random_elements(
    spec: &SchemeSpec,
    rng: &mut impl Rng,
    count: usize,
    max_weight: u32,
    max_degree: u32,
    terms: usize,
) -> Vec<JetPoly> {
    let m = spec.order();
    let vars = spec.variables();
    (0..count)
        .map(|_| {
            let mut p = JetPoly::zero(m);
            for _ in 0..rng.gen_range(1..=terms.max(1)) {
                let mut t = JetPoly::one(m);
                let mut budget = max_weight as i64;
                for _ in 0..rng.gen_range(0..=max_degree) {
                    if vars.is_empty() {
                        break;
                    }
                    let i = vars[rng.gen_range(0..vars.len())];
                    let n = rng.gen_range(0..=budget);
                    budget -= n;
                    t = &t * &JetPoly::var(m, JetVar::new(i, -n * m as i64));
                }
                let c = BigRational::new(BigInt::from(rng.gen_range(-3..=3)), BigInt::from(rng.gen_range(1..=3)));
                p = &p + &t.scale_rational(&c);
            }
            p
        })
        .collect()
}

/// Translation, vacuum, creation, automorphism and multiplicativity on every sample,
/// and the Borcherds identity for every pair with `|m|, |n|, |k| <= bound`.
pub fn va_suite(g: &DiagAutomorphism, samples: &[JetPoly], window: u32, bound: i64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let cache = va::ModeCache::new(window);
    for a in samples {
        out.report.extend(va::check_va_axioms(a, g, samples, window)?);
        for b in samples {
            out.report.push(va::check_multiplicativity(a, b, window));
            for m in -bound..=bound {
                for n in -bound..=bound {
                    for k in -bound..=bound {
                        match va::check_borcherds_cached(&cache, a, b, m, n, k) {
                            Ok(c) => out.report.push(c),
                            Err(Error::WindowExceeded(_)) => out.skipped += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Eigencomponents of the samples, without zeros or repetitions.
pub fn eigen_sample(g: &DiagAutomorphism, samples: &[JetPoly]) -> Vec<JetPoly> {
    let mut out = Vec::new();
    for p in samples {
        for c in eigen_decompose(g.exponents(), p) {
            push_unique(&mut out, c);
        }
    }
    out
}

/// The indices in `r/m + Z` with absolute value at most `bound`.
pub fn coset_indices(order: u32, r: u32, bound: Rational64) -> Vec<Rational64> {
    let m = order as i64;
    let b = (bound * Rational64::from_integer(m)).floor().to_integer();
    (-b..=b)
        .filter(|n| (n - r as i64).rem_euclid(m) == 0)
        .map(|n| Rational64::new(n, m))
        .collect()
}

/// Twisted axioms for every pair of eigenvectors in `samples`, the twisted Borcherds
/// identity over `|l| <= l_bound`, `|m|, |n| <= index_bound` in the right cosets,
/// and descent for every relation with `n <= descent_max`.
pub fn twisted_suite(
    spec: &SchemeSpec,
    g: &DiagAutomorphism,
    samples: &[JetPoly],
    window: Rational64,
    l_bound: i64,
    index_bound: Rational64,
    descent_max: u32,
) -> Result<SuiteOutcome> {
    let module = TwistedModule::new(g, window)?;
    let samples = eigen_sample(g, samples);
    let mut out = SuiteOutcome::default();
    let order = g.order();
    for a in &samples {
        for b in &samples {
            out.report.extend(check_twisted_axioms(&module, a, b, &samples)?);
        }
    }
    for a in &samples {
        let r = eigenindex(g.exponents(), a).expect("eigencomponent");
        let ms = coset_indices(order, r, index_bound);
        for b in &samples {
            let s = eigenindex(g.exponents(), b).expect("eigencomponent");
            let ns = coset_indices(order, s, index_bound);
            for l in -l_bound..=l_bound {
                for &mi in &ms {
                    for &ni in &ns {
                        match check_twisted_borcherds(&module, a, b, l, mi, ni) {
                            Ok(c) => out.report.push(c),
                            Err(Error::WindowExceeded(_)) => out.skipped += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    let w_int = (numerator_over(window, order)? / order as i64).max(0) as u32;
    for relation in 1..=spec.relations().len() {
        for n in 0..=descent_max.min(w_int) {
            out.report.push(check_descent(spec, g, relation, n, window)?);
        }
    }
    Ok(out)
}

/// All exponent vectors for `spec` under which the automorphism preserves the relations.
pub fn admissible_automorphisms(spec: &SchemeSpec) -> Vec<DiagAutomorphism> {
    let m = spec.order();
    let k = spec.max_index() as usize;
    let mut out = Vec::new();
    let mut alpha = vec![0u32; k];
    loop {
        let g = DiagAutomorphism::new(m, alpha.clone()).expect("exponents below m");
        if g.check_preserves(spec).is_ok() {
            out.push(g);
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            alpha[i] += 1;
            if alpha[i] < m {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}
