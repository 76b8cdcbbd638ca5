//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use num::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twistjet::coinv::{coinvariant_dims, tables_agree_on, verify_fixed_ring, OrbiSetup};
use twistjet::jetpoly::JetPoly;
use twistjet::jetscheme::{
    jet_generators, twisted_jet_generators, DiagAutomorphism, DimTable, GeneratorMethod, SchemeSpec,
};
use twistjet::quasiconf::{check_commutators, l_op, ltilde_op};
use twistjet::suite::{admissible_automorphisms, generator_sample, random_elements, twisted_suite, va_suite};
use twistjet::twisted::{check_descent, twisted_borcherds_sides, twisted_mode, twisted_vertex_op, TwistedModule};
use twistjet::va::{borcherds_sides, mode, vertex_op};
use twistjet::Result;

fn x(m: u32, i: u32) -> JetPoly {
    JetPoly::gen(m, i)
}

/// `{x^2}`, `{x1^2 - x2}`, `{x1 x2}`, `{x1^3 - x2^2}` over order `m`.
fn fixtures(m: u32) -> Vec<(&'static str, SchemeSpec)> {
    vec![
        ("x^2", SchemeSpec::new(m, 1, vec![x(m, 1).pow(2)]).unwrap()),
        ("x1^2 - x2", SchemeSpec::new(m, 2, vec![&x(m, 1).pow(2) - &x(m, 2)]).unwrap()),
        ("x1*x2", SchemeSpec::new(m, 2, vec![&x(m, 1) * &x(m, 2)]).unwrap()),
        ("x1^3 - x2^2", SchemeSpec::new(m, 2, vec![&x(m, 1).pow(3) - &x(m, 2).pow(2)]).unwrap()),
    ]
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn generator_cross_oracle() -> Result<Outcome> {
    let mut compared = 0;
    for (name, spec) in fixtures(1) {
        let t = jet_generators(&spec, 8, GeneratorMethod::TRecursion)?;
        let s = jet_generators(&spec, 8, GeneratorMethod::Substitution)?;
        if t != s {
            return outcome(false, format!("methods differ on {name}"));
        }
        compared += t.generators.len();
    }
    outcome(true, format!("{compared} generators agree up to weight 8"))
}

fn untwisted_axioms() -> Result<Outcome> {
    let mut identities = 0;
    for (name, spec) in fixtures(1) {
        let samples = generator_sample(&spec);
        let g = DiagAutomorphism::identity(1, spec.k());
        let out = va_suite(&g, &samples, 8, 3)?;
        if let Some(f) = out.report.failures().next() {
            return outcome(false, format!("{name}: {f}"));
        }
        if out.skipped > 0 {
            return outcome(false, format!("{name}: {} index triples outside window 8", out.skipped));
        }
        identities += out.report.len();
    }
    // automorphism law for nontrivial g, in the order-m session
    for m in 2..=4 {
        for (name, spec) in fixtures(m) {
            let samples = generator_sample(&spec);
            for g in admissible_automorphisms(&spec) {
                for a in &samples {
                    let r = twistjet::va::check_va_axioms(a, &g, &samples, 8)?;
                    if let Some(f) = r.failures().next() {
                        return outcome(false, format!("{name}, m={m}, alpha={:?}: {f}", g.exponents()));
                    }
                    identities += r.len();
                }
            }
        }
    }
    outcome(true, format!("{identities} identities hold exactly"))
}

fn twisted_samples(spec: &SchemeSpec) -> Vec<JetPoly> {
    let m = spec.order() as i64;
    generator_sample(spec)
        .into_iter()
        .filter(|p| p.max_weight_num() <= m)
        .collect()
}

fn twisted_structure() -> Result<Outcome> {
    let mut identities = 0;
    let mut automorphisms = 0;
    for m in 2..=4 {
        for (name, spec) in fixtures(m) {
            for g in admissible_automorphisms(&spec) {
                let out = twisted_suite(
                    &spec,
                    &g,
                    &twisted_samples(&spec),
                    Rational64::from_integer(6),
                    2,
                    Rational64::new(5, 2),
                    0,
                )?;
                let tag = format!("{name}, m={m}, alpha={:?}", g.exponents());
                if let Some(f) = out.report.failures().next() {
                    return outcome(false, format!("{tag}: {f}"));
                }
                if out.skipped > 0 {
                    return outcome(false, format!("{tag}: {} index triples outside window 6", out.skipped));
                }
                identities += out.report.len();
                automorphisms += 1;
            }
        }
    }
    outcome(
        true,
        format!("{identities} identities over {automorphisms} admissible automorphisms"),
    )
}

fn descent() -> Result<Outcome> {
    let mut checks = 0;
    for m in 2..=4 {
        for (name, spec) in fixtures(m) {
            for g in admissible_automorphisms(&spec) {
                for relation in 1..=spec.relations().len() {
                    for n in 0..=4 {
                        let c = check_descent(&spec, &g, relation, n, Rational64::from_integer(6))?;
                        if !c.pass {
                            return outcome(false, format!("{name}, m={m}, alpha={:?}: {c}", g.exponents()));
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    outcome(true, format!("{checks} descent identities hold at every w <= 6 - n"))
}

fn quasiconformal() -> Result<Outcome> {
    let mut relations = 0;
    for m in 1..=4u32 {
        for alpha in [vec![0, 0], vec![1 % m, 0], vec![1 % m, (m - 1) % m]] {
            let g = DiagAutomorphism::new(m, alpha)?;
            let r = check_commutators(&g, 4, Rational64::from_integer(6))?;
            if let Some(f) = r.failures().next() {
                return outcome(false, format!("m={m}, alpha={:?}: {f}", g.exponents()));
            }
            relations += r.len();
        }
    }
    outcome(true, format!("{relations} bracket and grading relations hold on weight <= 6"))
}

fn restricted(t: &DimTable) -> String {
    t.iter()
        .filter(|(_, &n)| n > 0)
        .map(|((w, d), n)| format!("({w},{d}):{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fixed_ring_match() -> Result<Outcome> {
    let m = 2;
    let cases = vec![
        ("A^1, alpha=1", SchemeSpec::new(m, 1, vec![])?, vec![1]),
        ("A^2, alpha=(1,0)", SchemeSpec::new(m, 2, vec![])?, vec![1, 0]),
        ("V(x1^2 - x2), alpha=(1,0)", SchemeSpec::new(m, 2, vec![&x(m, 1).pow(2) - &x(m, 2)])?, vec![1, 0]),
        ("V(x1 x2), alpha=(1,1)", SchemeSpec::new(m, 2, vec![&x(m, 1) * &x(m, 2)])?, vec![1, 1]),
    ];
    let mut details = Vec::new();
    for (name, spec, alpha) in cases {
        let g = DiagAutomorphism::new(m, alpha)?;
        let setup = OrbiSetup::new(spec.clone(), g.clone(), Rational64::from_integer(3), 3)?;
        let report = verify_fixed_ring(&setup)?;
        if let Some(f) = report.failures().next() {
            return outcome(false, format!("{name}: {f}"));
        }
        let base = coinvariant_dims(&setup)?;
        let (lo, hi) = OrbiSetup::new(spec.clone(), g.clone(), Rational64::from_integer(5), 5)?.default_j_range();
        let larger = OrbiSetup::new(spec, g, Rational64::from_integer(5), 5)?.with_j_range(lo - 2, hi + 2);
        let big = coinvariant_dims(&larger)?;
        if !tables_agree_on(&base, &big) {
            return outcome(
                false,
                format!("{name}: unstable, {} vs {}", restricted(&base), restricted(&big)),
            );
        }
        details.push(format!("{name} -> {}", restricted(&base)));
    }
    outcome(true, details.join("; "))
}

fn degeneration() -> Result<Outcome> {
    let cases = vec![
        ("A^1", SchemeSpec::new(1, 1, vec![])?, vec![1, 1, 1, 1]),
        ("V(x^2)", SchemeSpec::new(1, 1, vec![x(1, 1).pow(2)])?, vec![1, 1, 0, 0]),
    ];
    let mut details = Vec::new();
    for (name, spec, expected) in cases {
        let setup = OrbiSetup::new(spec, DiagAutomorphism::identity(1, 1), Rational64::from_integer(3), 3)?;
        let dims = coinvariant_dims(&setup)?;
        let zero = Rational64::from_integer(0);
        let by_degree: Vec<usize> = (0..=3).map(|d| dims[&(zero, d)]).collect();
        let positive: usize = dims.iter().filter(|((w, _), _)| *w > zero).map(|(_, n)| n).sum();
        if by_degree != expected || positive != 0 || !verify_fixed_ring(&setup)?.all_pass() {
            return outcome(false, format!("{name}: degrees {by_degree:?}, positive weight total {positive}"));
        }
        details.push(format!("{name} -> {by_degree:?}"));
    }
    outcome(true, details.join("; "))
}

fn consistency() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ambient = SchemeSpec::new(1, 2, vec![])?;
    let g = DiagAutomorphism::identity(1, 2);
    let w = 6;
    let wr = Rational64::from_integer(w as i64);
    let module = TwistedModule::new(&g, wr)?;
    for case in 0..50 {
        let ab = random_elements(&ambient, &mut rng, 2, 2, 2, 3);
        let (a, b) = (&ab[0], &ab[1]);
        let fail = |what: &str| outcome(false, format!("case {case}: {what} differs for a={a}, b={b}"));

        if twisted_vertex_op(a, &g, wr)?.series != vertex_op(a, w) {
            return fail("vertex operator");
        }
        for n in -(w as i64) - 1..=2 {
            if twisted_mode(a, &g, Rational64::from_integer(n), wr)? != mode(a, n, w)? {
                return fail("mode");
            }
        }
        let l = (case % 5) as i64 - 2;
        let mi = ((case / 5) % 5) as i64 - 2;
        let ni = ((case / 25) % 2) as i64 - 1;
        let tw = twisted_borcherds_sides(&module, a, b, l, Rational64::from_integer(mi), Rational64::from_integer(ni))?;
        if tw != borcherds_sides(a, b, mi, l, ni, 12)? {
            return fail("borcherds sides");
        }
        for r in 0..3 {
            if ltilde_op(r, a, &g, wr)? != l_op(r, a, w)? {
                return fail("L operator");
            }
        }
        let rel = random_elements(&ambient, &mut rng, 1, 0, 3, 3).remove(0);
        let spec = SchemeSpec::new(1, 2, vec![rel])?;
        let tw = twisted_jet_generators(&spec, &g, Rational64::from_integer(4))?;
        let un = jet_generators(&spec, 4, GeneratorMethod::TRecursion)?;
        if tw.generators != un.generators || tw.variables != un.variables {
            return fail("jet generators");
        }
    }
    outcome(true, "50 seeded inputs agree on fields, modes, Borcherds sides, L operators, generators")
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 generator cross-oracle", generator_cross_oracle),
        ("2 untwisted axioms", untwisted_axioms),
        ("3 twisted structure", twisted_structure),
        ("4 descent", descent),
        ("5 quasi-conformal relations", quasiconformal),
        ("6 coinvariants match fixed-point ring", fixed_ring_match),
        ("7 degeneration to trivial group", degeneration),
        ("8 untwisted consistency at m=1", consistency),
    ];
    let mut all = true;
    for (name, f) in criteria {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!(
            "{} criterion {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
