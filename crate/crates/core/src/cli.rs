//! Command line front end: argument parsing, dispatch and report rendering.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coinv::{coinvariant_presentation, fixed_ring_dims, verify_fixed_ring, OrbiSetup};
use crate::error::{Error, Result};
use crate::jetpoly::JetPoly;
use crate::jetscheme::{
    fixed_point_ring, graded_quotient_dims, jet_generators, twisted_jet_generators, DimTable,
    GeneratorMethod, JetPresentation, SchemeSpec,
};
use crate::parse::SpecFile;
use crate::quasiconf::check_commutators;
use crate::report::{Check, CheckReport};
use crate::suite::{generator_sample, random_elements, twisted_suite, va_suite};

#[derive(Debug, Parser)]
#[command(name = "twistjet", version, about = "Jet schemes, twisted jets and orbifold coinvariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Generators of the truncated jet algebra
    Jet,
    /// Generators of the truncated twisted jet algebra
    TwistedJet,
    /// Presentation of the fixed-point ring
    FixedPoints,
    /// Vertex algebra axioms on sampled elements
    CheckVa,
    /// Twisted module axioms, twisted Borcherds identity and descent
    CheckTwisted,
    /// Commutation relations of the L_n and twisted L_n actions
    CheckQuasiconf,
    /// Coinvariant dimensions compared with the fixed-point ring
    Coinvariants,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Jet => "jet",
            Command::TwistedJet => "twisted-jet",
            Command::FixedPoints => "fixed-points",
            Command::CheckVa => "check-va",
            Command::CheckTwisted => "check-twisted",
            Command::CheckQuasiconf => "check-quasiconf",
            Command::Coinvariants => "coinvariants",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Scheme specification file (JSON)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Weight bound or series window, e.g. 3 or 5/2
    #[arg(long, global = true, value_parser = parse_rational)]
    pub max_weight: Option<Rational64>,
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    /// Overrides the order m from the spec file
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Series window for the checks; for coinvariants, sections u^j du with |j| <= N
    #[arg(long, global = true)]
    pub window: Option<u32>,
    /// Largest mode or operator index in the checks
    #[arg(long, global = true)]
    pub max_index: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn parse_rational(s: &str) -> std::result::Result<Rational64, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("`{s}` is not a rational number"))?;
    let d: i64 = d.parse().map_err(|_| format!("`{s}` is not a rational number"))?;
    if d <= 0 {
        return Err(format!("`{s}` needs a positive denominator"));
    }
    Ok(Rational64::new(n, d))
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        out.push_str("inputs:\n");
        render_text(&self.inputs, 1, &mut out);
        out.push_str("results:\n");
        render_text(&self.results, 1, &mut out);
        out.push_str("checks:\n");
        for c in &self.checks {
            out.push_str(&format!("  {c}\n"));
        }
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        let flat = match x {
                            Value::Object(m) if m.values().all(|y| scalar_text(y).is_some()) => Some(
                                m.iter()
                                    .map(|(k, y)| format!("{k}={}", scalar_text(y).unwrap_or_default()))
                                    .collect::<Vec<_>>()
                                    .join(", "),
                            ),
                            _ => None,
                        };
                        match flat {
                            Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                            None => {
                                out.push_str(&format!("{pad}-\n"));
                                render_text(x, depth + 1, out);
                            }
                        }
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

/// Collapses many checks of the same identity into one line per identity.
fn summarize(report: &CheckReport) -> Vec<Check> {
    let mut groups: BTreeMap<String, (usize, Option<Check>)> = BTreeMap::new();
    let mut order = Vec::new();
    for c in &report.checks {
        let key = c
            .name
            .split(['(', ':'])
            .next()
            .unwrap_or(&c.name)
            .split(" for ")
            .next()
            .unwrap_or(&c.name)
            .trim()
            .to_string();
        let entry = groups.entry(key.clone()).or_insert_with(|| {
            order.push(key.clone());
            (0, None)
        });
        entry.0 += 1;
        if !c.pass && entry.1.is_none() {
            entry.1 = Some(c.clone());
        }
    }
    order
        .into_iter()
        .map(|key| {
            let (count, failure) = &groups[&key];
            let name = format!("{key} [{count} cases]");
            match failure {
                None => Check::pass(name),
                Some(f) => Check::fail(
                    name,
                    format!("{}: {}", f.name, f.witness.clone().unwrap_or_default()),
                ),
            }
        })
        .collect()
}

fn ratio(q: Rational64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn presentation_json(p: &JetPresentation, names: &[String], order: u32) -> Value {
    json!({
        "max_weight": ratio(p.max_weight),
        "variables": p.variables.iter().map(|v| JetPoly::var(order, *v).display_named(names)).collect::<Vec<_>>(),
        "generators": p.generators.iter().map(|g| json!({
            "relation": g.relation,
            "weight": ratio(g.weight),
            "poly": g.poly.display_named(names),
        })).collect::<Vec<_>>(),
    })
}

fn table_json(t: &DimTable) -> Value {
    Value::Array(
        t.iter()
            .map(|((w, d), n)| json!({"weight": ratio(*w), "degree": d, "dim": n}))
            .collect(),
    )
}

struct Session {
    file: SpecFile,
    spec: SchemeSpec,
    g: crate::jetscheme::DiagAutomorphism,
}

fn load(flags: &Flags) -> Result<Session> {
    let path = flags
        .input
        .as_ref()
        .ok_or_else(|| Error::Input("--input is required".into()))?;
    let file = SpecFile::load(path)?;
    let (spec, g) = file.build(flags.order)?;
    Ok(Session { file, spec, g })
}

fn nonnegative(w: Rational64) -> Result<Rational64> {
    if w < Rational64::from_integer(0) {
        return Err(Error::Input("--max-weight must be nonnegative".into()));
    }
    Ok(w)
}

fn integer_weight(w: Rational64) -> Result<u32> {
    if !w.is_integer() || w < Rational64::from_integer(0) {
        return Err(Error::Input(format!("--max-weight must be a nonnegative integer here, got {w}")));
    }
    Ok(w.to_integer() as u32)
}

/// Runs a parsed command line and returns its report.
pub fn execute(cli: &Cli) -> Result<Report> {
    let flags = &cli.flags;
    let s = load(flags)?;
    let m = s.spec.order();
    let mut inputs = json!({
        "m": m,
        "variables": s.file.variables,
        "relations": s.spec.relations().iter().map(|p| p.to_expr(&s.file.variables)).collect::<Vec<_>>(),
        "exponents": s.g.exponents(),
        "seed": flags.seed,
    });
    let mut set = |k: &str, v: Value| {
        inputs[k] = v;
    };
    let mut checks = Vec::new();
    let results = match cli.command {
        Command::Jet => {
            let w = integer_weight(flags.max_weight.unwrap_or(Rational64::from_integer(4)))?;
            set("max_weight", json!(w.to_string()));
            let t = jet_generators(&s.spec, w, GeneratorMethod::TRecursion)?;
            let sub = jet_generators(&s.spec, w, GeneratorMethod::Substitution)?;
            checks.push(if t == sub {
                Check::pass("T-recursion and substitution agree")
            } else {
                Check::fail("T-recursion and substitution agree", "generator lists differ")
            });
            presentation_json(&t, &s.file.variables, m)
        }
        Command::TwistedJet => {
            let w = nonnegative(flags.max_weight.unwrap_or(Rational64::from_integer(2)))?;
            set("max_weight", json!(ratio(w)));
            presentation_json(&twisted_jet_generators(&s.spec, &s.g, w)?, &s.file.variables, m)
        }
        Command::FixedPoints => {
            let fixed = fixed_point_ring(&s.spec, &s.g)?;
            let names = &s.file.variables;
            let d = flags.max_degree.unwrap_or(3);
            set("max_degree", json!(d));
            let vars: Vec<_> = fixed.variables().iter().map(|&i| crate::jetpoly::JetVar::new(i, 0)).collect();
            let dims = graded_quotient_dims(m, &vars, fixed.relations(), Rational64::from_integer(0), d)?;
            json!({
                "variables": fixed.variables().iter().map(|&i| names[(i - 1) as usize].clone()).collect::<Vec<_>>(),
                "relations": fixed.relations().iter().map(|p| p.to_expr(names)).collect::<Vec<_>>(),
                "dims": table_json(&dims),
            })
        }
        Command::CheckVa => {
            let window = flags.window.unwrap_or(8);
            let bound = flags.max_index.unwrap_or(3) as i64;
            set("window", json!(window));
            set("max_index", json!(bound));
            let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
            let mut samples = generator_sample(&s.spec);
            samples.extend(random_elements(&s.spec, &mut rng, 2, 2, 2, 2));
            let out = va_suite(&s.g, &samples, window, bound)?;
            checks = summarize(&out.report);
            json!({
                "samples": samples.iter().map(|p| p.display_named(&s.file.variables)).collect::<Vec<_>>(),
                "identities_checked": out.report.len(),
                "skipped_outside_window": out.skipped,
            })
        }
        Command::CheckTwisted => {
            let window = nonnegative(flags.max_weight.unwrap_or(Rational64::from_integer(4)))?;
            let l_bound = flags.max_index.unwrap_or(2) as i64;
            let index_bound = Rational64::from_integer(l_bound) + Rational64::new(1, 2);
            set("max_weight", json!(ratio(window)));
            set("max_index", json!(l_bound));
            let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
            let mut samples: Vec<JetPoly> = generator_sample(&s.spec)
                .into_iter()
                .filter(|p| p.max_weight_num() <= m as i64)
                .collect();
            samples.extend(random_elements(&s.spec, &mut rng, 2, 1, 2, 2));
            let out = twisted_suite(&s.spec, &s.g, &samples, window, l_bound, index_bound, 4)?;
            checks = summarize(&out.report);
            json!({
                "samples": samples.iter().map(|p| p.display_named(&s.file.variables)).collect::<Vec<_>>(),
                "identities_checked": out.report.len(),
                "skipped_outside_window": out.skipped,
            })
        }
        Command::CheckQuasiconf => {
            let window = nonnegative(flags.max_weight.unwrap_or(Rational64::from_integer(6)))?;
            let max_index = flags.max_index.unwrap_or(4);
            set("max_weight", json!(ratio(window)));
            set("max_index", json!(max_index));
            let report = check_commutators(&s.g, max_index, window)?;
            let n = report.len();
            checks = report.checks;
            json!({ "relations_checked": n })
        }
        Command::Coinvariants => {
            let w = nonnegative(flags.max_weight.unwrap_or(Rational64::from_integer(2)))?;
            let d = flags.max_degree.unwrap_or(2);
            let mut setup = OrbiSetup::new(s.spec.clone(), s.g.clone(), w, d)?;
            if let Some(n) = flags.window {
                setup = setup.with_j_range(-(n as i64), n as i64);
            }
            let (lo, hi) = setup.j_range();
            set("max_weight", json!(ratio(w)));
            set("max_degree", json!(d));
            set("j_range", json!([lo, hi]));
            let pres = coinvariant_presentation(&setup)?;
            let dims = graded_quotient_dims(m, &pres.variables, &pres.generators(), w, d)?;
            let fixed = fixed_ring_dims(&setup)?;
            checks = verify_fixed_ring(&setup)?.checks;
            json!({
                "residue_relations": pres.residue_relations.len(),
                "jet_relations": pres.jet_relations.len(),
                "total_dimension": dims.values().sum::<usize>(),
                "dims": table_json(&dims),
                "fixed_ring_dims": table_json(&fixed),
            })
        }
    };
    Ok(Report {
        command: cli.command.name().to_string(),
        inputs,
        results,
        checks,
    })
}

/// Output of one invocation: text for stdout and stderr, and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

/// Parses `args` (including the program name), runs the command and renders the report.
/// Status is 0 when every check passes, 1 when one fails, 2 on input errors.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                Outcome { stdout: text, stderr: String::new(), status }
            } else {
                Outcome { stdout: String::new(), stderr: text, status }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome {
            stdout: match cli.flags.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            },
            stderr: String::new(),
            status: if report.passed() { 0 } else { 1 },
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            status: 2,
        },
    }
}
