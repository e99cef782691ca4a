//! Named verification suites over a scenario.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use gauge2::algebra::matrix::PolyMatrix;
use gauge2::chsas::{
    ast_form, chern_weil_residual, chsas_form, dd_residual, eval_filled, p_form, proof_step_residual,
    t_derivative_residuals, variation_residual, InterpolationData, ProofStep,
};
use gauge2::gauge::{alpha_lift, bianchi_residuals, curvature_transform_residual, gauge_transform};
use gauge2::random::Sampler;
use gauge2::tgft::{
    action_gauge_invariance, action_value, boundary_faces, boundary_term, eom_residuals, variation_identity_residual,
    VariationData,
};
use gauge2::{rat, AlgebraForm, GaugeData, Rational, Side, TwoConnection};

use crate::report::{CheckEntry, Report, Residual};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    Bianchi,
    Closedness,
    Chsas,
    ChernWeil,
    ProofSteps,
    GaugeInvariance,
    Eom,
    Boundary,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "axioms",
        "bianchi",
        "closedness",
        "chsas",
        "chern-weil",
        "proof-steps",
        "gauge-invariance",
        "eom",
        "boundary",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Bianchi => "bianchi",
            Suite::Closedness => "closedness",
            Suite::Chsas => "chsas",
            Suite::ChernWeil => "chern-weil",
            Suite::ProofSteps => "proof-steps",
            Suite::GaugeInvariance => "gauge-invariance",
            Suite::Eom => "eom",
            Suite::Boundary => "boundary",
            Suite::All => "all",
        }
    }

    /// Mixed into the seed so suites draw independent random data.
    fn salt(self) -> u64 {
        Suite::NAMES.iter().position(|n| *n == self.name()).unwrap_or(0) as u64 * 0x1000_0000_0000
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "bianchi" => Suite::Bianchi,
            "closedness" => Suite::Closedness,
            "chsas" => Suite::Chsas,
            "chern-weil" => Suite::ChernWeil,
            "proof-steps" => Suite::ProofSteps,
            "gauge-invariance" => Suite::GaugeInvariance,
            "eom" => Suite::Eom,
            "boundary" => Suite::Boundary,
            "all" => Suite::All,
            other => {
                return Err(format!(
                    "unknown suite '{other}' (expected one of {})",
                    Suite::NAMES.join(", ")
                ))
            }
        })
    }
}

#[derive(Debug)]
pub enum SuiteError {
    /// The scenario lacks something the suite needs.
    Requirement(String),
    Engine(gauge2::Error),
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::Requirement(m) => f.write_str(m),
            SuiteError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SuiteError {}

impl From<gauge2::Error> for SuiteError {
    fn from(e: gauge2::Error) -> Self {
        SuiteError::Engine(e)
    }
}

#[derive(Default)]
struct Output {
    entries: Vec<CheckEntry>,
    notes: Vec<String>,
}

type Job<'a> = Box<dyn Fn() -> Result<Output, SuiteError> + Send + Sync + 'a>;

fn params(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Which data a check ran on.
#[derive(Clone)]
enum Source {
    Scenario(&'static str),
    Trial(usize),
}

impl Source {
    fn params(&self) -> Vec<(String, String)> {
        match self {
            Source::Scenario(which) => params(&[("data", which.to_string())]),
            Source::Trial(k) => params(&[("trial", k.to_string())]),
        }
    }
}

fn sampler(s: &Scenario, suite: Suite, k: usize) -> Sampler {
    Sampler::for_trial(s.seed ^ suite.salt(), k as u64)
}

/// Scenario connections followed by `trials` random ones.
fn connections(s: &Scenario, suite: Suite) -> Vec<(Source, TwoConnection)> {
    let mut out = vec![(Source::Scenario("conn1"), s.conn1.clone())];
    if let Some(c0) = &s.conn0 {
        out.push((Source::Scenario("conn0"), c0.clone()));
    }
    for k in 0..s.trials {
        out.push((Source::Trial(k), sampler(s, suite, k).connection(&s.module, s.chart)));
    }
    out
}

/// The scenario pair followed by `trials` random pairs.
fn pairs(s: &Scenario, suite: Suite) -> Result<Vec<(Source, InterpolationData)>, SuiteError> {
    let mut out = vec![(
        Source::Scenario("pair"),
        InterpolationData::new(&s.module, s.conn0_or_zero(), s.conn1.clone())?,
    )];
    for k in 0..s.trials {
        let mut r = sampler(s, suite, k);
        let c0 = r.connection(&s.module, s.chart);
        let c1 = r.connection(&s.module, s.chart);
        out.push((Source::Trial(k), InterpolationData::new(&s.module, c0, c1)?));
    }
    Ok(out)
}

/// Constant gauge data drawn at random; the h-action matrix is the adjoint
/// matrix when that is compatible with the module and the identity otherwise.
fn random_gauge(s: &Scenario, r: &mut Sampler) -> Option<GaugeData> {
    let (g, ginv) = r.constant_group_element(&s.module).ok()?;
    let phi = r.algebra_form(&s.module, Side::H, s.chart, 1, 0.7);
    let (g, ginv) = (g.to_poly(), ginv.to_poly());
    GaugeData::with_adjoint_action(&s.module, g.clone(), ginv.clone(), phi.clone())
        .or_else(|_| GaugeData::new(&s.module, g, ginv, PolyMatrix::identity(s.module.h().dim()), phi))
        .ok()
}

fn g_labels(s: &Scenario) -> &[String] {
    s.module.g().labels()
}

fn h_labels(s: &Scenario) -> &[String] {
    s.module.h().labels()
}

fn axioms(s: &Scenario) -> Vec<Job<'_>> {
    vec![Box::new(move || {
        let mut out = Output::default();
        for check in &s.module.validate().checks {
            out.entries
                .push(CheckEntry::coefficients("axioms", &check.name, vec![], &check.residual));
        }
        for check in &s.module.validate_pairing(&s.pairing)?.checks {
            out.entries.push(CheckEntry::coefficients(
                "axioms",
                &check.name,
                params(&[("n", s.n.to_string())]),
                &check.residual,
            ));
        }
        Ok(out)
    })]
}

fn bianchi(s: &Scenario) -> Vec<Job<'_>> {
    connections(s, Suite::Bianchi)
        .into_iter()
        .map(|(src, conn)| -> Job<'_> {
            Box::new(move || {
                let (r1, r2) = bianchi_residuals(&s.module, &conn)?;
                Ok(Output {
                    entries: vec![
                        CheckEntry::algebra("bianchi", "first-bianchi", src.params(), &r1, g_labels(s)),
                        CheckEntry::algebra("bianchi", "second-bianchi", src.params(), &r2, h_labels(s)),
                    ],
                    notes: vec![],
                })
            })
        })
        .collect()
}

fn closedness(s: &Scenario) -> Vec<Job<'_>> {
    connections(s, Suite::Closedness)
        .into_iter()
        .map(|(src, conn)| -> Job<'_> {
            Box::new(move || {
                let residual = p_form(&s.module, &conn, &s.pairing)?.d();
                Ok(Output {
                    entries: vec![CheckEntry::scalar("closedness", "d-p-form", src.params(), &residual)],
                    notes: vec![],
                })
            })
        })
        .collect()
}

fn chsas(s: &Scenario) -> Vec<Job<'_>> {
    connections(s, Suite::Chsas)
        .into_iter()
        .map(|(src, conn)| -> Job<'_> {
            Box::new(move || {
                let potential = &chsas_form(&s.module, &conn, &s.pairing)?.d() - &p_form(&s.module, &conn, &s.pairing)?;
                // With A = 0 the potential is (−1)ⁿ/(n+1)⟨α(B)ⁿ, B⟩.
                let b = conn.b().clone();
                let flat = TwoConnection::new(
                    &s.module,
                    AlgebraForm::zero_in(&s.module, Side::G, s.chart, 1),
                    b.clone(),
                )?;
                let ab = alpha_lift(&s.module, &b)?;
                let sign = if s.n.is_multiple_of(2) { 1 } else { -1 };
                let closed = eval_filled(&s.pairing, &[], &ab, &b)?.scale(&rat(sign, s.n as i64 + 1));
                let residual = &chsas_form(&s.module, &flat, &s.pairing)? - &closed;
                Ok(Output {
                    entries: vec![
                        CheckEntry::scalar("chsas", "potential", src.params(), &potential),
                        CheckEntry::scalar("chsas", "zero-a-closed-form", src.params(), &residual),
                    ],
                    notes: vec![],
                })
            })
        })
        .collect()
}

fn chern_weil(s: &Scenario) -> Result<Vec<Job<'_>>, SuiteError> {
    if s.conn0.is_none() {
        return Err(SuiteError::Requirement(
            "suite chern-weil needs a [conn0] section".into(),
        ));
    }
    let mut jobs: Vec<Job<'_>> = pairs(s, Suite::ChernWeil)?
        .into_iter()
        .map(|(src, interp)| -> Job<'_> {
            Box::new(move || {
                let r = chern_weil_residual(&s.module, &interp, &s.pairing)?;
                Ok(Output {
                    entries: vec![CheckEntry::scalar("chern-weil", "transgression", src.params(), &r)],
                    notes: vec![],
                })
            })
        })
        .collect();
    jobs.push(Box::new(move || {
        let from_zero = InterpolationData::new(&s.module, TwoConnection::zero(&s.module, s.chart), s.conn1.clone())?;
        let r = &ast_form(&s.module, &from_zero, &s.pairing)? - &chsas_form(&s.module, &s.conn1, &s.pairing)?;
        Ok(Output {
            entries: vec![CheckEntry::scalar(
                "chern-weil",
                "transgression-from-zero",
                Source::Scenario("conn1").params(),
                &r,
            )],
            notes: vec![],
        })
    }));
    Ok(jobs)
}

/// Proof steps that hold as identities; the two action terms are only
/// checked in their combined form.
const HOLDING_STEPS: [ProofStep; 4] = [
    ProofStep::BianchiAlphaTerm,
    ProofStep::AlphaSwapTerm,
    ProofStep::SecondBianchiTerm,
    ProofStep::CombinedActionTerms,
];

fn proof_steps(s: &Scenario) -> Result<Vec<Job<'_>>, SuiteError> {
    Ok(pairs(s, Suite::ProofSteps)?
        .into_iter()
        .enumerate()
        .map(|(k, (src, interp))| -> Job<'_> {
            Box::new(move || {
                let mut out = Output::default();
                for step in HOLDING_STEPS.into_iter().filter(|st| s.n >= st.min_arity()) {
                    let r = proof_step_residual(&s.module, &interp, &s.pairing, step)?;
                    out.entries
                        .push(CheckEntry::scalar("proof-steps", step.name(), src.params(), &r));
                }
                let (rf, rg) = t_derivative_residuals(&s.module, &interp)?;
                out.entries.push(CheckEntry::algebra(
                    "proof-steps",
                    "t-derivative-f",
                    src.params(),
                    &rf,
                    g_labels(s),
                ));
                out.entries.push(CheckEntry::algebra(
                    "proof-steps",
                    "t-derivative-g",
                    src.params(),
                    &rg,
                    h_labels(s),
                ));
                // Leibniz rule of the covariant derivative under the pairing.
                let mut r = sampler(s, Suite::ProofSteps, 1000 + k);
                let a = r.algebra_form(&s.module, Side::G, s.chart, 1, 0.7);
                let slots: Vec<AlgebraForm> = (0..s.n)
                    .map(|i| r.algebra_form(&s.module, Side::G, s.chart, 1 + i % 2, 0.7))
                    .collect();
                let hat = r.algebra_form(&s.module, Side::H, s.chart, 1, 0.7);
                let dd = dd_residual(&s.module, &a, &slots, &hat, &s.pairing)?;
                out.entries.push(CheckEntry::scalar(
                    "proof-steps",
                    "covariant-leibniz",
                    src.params(),
                    &dd,
                ));
                Ok(out)
            })
        })
        .collect())
}

fn gauge_invariance(s: &Scenario) -> Result<Vec<Job<'_>>, SuiteError> {
    let mut cases: Vec<(Source, InterpolationData, GaugeData)> = Vec::new();
    let scenario_pair = InterpolationData::new(&s.module, s.conn0_or_zero(), s.conn1.clone())?;
    if let Some(gd) = &s.gauge {
        cases.push((Source::Scenario("gauge"), scenario_pair.clone(), gd.clone()));
    }
    let mut skipped = false;
    for k in 0..s.trials {
        let mut r = sampler(s, Suite::GaugeInvariance, k);
        let c0 = r.connection(&s.module, s.chart);
        let c1 = r.connection(&s.module, s.chart);
        let interp = InterpolationData::new(&s.module, c0, c1)?;
        match random_gauge(s, &mut r) {
            Some(gd) => cases.push((Source::Trial(k), interp, gd)),
            None => skipped = true,
        }
    }
    if cases.is_empty() && !skipped {
        return Ok(vec![]);
    }
    let mut jobs: Vec<Job<'_>> = cases
        .into_iter()
        .map(|(src, interp, gd)| -> Job<'_> {
            Box::new(move || {
                let mut out = Output::default();
                let conn = interp.conn1();
                let (rf, rg) = curvature_transform_residual(&s.module, conn, &gd)?;
                out.entries.push(CheckEntry::algebra(
                    "gauge-invariance",
                    "fake-curvature-covariance",
                    src.params(),
                    &rf,
                    g_labels(s),
                ));
                out.entries.push(CheckEntry::algebra(
                    "gauge-invariance",
                    "two-curvature-covariance",
                    src.params(),
                    &rg,
                    h_labels(s),
                ));
                let moved = gauge_transform(&s.module, conn, &gd)?;
                let rp = &p_form(&s.module, &moved, &s.pairing)? - &p_form(&s.module, conn, &s.pairing)?;
                out.entries.push(CheckEntry::scalar(
                    "gauge-invariance",
                    "p-form-invariance",
                    src.params(),
                    &rp,
                ));
                let report = action_gauge_invariance(&s.module, &interp, &gd, &s.pairing)?;
                for (name, w, labels) in [
                    ("theta-law", &report.theta, g_labels(s)),
                    ("phi-law", &report.phi, h_labels(s)),
                    ("f-t-law", &report.f_t, g_labels(s)),
                    ("g-t-law", &report.g_t, h_labels(s)),
                ] {
                    out.entries
                        .push(CheckEntry::algebra("gauge-invariance", name, src.params(), w, labels));
                }
                out.entries.push(CheckEntry::scalar(
                    "gauge-invariance",
                    "action-invariance",
                    src.params(),
                    &report.integrand,
                ));
                if !report.integrand.is_zero() {
                    let found = if report.preimage.is_some() { "found" } else { "none" };
                    out.notes.push(format!("PREIMAGE action-invariance residual : {found}"));
                }
                Ok(out)
            })
        })
        .collect();
    if skipped {
        jobs.push(Box::new(|| {
            Ok(Output {
                entries: vec![],
                notes: vec!["NOTE random gauge data unavailable for this module (no matrix representation)".into()],
            })
        }));
    }
    Ok(jobs)
}

fn default_box(s: &Scenario) -> Vec<(Rational, Rational)> {
    s.bounds
        .clone()
        .unwrap_or_else(|| vec![(rat(0, 1), rat(1, 1)); s.chart.dim()])
}

fn eom(s: &Scenario) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = vec![Box::new(move || {
        let res = eom_residuals(&s.module, &s.conn1, &s.pairing)?;
        let mut notes = Vec::new();
        for (label, w) in g_labels(s).iter().zip(&res.g) {
            notes.push(format!("EOM g[{label}] : {}", Residual::of_scalar(w)));
        }
        for (label, w) in h_labels(s).iter().zip(&res.h) {
            notes.push(format!("EOM h[{label}] : {}", Residual::of_scalar(w)));
        }
        if s.chart.dim() == 2 * s.n + 2 {
            let interp = InterpolationData::new(&s.module, s.conn0_or_zero(), s.conn1.clone())?;
            let value = action_value(&s.module, &interp, &s.pairing, &default_box(s))?;
            notes.push(format!("ACTION value : {value}"));
        }
        Ok(Output { entries: vec![], notes })
    })];
    for k in 0..s.trials {
        jobs.push(Box::new(move || {
            // Gauge transforms of the zero connection are flat.
            let mut r = sampler(s, Suite::Eom, k);
            let phi = r.algebra_form(&s.module, Side::H, s.chart, 1, 0.8);
            let Ok(gd) = GaugeData::pure_phi(&s.module, phi) else {
                return Ok(Output::default());
            };
            let flat = gauge_transform(&s.module, &TwoConnection::zero(&s.module, s.chart), &gd)?;
            let res = eom_residuals(&s.module, &flat, &s.pairing)?;
            let entries = res
                .g
                .iter()
                .zip(g_labels(s))
                .map(|(w, l)| (format!("g[{l}]"), w))
                .chain(res.h.iter().zip(h_labels(s)).map(|(w, l)| (format!("h[{l}]"), w)))
                .map(|(slot, w)| {
                    let mut p = Source::Trial(k).params();
                    p.push(("slot".into(), slot));
                    CheckEntry::scalar("eom", "flat-connection", p, w)
                })
                .collect();
            Ok(Output { entries, notes: vec![] })
        }));
    }
    jobs
}

fn random_variation(s: &Scenario, r: &mut Sampler) -> Result<VariationData, SuiteError> {
    let mut form = |side, degree| r.algebra_form(&s.module, side, s.chart, degree, 0.6);
    let (da0, da1) = (form(Side::G, 1), form(Side::G, 1));
    let (db0, db1) = (form(Side::H, 2), form(Side::H, 2));
    Ok(VariationData::new(&s.module, da0, da1, db0, db1)?)
}

fn boundary(s: &Scenario) -> Result<Vec<Job<'_>>, SuiteError> {
    let mut cases: Vec<(Source, InterpolationData, VariationData)> = Vec::new();
    let scenario_pair = InterpolationData::new(&s.module, s.conn0_or_zero(), s.conn1.clone())?;
    let scenario_var = match &s.variation {
        Some(v) => v.clone(),
        None => random_variation(s, &mut sampler(s, Suite::Boundary, usize::MAX))?,
    };
    cases.push((Source::Scenario("pair"), scenario_pair.clone(), scenario_var.clone()));
    for k in 0..s.trials {
        let mut r = sampler(s, Suite::Boundary, k);
        let c0 = r.connection(&s.module, s.chart);
        let c1 = r.connection(&s.module, s.chart);
        let interp = InterpolationData::new(&s.module, c0, c1)?;
        let var = random_variation(s, &mut r)?;
        cases.push((Source::Trial(k), interp, var));
    }
    let mut jobs: Vec<Job<'_>> = cases
        .into_iter()
        .map(|(src, interp, var)| -> Job<'_> {
            Box::new(move || {
                let r = variation_identity_residual(&s.module, &interp, &var, &s.pairing)?;
                let first = variation_residual(&s.module, interp.conn1(), var.da1(), var.db1(), &s.pairing)?;
                let zero = VariationData::zero(&s.module, s.chart);
                let z = boundary_term(&s.module, &interp, &zero, &s.pairing)?;
                Ok(Output {
                    entries: vec![
                        CheckEntry::scalar("boundary", "variation-identity", src.params(), &r),
                        CheckEntry::scalar("boundary", "first-variation", src.params(), &first),
                        CheckEntry::scalar("boundary", "zero-variation", src.params(), &z),
                    ],
                    notes: vec![],
                })
            })
        })
        .collect();
    jobs.push(Box::new(move || {
        let pi = boundary_term(&s.module, &scenario_pair, &scenario_var, &s.pairing)?;
        let notes = boundary_faces(&pi, &default_box(s))?
            .into_iter()
            .map(|f| {
                let status = if f.restricted.is_zero() { "ZERO" } else { "NONZERO" };
                format!("BOUNDARY face x{}={} : {status}", f.coord + 1, f.value)
            })
            .collect();
        Ok(Output { entries: vec![], notes })
    }));
    Ok(jobs)
}

fn jobs_for(s: &Scenario, suite: Suite) -> Result<Vec<Job<'_>>, SuiteError> {
    Ok(match suite {
        Suite::Axioms => axioms(s),
        Suite::Bianchi => bianchi(s),
        Suite::Closedness => closedness(s),
        Suite::Chsas => chsas(s),
        Suite::ChernWeil => chern_weil(s)?,
        Suite::ProofSteps => proof_steps(s)?,
        Suite::GaugeInvariance => gauge_invariance(s)?,
        Suite::Eom => eom(s),
        Suite::Boundary => boundary(s)?,
        Suite::All => {
            let mut all = Vec::new();
            for sub in [
                Suite::Axioms,
                Suite::Bianchi,
                Suite::Closedness,
                Suite::Chsas,
                Suite::ChernWeil,
                Suite::ProofSteps,
                Suite::GaugeInvariance,
                Suite::Eom,
                Suite::Boundary,
            ] {
                if sub == Suite::ChernWeil && s.conn0.is_none() {
                    continue;
                }
                all.extend(jobs_for(s, sub)?);
            }
            all
        }
    })
}

/// Runs a suite. Checks execute concurrently; the report keeps declaration order.
pub fn run_suite(s: &Scenario, suite: Suite) -> Result<Report, SuiteError> {
    let start = Instant::now();
    let jobs = jobs_for(s, suite)?;
    let outputs: Vec<Result<Output, SuiteError>> = jobs.par_iter().map(|job| job()).collect();
    let mut report = Report {
        scenario: s.module_name.clone(),
        n: s.n,
        seed: s.seed,
        ..Report::default()
    };
    for out in outputs {
        let out = out?;
        report.entries.extend(out.entries);
        report.notes.extend(out.notes);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
