//! Acceptance criteria, one PASS/FAIL line each. Residuals must vanish exactly.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use gauge2::algebra::matrix::{PolyMatrix, RatMatrix};
use gauge2::algebra::{builtin_pairing, load_builtin, BUILTIN_NAMES};
use gauge2::chsas::{
    ast_form, chern_weil_residual, chsas_form, dd_residual, eval_filled, p_form, proof_step_residual,
    variation_residual, InterpolationData, ProofStep,
};
use gauge2::exterior::term::parse_form;
use gauge2::exterior::Chart;
use gauge2::gauge::{
    alpha_lift, bianchi_residuals, covariant_d, curvature_transform_residual, curvatures, gauge_transform,
    linearized_curvatures, wedge_bracket,
};
use gauge2::random::Sampler;
use gauge2::tgft::{
    action_gauge_invariance, action_value, boundary_term, eom_residuals, variation_identity_residual, VariationData,
};
use gauge2::{rat, AlgebraForm, CrossedModule, GaugeData, InvariantPairing, Rational, ScalarForm, Side, TwoConnection};
use gauge2_cli::report::{emit_report, Format};
use gauge2_cli::scenario::parse_scenario_in;
use gauge2_cli::suite::{run_suite, Suite};
use gauge2_oracle::{Form, VForm, Q};

fn chart(m: usize) -> Chart {
    Chart::new(m).unwrap()
}

fn module(name: &str) -> CrossedModule {
    load_builtin(name).unwrap().0
}

fn basis(cm: &CrossedModule, side: Side, label: &str, text: &str, m: usize) -> AlgebraForm {
    let labels = side.labels(cm);
    let i = labels.iter().position(|l| l == label).unwrap();
    AlgebraForm::basis(side, labels.len(), i, parse_form(text, chart(m), 1, 1).unwrap())
}

fn interp(cm: &CrossedModule, s: &mut Sampler, m: usize) -> InterpolationData {
    let c0 = s.connection(cm, chart(m));
    let c1 = s.connection(cm, chart(m));
    InterpolationData::new(cm, c0, c1).unwrap()
}

/// Tally of a batch of exact checks.
#[derive(Default)]
struct Tally {
    total: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.total += other.total;
        self.failures.extend(other.failures);
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn summary(&self) -> String {
        if self.failures.is_empty() {
            format!("{} exact checks", self.total)
        } else {
            let shown: Vec<&str> = self.failures.iter().take(4).map(String::as_str).collect();
            format!(
                "{}/{} checks nonzero: {}",
                self.failures.len(),
                self.total,
                shown.join("; ")
            )
        }
    }
}

fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T) -> Tally + Send + Sync) -> Tally {
    items.par_iter().map(f).reduce(Tally::default, |mut a, b| {
        a.merge(b);
        a
    })
}

type Criterion = (usize, &'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(t: Tally, elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let late = limit.is_some_and(|l| elapsed > l);
    let mut detail = t.summary();
    if let Some(l) = limit {
        detail.push_str(&format!(", limit {} s", l.as_secs()));
    }
    Outcome {
        passed: t.passed() && !late,
        detail,
    }
}

// 1 ─ axioms

fn axioms() -> Tally {
    let mut t = Tally::default();
    for name in BUILTIN_NAMES {
        let report = module(name).validate();
        t.check(report.passed(), || format!("{name} axioms"));
    }
    for (name, n) in [
        ("poincare2", 1),
        ("abelian_tt", 1),
        ("adjoint_so21", 1),
        ("adjoint_so21", 2),
        ("adjoint_gl2", 1),
        ("adjoint_gl2", 2),
    ] {
        let report = module(name)
            .validate_pairing(&builtin_pairing(name, n).unwrap())
            .unwrap();
        t.check(report.passed(), || format!("{name} pairing n={n}"));
    }
    t
}

// 2 ─ Bianchi identities

fn bianchi() -> Tally {
    let cases: Vec<(&str, usize, u64)> = BUILTIN_NAMES
        .iter()
        .flat_map(|name| {
            [5, 7]
                .into_iter()
                .flat_map(move |m| (0..25).map(move |k| (*name, m, k)))
        })
        .collect();
    par_tally(&cases, |&(name, m, k)| {
        let cm = module(name);
        let conn = Sampler::for_trial(0xB1, k).connection(&cm, chart(m));
        let (r1, r2) = bianchi_residuals(&cm, &conn).unwrap();
        let mut t = Tally::default();
        t.check(r1.is_zero() && r2.is_zero(), || format!("{name} m={m} trial {k}"));
        t
    })
}

// 3, 4 ─ closedness and the potential

const CLOSED_CASES: [(&str, usize, usize); 6] = [
    ("poincare2", 1, 5),
    ("abelian_tt", 1, 5),
    ("adjoint_so21", 1, 5),
    ("adjoint_gl2", 1, 5),
    ("adjoint_so21", 2, 7),
    ("adjoint_gl2", 2, 7),
];

fn closed_trials() -> Vec<(&'static str, usize, usize, u64)> {
    CLOSED_CASES
        .iter()
        .flat_map(|&(name, n, m)| (0..25).map(move |k| (name, n, m, k)))
        .collect()
}

fn closedness() -> Tally {
    par_tally(&closed_trials(), |&(name, n, m, k)| {
        let cm = module(name);
        let p = builtin_pairing(name, n).unwrap();
        let conn = Sampler::for_trial(0xC3, k).connection(&cm, chart(m));
        let mut t = Tally::default();
        t.check(p_form(&cm, &conn, &p).unwrap().d().is_zero(), || {
            format!("{name} n={n} trial {k}")
        });
        t
    })
}

fn zero_a_closed_form(cm: &CrossedModule, p: &InvariantPairing, b: &AlgebraForm) -> ScalarForm {
    let n = p.arity();
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    eval_filled(p, &[], &alpha_lift(cm, b).unwrap(), b)
        .unwrap()
        .scale(&rat(sign, n as i64 + 1))
}

fn potential() -> Tally {
    par_tally(&closed_trials(), |&(name, n, m, k)| {
        let cm = module(name);
        let p = builtin_pairing(name, n).unwrap();
        let conn = Sampler::for_trial(0xC3, k).connection(&cm, chart(m));
        let mut t = Tally::default();
        let c = chsas_form(&cm, &conn, &p).unwrap();
        t.check(c.d() == p_form(&cm, &conn, &p).unwrap(), || {
            format!("{name} n={n} trial {k}")
        });
        let flat = TwoConnection::new(&cm, AlgebraForm::zero_in(&cm, Side::G, chart(m), 1), conn.b().clone()).unwrap();
        t.check(
            chsas_form(&cm, &flat, &p).unwrap() == zero_a_closed_form(&cm, &p, conn.b()),
            || format!("{name} n={n} trial {k} A=0"),
        );
        t
    })
}

// 5 ─ Chern-Weil

fn chern_weil() -> Tally {
    let cases: Vec<(&str, usize, usize, u64)> = [
        ("poincare2", 1, 5),
        ("adjoint_so21", 1, 5),
        ("abelian_tt", 2, 7),
        ("adjoint_gl2", 2, 7),
    ]
    .iter()
    .flat_map(|&(name, n, m)| (0..25).map(move |k| (name, n, m, k)))
    .collect();
    let mut t = par_tally(&cases, |&(name, n, m, k)| {
        let cm = module(name);
        let p = builtin_pairing(name, n).unwrap();
        let data = interp(&cm, &mut Sampler::for_trial(0xC5, k), m);
        let mut t = Tally::default();
        t.check(chern_weil_residual(&cm, &data, &p).unwrap().is_zero(), || {
            format!("{name} n={n} trial {k}")
        });
        let from_zero = InterpolationData::new(&cm, TwoConnection::zero(&cm, chart(m)), data.conn1().clone()).unwrap();
        t.check(
            ast_form(&cm, &from_zero, &p).unwrap() == chsas_form(&cm, data.conn1(), &p).unwrap(),
            || format!("{name} n={n} trial {k} from zero"),
        );
        t
    });
    // The four-dimensional 2-Chern-Simons form of the unit-box example.
    let cm = module("poincare2");
    let p = builtin_pairing("poincare2", 1).unwrap();
    let conn = TwoConnection::new(
        &cm,
        basis(&cm, Side::G, "J1", "1 x2 dx1", 4),
        basis(&cm, Side::H, "P1", "1 x3 dx3 dx4", 4),
    )
    .unwrap();
    let q = chsas_form(&cm, &conn, &p).unwrap();
    t.check(
        q == parse_form("-1/2 x3 dx1 dx2 dx3 dx4", chart(4), 1, 1).unwrap(),
        || format!("2CS form {q}"),
    );
    t
}

// 6 ─ proof steps

fn proof_steps() -> (Tally, String) {
    let steps: [(&str, Option<ProofStep>); 5] = [
        ("Dd", None),
        ("id", Some(ProofStep::ActionTerm)),
        ("11", Some(ProofStep::BianchiAlphaTerm)),
        ("22", Some(ProofStep::CurvatureActionTerm)),
        ("33", Some(ProofStep::AlphaSwapTerm)),
    ];
    let cases: Vec<(&str, usize, usize, u64)> = [("poincare2", 1, 5), ("adjoint_so21", 1, 5), ("adjoint_gl2", 2, 7)]
        .iter()
        .flat_map(|&(name, n, m)| (0..10).map(move |k| (name, n, m, k)))
        .collect();
    let mut t = Tally::default();
    let mut per_step = Vec::new();
    for (label, step) in steps {
        let st = par_tally(&cases, |&(name, n, m, k)| {
            let cm = module(name);
            let p = builtin_pairing(name, n).unwrap();
            let mut s = Sampler::for_trial(0xD6, k);
            let mut t = Tally::default();
            match step {
                None => {
                    let a = s.algebra_form(&cm, Side::G, chart(m), 1, 0.7);
                    let slots: Vec<AlgebraForm> = (0..n)
                        .map(|i| s.algebra_form(&cm, Side::G, chart(m), 1 + i % 2, 0.7))
                        .collect();
                    let hat = s.algebra_form(&cm, Side::H, chart(m), 2, 0.7);
                    let r = dd_residual(&cm, &a, &slots, &hat, &p).unwrap();
                    t.check(r.is_zero(), || format!("Dd {name} trial {k}"));
                }
                Some(step) if n >= step.min_arity() => {
                    let data = interp(&cm, &mut s, m);
                    let r = proof_step_residual(&cm, &data, &p, step).unwrap();
                    t.check(r.is_zero(), || format!("{label} {name} n={n} trial {k}"));
                }
                Some(_) => {}
            }
            t
        });
        per_step.push(format!("{label} {}/{}", st.total - st.failures.len(), st.total));
        t.merge(st);
    }
    (t, per_step.join(", "))
}

// 7 ─ gauge covariance

/// `(1 + s²)/(1 − s²)` and `2s/(1 − s²)`: an exact rational rapidity.
fn boost(axis: usize, s: Rational) -> (RatMatrix, RatMatrix) {
    let one = rat(1, 1);
    let den = &one - &s * &s;
    let ch = (&one + &s * &s) / &den;
    let sh = (rat(2, 1) * &s) / &den;
    let make = |sh: &Rational| {
        let mut m = RatMatrix::identity(3);
        m.set(0, 0, ch.clone());
        m.set(axis, axis, ch.clone());
        m.set(0, axis, sh.clone());
        m.set(axis, 0, sh.clone());
        m
    };
    (make(&sh), make(&-sh.clone()))
}

fn lorentz_boosts() -> Vec<(RatMatrix, RatMatrix)> {
    [
        (1, rat(1, 2)),
        (2, rat(1, 3)),
        (1, rat(-2, 5)),
        (2, rat(3, 7)),
        (1, rat(1, 4)),
        (2, rat(-5, 9)),
    ]
    .into_iter()
    .map(|(axis, s)| boost(axis, s))
    .collect()
}

fn gauge_covariance() -> (Tally, String) {
    let cm = module("poincare2");
    let p = builtin_pairing("poincare2", 1).unwrap();
    let c = chart(5);
    let mut data: Vec<(String, GaugeData)> = Vec::new();
    for (k, (g, ginv)) in lorentz_boosts().into_iter().enumerate() {
        let eta = RatMatrix::from_rows(vec![
            vec![rat(-1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        ]);
        assert_eq!(g.mul(&eta).mul(&g), eta, "boost {k} is not Lorentz");
        let gd = GaugeData::with_adjoint_action(
            &cm,
            g.to_poly(),
            ginv.to_poly(),
            AlgebraForm::zero_in(&cm, Side::H, c, 1),
        )
        .unwrap();
        data.push((format!("boost {k}"), gd));
    }
    for k in 0..6 {
        let phi = Sampler::for_trial(0xE7, k).algebra_form(&cm, Side::H, c, 1, 0.8);
        data.push((format!("phi {k}"), GaugeData::pure_phi(&cm, phi).unwrap()));
    }
    let counts = format!(
        "{} boosts, {} shifts",
        data.iter().filter(|(l, _)| l.starts_with("boost")).count(),
        data.iter().filter(|(l, _)| l.starts_with("phi")).count()
    );
    let t = par_tally(&data, |(label, gd)| {
        let mut t = Tally::default();
        for k in 0..3 {
            let conn = Sampler::for_trial(0xE8, k).connection(&cm, c);
            let (rf, rg) = curvature_transform_residual(&cm, &conn, gd).unwrap();
            t.check(rf.is_zero() && rg.is_zero(), || format!("{label} curvature trial {k}"));
            let moved = gauge_transform(&cm, &conn, gd).unwrap();
            t.check(
                p_form(&cm, &moved, &p).unwrap() == p_form(&cm, &conn, &p).unwrap(),
                || format!("{label} p-form trial {k}"),
            );
        }
        t
    });
    (t, counts)
}

// 8 ─ variations

fn random_variation(cm: &CrossedModule, s: &mut Sampler, m: usize) -> VariationData {
    let c = chart(m);
    VariationData::new(
        cm,
        s.algebra_form(cm, Side::G, c, 1, 0.6),
        s.algebra_form(cm, Side::G, c, 1, 0.6),
        s.algebra_form(cm, Side::H, c, 2, 0.6),
        s.algebra_form(cm, Side::H, c, 2, 0.6),
    )
    .unwrap()
}

/// Flat connections: gauge transforms of zero by unipotent, constant and
/// shift gauge data.
fn flat_connection(cm: &CrossedModule, s: &mut Sampler, m: usize, kind: usize) -> TwoConnection {
    let c = chart(m);
    let phi = s.algebra_form(cm, Side::H, c, 1, 0.7);
    let gd = match kind % 3 {
        0 => {
            let rep = cm.g().matrix_rep().unwrap();
            let nil = if cm.name() == "adjoint_gl2" {
                rep[1].clone()
            } else {
                rep[0].add(&rep[1])
            };
            let (g, ginv) = s.unipotent_group_element(cm, c, &nil).unwrap();
            GaugeData::with_adjoint_action(cm, g, ginv, phi).unwrap()
        }
        1 => {
            let (g, ginv) = s.constant_group_element(cm).unwrap();
            GaugeData::with_adjoint_action(cm, g.to_poly(), ginv.to_poly(), phi).unwrap()
        }
        _ => GaugeData::pure_phi(cm, phi).unwrap(),
    };
    gauge_transform(cm, &TwoConnection::zero(cm, c), &gd).unwrap()
}

fn variations() -> Tally {
    let cases: Vec<(&str, usize, u64)> = [("poincare2", 4), ("poincare2", 5), ("adjoint_so21", 5)]
        .iter()
        .flat_map(|&(name, m)| (0..10).map(move |k| (name, m, k)))
        .collect();
    let mut t = par_tally(&cases, |&(name, m, k)| {
        let cm = module(name);
        let p = builtin_pairing(name, 1).unwrap();
        let mut s = Sampler::for_trial(0xF8, k);
        let data = interp(&cm, &mut s, m);
        let var = random_variation(&cm, &mut s, m);
        let mut t = Tally::default();
        let r = variation_residual(&cm, data.conn1(), var.da1(), var.db1(), &p).unwrap();
        t.check(r.is_zero(), || format!("first variation {name} m={m} trial {k}"));
        let r = variation_identity_residual(&cm, &data, &var, &p).unwrap();
        t.check(r.is_zero(), || format!("action variation {name} m={m} trial {k}"));
        let zero = VariationData::zero(&cm, chart(m));
        t.check(boundary_term(&cm, &data, &zero, &p).unwrap().is_zero(), || {
            format!("boundary at zero variation {name} m={m} trial {k}")
        });
        t
    });
    let flat: Vec<(&str, usize, usize, u64)> = [("poincare2", 1, 4), ("adjoint_so21", 1, 4), ("adjoint_gl2", 2, 6)]
        .iter()
        .flat_map(|&(name, n, m)| (0..10).map(move |k| (name, n, m, k)))
        .collect();
    t.merge(par_tally(&flat, |&(name, n, m, k)| {
        let cm = module(name);
        let p = builtin_pairing(name, n).unwrap();
        let conn = flat_connection(&cm, &mut Sampler::for_trial(0xF9, k), m, k as usize);
        let mut t = Tally::default();
        t.check(curvatures(&cm, &conn).unwrap().is_zero(), || {
            format!("{name} trial {k} not flat")
        });
        t.check(eom_residuals(&cm, &conn, &p).unwrap().is_zero(), || {
            format!("field equations {name} trial {k}")
        });
        t
    }));
    t
}

// 9 ─ oracle equivalence

fn oracle_module(cm: &CrossedModule) -> gauge2_oracle::Module {
    support::module(cm)
}

fn ozero_v(dim: usize, m: usize) -> VForm {
    gauge2_oracle::vzero(dim, m, support::nvars(m))
}

/// Derivative at zero in the oracle's extra variable, applied componentwise.
fn odiff_at_zero(w: &Form, m: usize) -> Form {
    w.components().fold(Form::zero(m, support::nvars(m)), |acc, (idx, p)| {
        acc.add(&Form::term(
            m,
            p.partial(m).substitute(m, &Q::from_integer(0.into())),
            idx,
        ))
    })
}

fn oracle_checks() -> Tally {
    let mut t = Tally::default();
    let pts = |seed: u64, m: usize| support::points(seed, m, 5);

    // Pairing tensors.
    {
        let cm = module("poincare2");
        let md = oracle_module(&cm);
        let antidiagonal =
            InvariantPairing::from_fn(1, 3, 3, |g, b| if g[0] + b == 2 { rat(1, 1) } else { rat(0, 1) }).unwrap();
        let tensor = |c: usize, b: usize| if c + b == 2 { rat(1, 1) } else { rat(0, 1) };
        let mut oracle_nonzero = false;
        for i in 0..3 {
            for j in 0..3 {
                for b in 0..3 {
                    let mut r = rat(0, 1);
                    for c in 0..3 {
                        r += &md.g_bracket[i][j][c] * tensor(c, b);
                        r += &md.action[i][b][c] * tensor(j, c);
                    }
                    oracle_nonzero |= r != rat(0, 1);
                }
            }
        }
        let engine_fails = !cm.validate_pairing(&antidiagonal).unwrap().passed();
        t.check(oracle_nonzero && engine_fails, || "antidiagonal pairing".into());
        for name in ["adjoint_so21", "adjoint_gl2"] {
            let cm = module(name);
            let mats: Vec<gauge2_oracle::Mat> = cm
                .g()
                .matrix_rep()
                .unwrap()
                .iter()
                .map(|m| {
                    (0..m.rows())
                        .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
                        .collect()
                })
                .collect();
            for n in [1, 2] {
                let mine = support::pairing(&cm.pairing_from_trace(n).unwrap());
                t.check(
                    mine.entries == gauge2_oracle::trace_pairing(&mats, &mats, n).entries,
                    || format!("{name} trace n={n}"),
                );
            }
            t.check(cm.validate().passed(), || format!("{name} constructed module"));
        }
    }

    // Wedge against the shuffle expansion.
    for k in 0..5 {
        let mut s = Sampler::for_trial(0x91, k);
        let x = s.scalar_form(chart(5), (k % 3) as usize, 3);
        let y = s.scalar_form(chart(5), 2, 3);
        let ox = support::form(&x).wedge(&support::form(&y));
        t.check(support::agree(&x.wedge(&y).unwrap(), &ox, &pts(k, 5)), || {
            format!("wedge trial {k}")
        });
        t.check(support::agree(&x.d(), &support::form(&x).d(), &pts(k, 5)), || {
            format!("d trial {k}")
        });
    }

    // Graded bracket of degree (1, 2) forms.
    {
        let cm = module("adjoint_so21");
        let md = oracle_module(&cm);
        for k in 0..5 {
            let mut s = Sampler::for_trial(0x92, k);
            let x = s.algebra_form(&cm, Side::G, chart(5), 1, 0.7);
            let y = s.algebra_form(&cm, Side::G, chart(5), 2, 0.7);
            let o = gauge2_oracle::bracket_g(&md, &support::vform(&x), &support::vform(&y));
            t.check(
                support::agree_v(&wedge_bracket(&cm, &x, &y).unwrap(), &o, &pts(k, 5)),
                || format!("bracket trial {k}"),
            );
        }
    }

    let cm = module("poincare2");
    let md = oracle_module(&cm);
    let p = builtin_pairing("poincare2", 1).unwrap();
    let op = support::pairing(&p);

    // Covariant derivative with a single action term.
    {
        let a = basis(&cm, Side::G, "J0", "1 x2 dx1", 4);
        let w = basis(&cm, Side::H, "P1", "1 x4 dx3", 4);
        let (av, wv) = (support::vform(&a), support::vform(&w));
        let o = gauge2_oracle::vadd(&gauge2_oracle::vd(&wv), &gauge2_oracle::act(&md, &av, &wv));
        t.check(
            support::agree_v(&covariant_d(&cm, &a, &w).unwrap(), &o, &pts(3, 4)),
            || "covariant d example".into(),
        );
    }

    // Curvatures, the five-form and its potential on the m = 5 example.
    {
        let a = basis(&cm, Side::G, "J1", "1 x2 dx1", 5);
        let b = basis(&cm, Side::H, "P1", "1 x4 dx3 dx5", 5);
        let conn = TwoConnection::new(&cm, a, b).unwrap();
        let cp = curvatures(&cm, &conn).unwrap();
        let (of, og) = gauge2_oracle::curvatures(&md, &support::vform(conn.a()), &support::vform(conn.b()));
        t.check(
            support::agree_v(&cp.f, &of, &pts(4, 5)) && support::agree_v(&cp.g, &og, &pts(4, 5)),
            || "curvature example".into(),
        );
        t.check(cp.f == basis(&cm, Side::G, "J1", "-1 dx1 dx2", 5), || {
            "F example".into()
        });
        t.check(cp.g == basis(&cm, Side::H, "P1", "-1 dx3 dx4 dx5", 5), || {
            "G example".into()
        });
        let pf = p_form(&cm, &conn, &p).unwrap();
        let opf = gauge2_oracle::p_form(&md, &op, &support::vform(conn.a()), &support::vform(conn.b()));
        t.check(support::agree(&pf, &opf, &pts(5, 5)), || "p-form example".into());
        t.check(
            pf == parse_form("1 dx1 dx2 dx3 dx4 dx5", chart(5), 1, 1).unwrap(),
            || "p-form value".into(),
        );
        t.check(
            support::agree(&pf.d(), &opf.d(), &pts(5, 5)) && opf.d().is_zero(),
            || "closedness example".into(),
        );
        let c = chsas_form(&cm, &conn, &p).unwrap();
        let oc = gauge2_oracle::ast_form(
            &md,
            &op,
            5,
            &ozero_v(3, 5),
            &ozero_v(3, 5),
            &support::vform(conn.a()),
            &support::vform(conn.b()),
        );
        t.check(support::agree(&c, &oc, &pts(6, 5)) && c.d() == pf, || {
            "potential example".into()
        });
    }

    // Bianchi residuals, evaluated pointwise by the oracle.
    for k in 0..5 {
        let conn = Sampler::for_trial(0x93, k).connection(&cm, chart(5));
        let (av, bv) = (support::vform(conn.a()), support::vform(conn.b()));
        let (of, og) = gauge2_oracle::curvatures(&md, &av, &bv);
        let o1 = gauge2_oracle::vadd(
            &gauge2_oracle::vadd(&gauge2_oracle::vd(&of), &gauge2_oracle::bracket_g(&md, &av, &of)),
            &gauge2_oracle::alpha(&md, &og),
        );
        let o2 = gauge2_oracle::vsub(
            &gauge2_oracle::vadd(&gauge2_oracle::vd(&og), &gauge2_oracle::act(&md, &av, &og)),
            &gauge2_oracle::act(&md, &of, &bv),
        );
        let (r1, r2) = bianchi_residuals(&cm, &conn).unwrap();
        t.check(
            support::agree_v(&r1, &o1, &pts(k, 5)) && support::agree_v(&r2, &o2, &pts(k, 5)),
            || format!("bianchi trial {k}"),
        );
        t.check(r1.is_zero() && r2.is_zero(), || format!("bianchi zero trial {k}"));
    }

    // Linearized curvatures.
    for k in 0..5 {
        let mut s = Sampler::for_trial(0x94, k);
        let conn = s.connection(&cm, chart(5));
        let da = s.algebra_form(&cm, Side::G, chart(5), 1, 0.6);
        let db = s.algebra_form(&cm, Side::H, chart(5), 2, 0.6);
        let (av, bv, dav, dbv) = (
            support::vform(conn.a()),
            support::vform(conn.b()),
            support::vform(&da),
            support::vform(&db),
        );
        let of = gauge2_oracle::vsub(
            &gauge2_oracle::vadd(&gauge2_oracle::vd(&dav), &gauge2_oracle::bracket_g(&md, &av, &dav)),
            &gauge2_oracle::alpha(&md, &dbv),
        );
        let og = gauge2_oracle::vadd(
            &gauge2_oracle::vadd(&gauge2_oracle::vd(&dbv), &gauge2_oracle::act(&md, &av, &dbv)),
            &gauge2_oracle::act(&md, &dav, &bv),
        );
        let (df, dg) = linearized_curvatures(&cm, &conn, &da, &db).unwrap();
        t.check(
            support::agree_v(&df, &of, &pts(k, 5)) && support::agree_v(&dg, &og, &pts(k, 5)),
            || format!("linearization trial {k}"),
        );
    }

    // Gauge transforms: constant boosts with φ = 0, and pure shifts.
    let constant_mat = |m: &PolyMatrix| -> gauge2_oracle::Mat {
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| m.get(i, j).coefficient(gauge2::exterior::Monomial::ONE))
                    .collect()
            })
            .collect()
    };
    let boosts = lorentz_boosts();
    for k in 0..10u64 {
        let c = chart(4);
        let mut s = Sampler::for_trial(0x95, k);
        let gd = if k < 5 {
            let (g, ginv) = &boosts[k as usize];
            GaugeData::with_adjoint_action(
                &cm,
                g.to_poly(),
                ginv.to_poly(),
                AlgebraForm::zero_in(&cm, Side::H, c, 1),
            )
            .unwrap()
        } else {
            GaugeData::pure_phi(&cm, s.algebra_form(&cm, Side::H, c, 1, 0.8)).unwrap()
        };
        let data = interp(&cm, &mut s, 4);
        let transform = |conn: &TwoConnection| {
            gauge2_oracle::gauge_transform_constant(
                &md,
                &constant_mat(gd.adjoint()),
                &constant_mat(gd.gact()),
                &support::vform(conn.a()),
                &support::vform(conn.b()),
                &support::vform(gd.phi()),
            )
        };
        let (a1, b1) = transform(data.conn1());
        let (a0, b0) = transform(data.conn0());
        let moved = gauge_transform(&cm, data.conn1(), &gd).unwrap();
        t.check(
            support::agree_v(moved.a(), &a1, &pts(k, 4)) && support::agree_v(moved.b(), &b1, &pts(k, 4)),
            || format!("gauge transform trial {k}"),
        );
        let (rf, rg) = curvature_transform_residual(&cm, data.conn1(), &gd).unwrap();
        t.check(rf.is_zero() && rg.is_zero(), || format!("covariance trial {k}"));
        // Invariance of the lagrangian, recomputed entirely by the oracle.
        let v = support::vform;
        let (c0, c1) = (data.conn0(), data.conn1());
        let before = gauge2_oracle::ast_form(&md, &op, 4, &v(c0.a()), &v(c0.b()), &v(c1.a()), &v(c1.b()));
        let after = gauge2_oracle::ast_form(&md, &op, 4, &a0, &b0, &a1, &b1);
        let report = action_gauge_invariance(&cm, &data, &gd, &p).unwrap();
        t.check(
            support::agree(&report.integrand, &after.sub(&before), &pts(k, 4)),
            || format!("action invariance trial {k}"),
        );
        t.check(report.passed(), || format!("action invariance zero trial {k}"));
    }

    // Chern-Weil on random pairs and the transgression from zero.
    for k in 0..5 {
        let data = interp(&cm, &mut Sampler::for_trial(0x96, k), 5);
        let v = support::vform;
        let (c0, c1) = (data.conn0(), data.conn1());
        let oq = gauge2_oracle::ast_form(&md, &op, 5, &v(c0.a()), &v(c0.b()), &v(c1.a()), &v(c1.b()));
        let q = ast_form(&cm, &data, &p).unwrap();
        t.check(support::agree(&q, &oq, &pts(k, 5)), || {
            format!("transgression form trial {k}")
        });
        let op1 = gauge2_oracle::p_form(&md, &op, &v(c1.a()), &v(c1.b()));
        let op0 = gauge2_oracle::p_form(&md, &op, &v(c0.a()), &v(c0.b()));
        t.check(support::agree(&q.d(), &op1.sub(&op0), &pts(k, 5)), || {
            format!("chern-weil trial {k}")
        });
        let oc = gauge2_oracle::ast_form(&md, &op, 5, &ozero_v(3, 5), &ozero_v(3, 5), &v(c1.a()), &v(c1.b()));
        t.check(
            support::agree(&chsas_form(&cm, c1, &p).unwrap(), &oc, &pts(k, 5)),
            || format!("ast from zero trial {k}"),
        );
    }

    // The unit-box action value by independent integration.
    {
        let m = 4;
        let conn1 = TwoConnection::new(
            &cm,
            basis(&cm, Side::G, "J1", "1 x2 dx1", m),
            basis(&cm, Side::H, "P1", "1 x3 dx3 dx4", m),
        )
        .unwrap();
        let data = InterpolationData::new(&cm, TwoConnection::zero(&cm, chart(m)), conn1.clone()).unwrap();
        let value = action_value(&cm, &data, &p, &vec![(rat(0, 1), rat(1, 1)); m]).unwrap();
        let oq = gauge2_oracle::ast_form(
            &md,
            &op,
            m,
            &ozero_v(3, m),
            &ozero_v(3, m),
            &support::vform(conn1.a()),
            &support::vform(conn1.b()),
        );
        let top = oq
            .components()
            .find(|(i, _)| **i == vec![0, 1, 2, 3])
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| gauge2_oracle::Poly::zero(m + 1));
        let integrated = (0..m).fold(top, |acc, v| acc.integrate_unit(v)).eval(&[]);
        t.check(value == integrated && value == rat(-1, 4), || {
            format!("action value {value} vs {integrated}")
        });
    }

    // Field equations contract the curvature with the pairing.
    for k in 0..5 {
        let conn = Sampler::for_trial(0x97, k).connection(&cm, chart(4));
        let (of, og) = gauge2_oracle::curvatures(&md, &support::vform(conn.a()), &support::vform(conn.b()));
        let eom = eom_residuals(&cm, &conn, &p).unwrap();
        let unit = |dim: usize, i: usize| -> VForm {
            (0..dim)
                .map(|j| {
                    let c = if i == j { 1 } else { 0 };
                    Form::term(4, gauge2_oracle::Poly::constant(5, Q::from_integer(c.into())), &[])
                })
                .collect()
        };
        for b in 0..3 {
            let oh = gauge2_oracle::pair(&op, &[&of], &unit(3, b));
            t.check(support::agree(&eom.h[b], &oh, &pts(k, 4)), || {
                format!("h field equation {b} trial {k}")
            });
            let ogr = gauge2_oracle::pair(&op, &[&unit(3, b)], &og);
            t.check(support::agree(&eom.g[b], &ogr, &pts(k, 4)), || {
                format!("g field equation {b} trial {k}")
            });
        }
    }

    // Fake-flat abelian connection: B = dA.
    {
        let ab = module("abelian_tt");
        let mda = oracle_module(&ab);
        let pa = builtin_pairing("abelian_tt", 1).unwrap();
        for k in 0..5 {
            let a = Sampler::for_trial(0x98, k).algebra_form(&ab, Side::G, chart(4), 1, 1.0);
            let b = a.d().relabel(Side::H);
            let conn = TwoConnection::new(&ab, a, b).unwrap();
            let (of, _) = gauge2_oracle::curvatures(&mda, &support::vform(conn.a()), &support::vform(conn.b()));
            let eom = eom_residuals(&ab, &conn, &pa).unwrap();
            let cp = curvatures(&ab, &conn).unwrap();
            t.check(support::agree_v(&cp.f, &of, &pts(k, 4)) && cp.f.is_zero(), || {
                format!("fake-flat trial {k}")
            });
            t.check(eom.h.iter().all(ScalarForm::is_zero), || {
                format!("fake-flat field equations trial {k}")
            });
        }
    }

    // Boundary term and first variation at n = 1.
    for k in 0..5 {
        let m = 4;
        let mut s = Sampler::for_trial(0x99, k);
        let data = interp(&cm, &mut s, m);
        let var = random_variation(&cm, &mut s, m);
        let v = support::vform;
        let (c0, c1) = (data.conn0(), data.conn1());
        let ob = gauge2_oracle::boundary_term(
            &md,
            &op,
            m,
            (&v(c0.a()), &v(c0.b()), &v(c1.a()), &v(c1.b())),
            (&v(var.da0()), &v(var.db0()), &v(var.da1()), &v(var.db1())),
        );
        t.check(
            support::agree(&boundary_term(&cm, &data, &var, &p).unwrap(), &ob, &pts(k, m)),
            || format!("boundary trial {k}"),
        );

        // δ𝓟 as the derivative in an auxiliary variable (the oracle t slot).
        let e = gauge2_oracle::Poly::var(m + 1, m);
        let a_e = gauge2_oracle::vadd(&v(c1.a()), &gauge2_oracle::vmul_poly(&v(var.da1()), &e));
        let b_e = gauge2_oracle::vadd(&v(c1.b()), &gauge2_oracle::vmul_poly(&v(var.db1()), &e));
        let delta = odiff_at_zero(&gauge2_oracle::p_form(&md, &op, &a_e, &b_e), m);
        let (of, og) = gauge2_oracle::curvatures(&md, &v(c1.a()), &v(c1.b()));
        let pot = gauge2_oracle::pair(&op, &[&v(var.da1())], &og).add(&gauge2_oracle::pair(&op, &[&of], &v(var.db1())));
        t.check(
            support::agree(&ScalarForm::zero(chart(m), 5), &delta.sub(&pot.d()), &pts(k, m)),
            || format!("first variation trial {k}"),
        );
        t.check(
            variation_identity_residual(&cm, &data, &var, &p).unwrap().is_zero(),
            || format!("action variation trial {k}"),
        );
    }
    t
}

// 10 ─ CLI determinism

fn scenario_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scenario"))
        .collect();
    files.sort();
    files
}

fn cli_determinism() -> (Tally, String) {
    let files = scenario_files();
    let mut t = Tally::default();
    for path in &files {
        let text = std::fs::read_to_string(path).unwrap();
        let scenario = parse_scenario_in(&text, path.parent().unwrap()).unwrap();
        let first = run_suite(&scenario, Suite::All).unwrap();
        let second = run_suite(&scenario, Suite::All).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        t.check(first.passed(), || format!("{name} failed"));
        t.check(
            emit_report(&first, Format::Records) == emit_report(&second, Format::Records),
            || format!("{name} records differ"),
        );
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_gauge2"))
                .args(["--suite", "all", "--format", "records", "--scenario"])
                .arg(path)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        t.check(a.status.success() && b.status.success(), || {
            format!("{name} exit {:?}", a.status.code())
        });
        t.check(
            a.stdout == b.stdout && a.stdout == emit_report(&first, Format::Records).into_bytes(),
            || format!("{name} binary output differs"),
        );
    }
    (t, format!("{} scenarios", files.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "crossed-module and pairing axioms",
            Box::new(|| {
                let start = Instant::now();
                let t = axioms();
                within(t, start.elapsed(), Some(Duration::from_secs(1)))
            }),
        ),
        (
            2,
            "2-Bianchi identities",
            Box::new(|| {
                let start = Instant::now();
                let t = bianchi();
                within(t, start.elapsed(), Some(Duration::from_secs(30)))
            }),
        ),
        (
            3,
            "closedness of the characteristic form",
            Box::new(|| {
                let start = Instant::now();
                let t = closedness();
                within(t, start.elapsed(), Some(Duration::from_secs(60)))
            }),
        ),
        (
            4,
            "potential property and the A=0 closed form",
            Box::new(|| within(potential(), Duration::ZERO, None)),
        ),
        (
            5,
            "higher Chern-Weil theorem",
            Box::new(|| within(chern_weil(), Duration::ZERO, None)),
        ),
        (
            6,
            "proof-step identities",
            Box::new(|| {
                let (t, per_step) = proof_steps();
                let mut o = within(t, Duration::ZERO, None);
                o.detail = format!("{per_step}; {}", o.detail);
                o
            }),
        ),
        (
            7,
            "gauge covariance",
            Box::new(|| {
                let (t, counts) = gauge_covariance();
                let mut o = within(t, Duration::ZERO, None);
                o.detail = format!("{counts}; {}", o.detail);
                o
            }),
        ),
        (
            8,
            "variation identities and field equations",
            Box::new(|| within(variations(), Duration::ZERO, None)),
        ),
        (
            9,
            "oracle equivalence",
            Box::new(|| within(oracle_checks(), Duration::ZERO, None)),
        ),
        (
            10,
            "CLI determinism",
            Box::new(|| {
                let (t, count) = cli_determinism();
                let mut o = within(t, Duration::ZERO, None);
                o.detail = format!("{count}; {}", o.detail);
                o
            }),
        ),
    ];
    let mut failed = 0;
    for (k, title, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {k:>2} {status} {title} ({}, {:.2} s)",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
