//! Conversion of engine data into reference-oracle inputs, and pointwise
//! comparison of the results.
#![allow(dead_code)]

use gauge2::exterior::{covector_indices, ScalarForm, T_VAR};
use gauge2::random::Sampler;
use gauge2::{AlgebraForm, CrossedModule, InvariantPairing};
use gauge2_oracle::{Form, Module, Pairing, Poly, VForm, Q};
use num_traits::Zero;
use std::collections::BTreeSet;

/// Oracle variable count for a chart of dimension `m`: the coordinates plus `t`.
pub fn nvars(m: usize) -> usize {
    m + 1
}

pub fn module(cm: &CrossedModule) -> Module {
    let (dg, dh) = (cm.g().dim(), cm.h().dim());
    Module {
        g_bracket: (0..dg)
            .map(|a| {
                (0..dg)
                    .map(|b| (0..dg).map(|c| cm.g().structure_constant(a, b, c).clone()).collect())
                    .collect()
            })
            .collect(),
        h_bracket: (0..dh)
            .map(|a| {
                (0..dh)
                    .map(|b| (0..dh).map(|c| cm.h().structure_constant(a, b, c).clone()).collect())
                    .collect()
            })
            .collect(),
        action: (0..dg)
            .map(|a| {
                (0..dh)
                    .map(|c| (0..dh).map(|b| cm.action_entry(a, c, b).clone()).collect())
                    .collect()
            })
            .collect(),
        alpha: (0..dh)
            .map(|b| (0..dg).map(|a| cm.alpha_entry(a, b).clone()).collect())
            .collect(),
    }
}

pub fn pairing(p: &InvariantPairing) -> Pairing {
    Pairing {
        arity: p.arity(),
        entries: p.nonzero().iter().cloned().collect(),
    }
}

pub fn form(w: &ScalarForm) -> Form {
    let m = w.chart().dim();
    let nv = nvars(m);
    let mut out = Form::zero(m, nv);
    for (mask, poly) in w.components() {
        let mut p = Poly::zero(nv);
        for (mono, c) in poly.terms() {
            let mut term = Poly::constant(nv, c.clone());
            for i in 0..m {
                for _ in 0..mono.exponent(i) {
                    term = term.mul(&Poly::var(nv, i));
                }
            }
            for _ in 0..mono.exponent(T_VAR) {
                term = term.mul(&Poly::var(nv, m));
            }
            p = p.add(&term);
        }
        out = out.add(&Form::term(m, p, &covector_indices(mask)));
    }
    out
}

pub fn vform(w: &AlgebraForm) -> VForm {
    w.components().iter().map(form).collect()
}

/// `count` random rational points of the chart.
pub fn points(seed: u64, m: usize, count: usize) -> Vec<Vec<Q>> {
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.point(m)).collect()
}

/// Engine and oracle forms take the same value on every frame at every
/// point, with the engine side evaluated by the engine itself.
pub fn agree(engine: &ScalarForm, oracle: &Form, pts: &[Vec<Q>]) -> bool {
    let frames: BTreeSet<Vec<usize>> = engine
        .components()
        .map(|(mask, _)| covector_indices(mask))
        .chain(oracle.components().map(|(i, _)| i.clone()))
        .collect();
    pts.iter().all(|pt| {
        let expected = oracle.eval(pt);
        frames.iter().all(|f| {
            let mine = if f.len() == engine.degree() {
                engine.evaluate(pt, f).expect("parameter-free form")
            } else {
                Q::zero()
            };
            mine == expected.get(f).cloned().unwrap_or_else(Q::zero)
        })
    })
}

pub fn agree_v(engine: &AlgebraForm, oracle: &VForm, pts: &[Vec<Q>]) -> bool {
    engine.components().len() == oracle.len() && engine.components().iter().zip(oracle).all(|(e, o)| agree(e, o, pts))
}
