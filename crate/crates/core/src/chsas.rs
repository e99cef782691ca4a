//! The invariant form `𝓟₂ₙ₊₃ = ⟨𝓕ⁿ, 𝓖⟩`, its 2ChSAS potential, the 2AST
//! transgression form between two 2-connections, and the identities used
//! to prove the higher Chern-Weil theorem.
//!
//! The arity `n` is always taken from the pairing.

use crate::algebra::{CrossedModule, InvariantPairing};
use crate::exterior::{Polynomial, ScalarForm};
use crate::gauge::{
    alpha_lift, covariant_d, curvatures, half_bracket_square, linearized_curvatures, wedge_act, AlgebraForm,
    CurvaturePair, Side, TwoConnection,
};
use crate::{rat, Error};

/// `Σ T_{a₁…aₙ b} gs₁^{a₁} ∧ … ∧ gsₙ^{aₙ} ∧ hv^b`, with no signs beyond
/// those of the scalar wedge.
pub fn invariant_eval(p: &InvariantPairing, gs: &[&AlgebraForm], hv: &AlgebraForm) -> Result<ScalarForm, Error> {
    let n = p.arity();
    if gs.len() != n {
        return Err(Error::ArityMismatch {
            arity: n,
            found: gs.len(),
        });
    }
    for g in gs {
        if g.side() != Side::G {
            return Err(Error::SideMismatch {
                expected: Side::G,
                found: g.side(),
            });
        }
        if g.dim() != p.dim_g() {
            return Err(Error::DimensionMismatch {
                what: "pairing g-slot",
                expected: p.dim_g(),
                found: g.dim(),
            });
        }
        if g.chart() != hv.chart() {
            return Err(Error::ChartMismatch(hv.chart().dim(), g.chart().dim()));
        }
    }
    if hv.side() != Side::H {
        return Err(Error::SideMismatch {
            expected: Side::H,
            found: hv.side(),
        });
    }
    if hv.dim() != p.dim_h() {
        return Err(Error::DimensionMismatch {
            what: "pairing h-slot",
            expected: p.dim_h(),
            found: hv.dim(),
        });
    }
    let chart = hv.chart();
    let degree = gs.iter().map(|g| g.degree()).sum::<usize>() + hv.degree();
    let mut total = ScalarForm::zero(chart, degree);
    // Prefix wedges of the previous entry, reused while indices agree.
    let mut prefix_idx: Vec<usize> = Vec::new();
    let mut prefix: Vec<ScalarForm> = vec![ScalarForm::constant(chart, rat(1, 1))];
    for (idx, value) in p.nonzero() {
        if (0..n).any(|i| gs[i].component(idx[i]).is_zero()) || hv.component(idx[n]).is_zero() {
            continue;
        }
        let common = prefix_idx.iter().zip(idx).take_while(|(a, b)| a == b).count();
        prefix.truncate(common + 1);
        prefix_idx.truncate(common);
        for i in common..n {
            let next = prefix[i].wedge(gs[i].component(idx[i]))?;
            prefix.push(next);
            prefix_idx.push(idx[i]);
        }
        let last = &prefix[n];
        if last.is_zero() {
            continue;
        }
        total += &last.wedge(hv.component(idx[n]))?.scale(value);
    }
    Ok(total)
}

/// `⟨first…, fill, …, fill; hv⟩` with `fill` occupying the remaining slots.
pub fn eval_filled(
    p: &InvariantPairing,
    first: &[&AlgebraForm],
    fill: &AlgebraForm,
    hv: &AlgebraForm,
) -> Result<ScalarForm, Error> {
    let n = p.arity();
    if first.len() > n {
        return Err(Error::ArityMismatch {
            arity: n,
            found: first.len(),
        });
    }
    let mut slots: Vec<&AlgebraForm> = first.to_vec();
    slots.resize(n, fill);
    invariant_eval(p, &slots, hv)
}

/// `𝓟₂ₙ₊₃ = ⟨𝓕ⁿ, 𝓖⟩`.
pub fn p_form(cm: &CrossedModule, conn: &TwoConnection, p: &InvariantPairing) -> Result<ScalarForm, Error> {
    let CurvaturePair { f, g } = curvatures(cm, conn)?;
    eval_filled(p, &[], &f, &g)
}

/// Rescaling family `A_t = tA`, `B_t = tB`:
/// `𝓕_t = t𝓕 + (t² − t)·½A∧^{[,]}A`, `𝓖_t = t𝓖 + (t² − t)A∧^▷B`.
pub fn t_family(cm: &CrossedModule, conn: &TwoConnection) -> Result<CurvaturePair, Error> {
    let CurvaturePair { f, g } = curvatures(cm, conn)?;
    let t = Polynomial::t();
    let quad = &(&t * &t) - &t;
    let f_t = &f.mul_poly(&t) + &half_bracket_square(cm, conn.a())?.mul_poly(&quad);
    let g_t = &g.mul_poly(&t) + &wedge_act(cm, conn.a(), conn.b())?.mul_poly(&quad);
    Ok(CurvaturePair { f: f_t, g: g_t })
}

/// `𝓒 = ∫₀¹ dt { n⟨A ∧ 𝓕_t^{n−1}, 𝓖_t⟩ + ⟨𝓕_tⁿ, B⟩ }`.
pub fn chsas_form(cm: &CrossedModule, conn: &TwoConnection, p: &InvariantPairing) -> Result<ScalarForm, Error> {
    let CurvaturePair { f: f_t, g: g_t } = t_family(cm, conn)?;
    let n = p.arity();
    let first = eval_filled(p, &[conn.a()], &f_t, &g_t)?.scale(&rat(n as i64, 1));
    let second = eval_filled(p, &[], &f_t, conn.b())?;
    Ok((&first + &second).integrate_t())
}

/// Linear interpolation between two 2-connections.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationData {
    conn0: TwoConnection,
    conn1: TwoConnection,
    theta: AlgebraForm,
    phi: AlgebraForm,
    a_t: AlgebraForm,
    b_t: AlgebraForm,
}

impl InterpolationData {
    pub fn new(cm: &CrossedModule, conn0: TwoConnection, conn1: TwoConnection) -> Result<Self, Error> {
        if conn0.chart() != conn1.chart() {
            return Err(Error::ChartMismatch(conn0.chart().dim(), conn1.chart().dim()));
        }
        // Re-validate shapes against this module.
        TwoConnection::new(cm, conn0.a().clone(), conn0.b().clone())?;
        TwoConnection::new(cm, conn1.a().clone(), conn1.b().clone())?;
        let theta = conn1.a() - conn0.a();
        let phi = conn1.b() - conn0.b();
        let t = Polynomial::t();
        let a_t = conn0.a() + &theta.mul_poly(&t);
        let b_t = conn0.b() + &phi.mul_poly(&t);
        Ok(InterpolationData {
            conn0,
            conn1,
            theta,
            phi,
            a_t,
            b_t,
        })
    }

    pub fn conn0(&self) -> &TwoConnection {
        &self.conn0
    }

    pub fn conn1(&self) -> &TwoConnection {
        &self.conn1
    }

    /// `θ = A₁ − A₀`.
    pub fn theta(&self) -> &AlgebraForm {
        &self.theta
    }

    /// `Φ = B₁ − B₀`.
    pub fn phi(&self) -> &AlgebraForm {
        &self.phi
    }

    pub fn a_t(&self) -> &AlgebraForm {
        &self.a_t
    }

    pub fn b_t(&self) -> &AlgebraForm {
        &self.b_t
    }

    /// `(A_t, B_t)` as a connection with t-dependent coefficients.
    pub fn conn_t(&self) -> TwoConnection {
        TwoConnection::new_unchecked(self.a_t.clone(), self.b_t.clone())
    }

    /// `(𝓕_t, 𝓖_t)` of the interpolating connection.
    pub fn curvatures_t(&self, cm: &CrossedModule) -> Result<CurvaturePair, Error> {
        curvatures(cm, &self.conn_t())
    }
}

/// `𝓠 = ∫₀¹ dt { n⟨θ ∧ 𝓕_t^{n−1}, 𝓖_t⟩ + ⟨𝓕_tⁿ, Φ⟩ }`.
pub fn ast_form(cm: &CrossedModule, interp: &InterpolationData, p: &InvariantPairing) -> Result<ScalarForm, Error> {
    let CurvaturePair { f: f_t, g: g_t } = interp.curvatures_t(cm)?;
    let n = p.arity();
    let first = eval_filled(p, &[interp.theta()], &f_t, &g_t)?.scale(&rat(n as i64, 1));
    let second = eval_filled(p, &[], &f_t, interp.phi())?;
    Ok((&first + &second).integrate_t())
}

/// `𝓟⁽¹⁾ − 𝓟⁽⁰⁾ − d𝓠`.
pub fn chern_weil_residual(
    cm: &CrossedModule,
    interp: &InterpolationData,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    let p1 = p_form(cm, interp.conn1(), p)?;
    let p0 = p_form(cm, interp.conn0(), p)?;
    Ok(&(&p1 - &p0) - &ast_form(cm, interp, p)?.d())
}

/// `n⟨δ𝓕 ∧ 𝓕^{n−1}, 𝓖⟩ + ⟨𝓕ⁿ, δ𝓖⟩ − d(n⟨δA ∧ 𝓕^{n−1}, 𝓖⟩ + ⟨𝓕ⁿ, δB⟩)`.
pub fn variation_residual(
    cm: &CrossedModule,
    conn: &TwoConnection,
    da: &AlgebraForm,
    db: &AlgebraForm,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    let n = rat(p.arity() as i64, 1);
    let CurvaturePair { f, g } = curvatures(cm, conn)?;
    let (df, dg) = linearized_curvatures(cm, conn, da, db)?;
    let delta_p = &eval_filled(p, &[&df], &f, &g)?.scale(&n) + &eval_filled(p, &[], &f, &dg)?;
    let potential = &eval_filled(p, &[da], &f, &g)?.scale(&n) + &eval_filled(p, &[], &f, db)?;
    Ok(&delta_p - &potential.d())
}

/// `⟨D(A₁ ∧ … ∧ Aₙ, B̂)⟩ − d⟨A₁ ∧ … ∧ Aₙ, B̂⟩`, where the first term expands
/// by the graded Leibniz rule with the covariant derivative of `a` in every
/// slot.
pub fn dd_residual(
    cm: &CrossedModule,
    a: &AlgebraForm,
    slots: &[AlgebraForm],
    hat: &AlgebraForm,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    let refs: Vec<&AlgebraForm> = slots.iter().collect();
    let plain = invariant_eval(p, &refs, hat)?;
    let mut expanded = ScalarForm::zero(plain.chart(), plain.degree() + 1);
    let mut preceding = 0;
    for (i, slot) in slots.iter().enumerate() {
        let ds = covariant_d(cm, a, slot)?;
        let mut args = refs.clone();
        args[i] = &ds;
        let term = invariant_eval(p, &args, hat)?;
        if preceding % 2 == 0 {
            expanded += &term;
        } else {
            expanded -= &term;
        }
        preceding += slot.degree();
    }
    let dhat = covariant_d(cm, a, hat)?;
    let term = invariant_eval(p, &refs, &dhat)?;
    if preceding % 2 == 0 {
        expanded += &term;
    } else {
        expanded -= &term;
    }
    Ok(&expanded - &plain.d())
}

/// `(∂_t𝓕_t − (D_tθ − α(Φ)), ∂_t𝓖_t − (D_tΦ + θ ∧^▷ B_t))`.
pub fn t_derivative_residuals(
    cm: &CrossedModule,
    interp: &InterpolationData,
) -> Result<(AlgebraForm, AlgebraForm), Error> {
    let CurvaturePair { f: f_t, g: g_t } = interp.curvatures_t(cm)?;
    let a_t = interp.a_t();
    let rf = &(&f_t.partial_t() - &covariant_d(cm, a_t, interp.theta())?) + &alpha_lift(cm, interp.phi())?;
    let rg = &(&g_t.partial_t() - &covariant_d(cm, a_t, interp.phi())?) - &wedge_act(cm, interp.theta(), interp.b_t())?;
    Ok((rf, rg))
}

/// The pairing identities used in the proof of the transgression formula,
/// each evaluated on the interpolation family as a t-polynomial form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofStep {
    /// `⟨𝓕_tⁿ, θ ∧^▷ B_t⟩ = 0`.
    ActionTerm,
    /// `⟨θ ∧ D_t𝓕_t ∧ 𝓕_t^{n−2}, 𝓖_t⟩ = 0`, for `n ≥ 2`.
    BianchiAlphaTerm,
    /// `⟨θ ∧ 𝓕_t^{n−1}, 𝓕_t ∧^▷ B_t⟩ = 0`.
    CurvatureActionTerm,
    /// `⟨D_t𝓕_t ∧ 𝓕_t^{n−1}, Φ⟩ = −⟨𝓕_t^{n−1} ∧ α(Φ), 𝓖_t⟩`.
    AlphaSwapTerm,
    /// `⟨θ ∧ 𝓕_t^{n−1}, D_t𝓖_t⟩ = ⟨θ ∧ 𝓕_t^{n−1}, 𝓕_t ∧^▷ B_t⟩`.
    SecondBianchiTerm,
    /// `⟨𝓕_tⁿ, θ ∧^▷ B_t⟩ + n⟨θ ∧ 𝓕_t^{n−1}, 𝓕_t ∧^▷ B_t⟩ = 0`.
    CombinedActionTerms,
}

impl ProofStep {
    pub const ALL: [ProofStep; 6] = [
        ProofStep::ActionTerm,
        ProofStep::BianchiAlphaTerm,
        ProofStep::CurvatureActionTerm,
        ProofStep::AlphaSwapTerm,
        ProofStep::SecondBianchiTerm,
        ProofStep::CombinedActionTerms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProofStep::ActionTerm => "action-term",
            ProofStep::BianchiAlphaTerm => "bianchi-alpha-term",
            ProofStep::CurvatureActionTerm => "curvature-action-term",
            ProofStep::AlphaSwapTerm => "alpha-swap-term",
            ProofStep::SecondBianchiTerm => "second-bianchi-term",
            ProofStep::CombinedActionTerms => "combined-action-terms",
        }
    }

    pub fn min_arity(self) -> usize {
        match self {
            ProofStep::BianchiAlphaTerm => 2,
            _ => 1,
        }
    }
}

/// Left side minus right side of a proof step.
pub fn proof_step_residual(
    cm: &CrossedModule,
    interp: &InterpolationData,
    p: &InvariantPairing,
    step: ProofStep,
) -> Result<ScalarForm, Error> {
    let n = p.arity();
    if n < step.min_arity() {
        return Err(Error::ArityMismatch {
            arity: n,
            found: step.min_arity(),
        });
    }
    let CurvaturePair { f: f_t, g: g_t } = interp.curvatures_t(cm)?;
    let (theta, phi, a_t, b_t) = (interp.theta(), interp.phi(), interp.a_t(), interp.b_t());
    Ok(match step {
        ProofStep::ActionTerm => eval_filled(p, &[], &f_t, &wedge_act(cm, theta, b_t)?)?,
        ProofStep::BianchiAlphaTerm => {
            let df = covariant_d(cm, a_t, &f_t)?;
            eval_filled(p, &[theta, &df], &f_t, &g_t)?
        }
        ProofStep::CurvatureActionTerm => eval_filled(p, &[theta], &f_t, &wedge_act(cm, &f_t, b_t)?)?,
        ProofStep::AlphaSwapTerm => {
            let df = covariant_d(cm, a_t, &f_t)?;
            let lhs = eval_filled(p, &[&df], &f_t, phi)?;
            let mut slots: Vec<&AlgebraForm> = vec![&f_t; n - 1];
            let ap = alpha_lift(cm, phi)?;
            slots.push(&ap);
            &lhs + &invariant_eval(p, &slots, &g_t)?
        }
        ProofStep::SecondBianchiTerm => {
            let dg = covariant_d(cm, a_t, &g_t)?;
            let fb = wedge_act(cm, &f_t, b_t)?;
            &eval_filled(p, &[theta], &f_t, &dg)? - &eval_filled(p, &[theta], &f_t, &fb)?
        }
        ProofStep::CombinedActionTerms => {
            let first = eval_filled(p, &[], &f_t, &wedge_act(cm, theta, b_t)?)?;
            let second = eval_filled(p, &[theta], &f_t, &wedge_act(cm, &f_t, b_t)?)?;
            &first + &second.scale(&rat(n as i64, 1))
        }
    })
}
