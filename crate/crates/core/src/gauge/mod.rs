//! Algebra-valued forms, 2-connections and their curvatures, and 2-gauge
//! transformations.

mod form;
mod transform;

pub use form::{AlgebraForm, Side};
pub use transform::{curvature_transform_residual, gauge_transform, GaugeData};

use crate::algebra::CrossedModule;
use crate::exterior::{Chart, ScalarForm};
use crate::{rat, Error};

fn same_chart(u: &AlgebraForm, v: &AlgebraForm) -> Result<(), Error> {
    if u.chart() != v.chart() {
        return Err(Error::ChartMismatch(u.chart().dim(), v.chart().dim()));
    }
    Ok(())
}

/// Accumulates `Σ k · u^a ∧ v^b` into `out[c]` over `(a, b, c, k)` triples,
/// wedging each component pair once.
fn bilinear_wedge<'t>(
    u: &AlgebraForm,
    v: &AlgebraForm,
    terms: impl Iterator<Item = (usize, usize, usize, &'t crate::Rational)>,
    out_side: Side,
    out_dim: usize,
) -> AlgebraForm {
    let chart = u.chart();
    let degree = u.degree() + v.degree();
    let mut out = vec![ScalarForm::zero(chart, degree); out_dim];
    let mut cache: std::collections::HashMap<(usize, usize), ScalarForm> = Default::default();
    for (a, b, c, k) in terms {
        let (ua, vb) = (u.component(a), v.component(b));
        if ua.is_zero() || vb.is_zero() {
            continue;
        }
        let w = cache
            .entry((a, b))
            .or_insert_with(|| ua.wedge(vb).expect("charts checked"));
        out[c] += &w.scale(k);
    }
    AlgebraForm::new(out_side, out).expect("uniform components")
}

/// `u ∧^{[,]} v = Σ u^a ∧ v^b ⊗ [X_a, X_b]`. Both forms must take values in
/// the same algebra.
pub fn wedge_bracket(cm: &CrossedModule, u: &AlgebraForm, v: &AlgebraForm) -> Result<AlgebraForm, Error> {
    u.expect(cm, u.side(), None)?;
    v.expect(cm, u.side(), None)?;
    same_chart(u, v)?;
    let alg = match u.side() {
        Side::G => cm.g(),
        Side::H => cm.h(),
    };
    Ok(bilinear_wedge(
        u,
        v,
        alg.bracket_terms().iter().map(|(a, b, c, k)| (*a, *b, *c, k)),
        u.side(),
        alg.dim(),
    ))
}

/// `u ∧^▷ v = Σ u^a ∧ v^c ⊗ (X_a ▷ Y_c)`.
pub fn wedge_act(cm: &CrossedModule, u: &AlgebraForm, v: &AlgebraForm) -> Result<AlgebraForm, Error> {
    u.expect(cm, Side::G, None)?;
    v.expect(cm, Side::H, None)?;
    same_chart(u, v)?;
    Ok(bilinear_wedge(
        u,
        v,
        cm.action_terms().iter().map(|(a, c, b, k)| (*a, *c, *b, k)),
        Side::H,
        cm.h().dim(),
    ))
}

/// `α(v) = Σ v^b α(Y_b)`.
pub fn alpha_lift(cm: &CrossedModule, v: &AlgebraForm) -> Result<AlgebraForm, Error> {
    v.expect(cm, Side::H, None)?;
    let mut out = AlgebraForm::zero_in(cm, Side::G, v.chart(), v.degree()).into_components();
    for (a, b, k) in cm.alpha_terms() {
        out[*a] += &v.component(*b).scale(k);
    }
    AlgebraForm::new(Side::G, out)
}

/// `dw + A ∧^{[,]} w` for g-valued `w`, `dw + A ∧^▷ w` for h-valued `w`.
pub fn covariant_d(cm: &CrossedModule, a: &AlgebraForm, w: &AlgebraForm) -> Result<AlgebraForm, Error> {
    a.expect(cm, Side::G, Some(1))?;
    let coupling = match w.side() {
        Side::G => wedge_bracket(cm, a, w)?,
        Side::H => wedge_act(cm, a, w)?,
    };
    Ok(&w.d() + &coupling)
}

/// A g-valued 1-form `A` and an h-valued 2-form `B` on one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoConnection {
    a: AlgebraForm,
    b: AlgebraForm,
}

impl TwoConnection {
    pub fn new(cm: &CrossedModule, a: AlgebraForm, b: AlgebraForm) -> Result<Self, Error> {
        a.expect(cm, Side::G, Some(1))?;
        b.expect(cm, Side::H, Some(2))?;
        same_chart(&a, &b)?;
        Ok(TwoConnection { a, b })
    }

    pub(crate) fn new_unchecked(a: AlgebraForm, b: AlgebraForm) -> Self {
        TwoConnection { a, b }
    }

    pub fn zero(cm: &CrossedModule, chart: Chart) -> Self {
        TwoConnection {
            a: AlgebraForm::zero_in(cm, Side::G, chart, 1),
            b: AlgebraForm::zero_in(cm, Side::H, chart, 2),
        }
    }

    pub fn a(&self) -> &AlgebraForm {
        &self.a
    }

    pub fn b(&self) -> &AlgebraForm {
        &self.b
    }

    pub fn chart(&self) -> Chart {
        self.a.chart()
    }

    pub fn into_parts(self) -> (AlgebraForm, AlgebraForm) {
        (self.a, self.b)
    }
}

/// The fake curvature `𝓕` (g-valued 2-form) and 2-curvature `𝓖` (h-valued 3-form).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair {
    pub f: AlgebraForm,
    pub g: AlgebraForm,
}

impl CurvaturePair {
    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }
}

/// `½ A ∧^{[,]} A`.
pub fn half_bracket_square(cm: &CrossedModule, a: &AlgebraForm) -> Result<AlgebraForm, Error> {
    Ok(wedge_bracket(cm, a, a)?.scale(&rat(1, 2)))
}

/// `𝓕 = dA + ½ A ∧^{[,]} A − α(B)`, `𝓖 = dB + A ∧^▷ B`.
pub fn curvatures(cm: &CrossedModule, conn: &TwoConnection) -> Result<CurvaturePair, Error> {
    let (a, b) = (conn.a(), conn.b());
    let f = &(&a.d() + &half_bracket_square(cm, a)?) - &alpha_lift(cm, b)?;
    let g = covariant_d(cm, a, b)?;
    Ok(CurvaturePair { f, g })
}

/// `(d𝓕 + A ∧^{[,]} 𝓕 + α(𝓖), d𝓖 + A ∧^▷ 𝓖 − 𝓕 ∧^▷ B)`, both identically zero.
pub fn bianchi_residuals(cm: &CrossedModule, conn: &TwoConnection) -> Result<(AlgebraForm, AlgebraForm), Error> {
    let CurvaturePair { f, g } = curvatures(cm, conn)?;
    let r1 = &covariant_d(cm, conn.a(), &f)? + &alpha_lift(cm, &g)?;
    let r2 = &covariant_d(cm, conn.a(), &g)? - &wedge_act(cm, &f, conn.b())?;
    Ok((r1, r2))
}

/// First-order variations `(DδA − α(δB), DδB + δA ∧^▷ B)`.
pub fn linearized_curvatures(
    cm: &CrossedModule,
    conn: &TwoConnection,
    da: &AlgebraForm,
    db: &AlgebraForm,
) -> Result<(AlgebraForm, AlgebraForm), Error> {
    da.expect(cm, Side::G, Some(1))?;
    db.expect(cm, Side::H, Some(2))?;
    let df = &covariant_d(cm, conn.a(), da)? - &alpha_lift(cm, db)?;
    let dg = &covariant_d(cm, conn.a(), db)? + &wedge_act(cm, da, conn.b())?;
    Ok((df, dg))
}
