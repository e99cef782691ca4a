//! Transgression gauge field theory: the action built on the 2AST form, its
//! field equations, the boundary term of its variation, and its 2-gauge
//! invariance.

use crate::algebra::{CrossedModule, InvariantPairing};
use crate::chsas::{ast_form, eval_filled, InterpolationData};
use crate::exterior::{Polynomial, ScalarForm};
use crate::gauge::{
    curvatures, gauge_transform, wedge_act, AlgebraForm, CurvaturePair, GaugeData, Side, TwoConnection,
};
use crate::{rat, Error, Rational};

/// The lagrangian `𝓠²ⁿ⁺²` of the action.
pub fn action_integrand(
    cm: &CrossedModule,
    interp: &InterpolationData,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    ast_form(cm, interp, p)
}

/// Exact integral of the lagrangian over a coordinate box of dimension `2n + 2`.
pub fn action_value(
    cm: &CrossedModule,
    interp: &InterpolationData,
    p: &InvariantPairing,
    bounds: &[(Rational, Rational)],
) -> Result<Rational, Error> {
    let expected = 2 * p.arity() + 2;
    let dim = interp.conn1().chart().dim();
    if dim != expected {
        return Err(Error::DimensionMismatch {
            what: "chart for the action",
            expected,
            found: dim,
        });
    }
    action_integrand(cm, interp, p)?.integrate_box(bounds)
}

/// Field-equation residuals of one endpoint connection.
#[derive(Debug, Clone, PartialEq)]
pub struct EomResiduals {
    /// `n⟨X_a · 𝓕^{n−1}, 𝓖⟩` per g-basis element.
    pub g: Vec<ScalarForm>,
    /// `⟨𝓕ⁿ, Y_b⟩` per h-basis element.
    pub h: Vec<ScalarForm>,
}

impl EomResiduals {
    pub fn is_zero(&self) -> bool {
        self.g.iter().chain(&self.h).all(ScalarForm::is_zero)
    }
}

pub fn eom_residuals(cm: &CrossedModule, conn: &TwoConnection, p: &InvariantPairing) -> Result<EomResiduals, Error> {
    let CurvaturePair { f, g } = curvatures(cm, conn)?;
    let chart = conn.chart();
    let n = rat(p.arity() as i64, 1);
    let one = ScalarForm::constant(chart, rat(1, 1));
    let g_res = (0..cm.g().dim())
        .map(|a| {
            let x = AlgebraForm::basis(Side::G, cm.g().dim(), a, one.clone());
            Ok(eval_filled(p, &[&x], &f, &g)?.scale(&n))
        })
        .collect::<Result<_, Error>>()?;
    let h_res = (0..cm.h().dim())
        .map(|b| {
            let y = AlgebraForm::basis(Side::H, cm.h().dim(), b, one.clone());
            eval_filled(p, &[], &f, &y)
        })
        .collect::<Result<_, Error>>()?;
    Ok(EomResiduals { g: g_res, h: h_res })
}

/// Independent variations of both endpoint connections.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationData {
    da0: AlgebraForm,
    da1: AlgebraForm,
    db0: AlgebraForm,
    db1: AlgebraForm,
}

impl VariationData {
    pub fn new(
        cm: &CrossedModule,
        da0: AlgebraForm,
        da1: AlgebraForm,
        db0: AlgebraForm,
        db1: AlgebraForm,
    ) -> Result<Self, Error> {
        for da in [&da0, &da1] {
            da.expect(cm, Side::G, Some(1))?;
        }
        for db in [&db0, &db1] {
            db.expect(cm, Side::H, Some(2))?;
        }
        let chart = da0.chart();
        for w in [&da1, &db0, &db1] {
            if w.chart() != chart {
                return Err(Error::ChartMismatch(chart.dim(), w.chart().dim()));
            }
        }
        Ok(VariationData { da0, da1, db0, db1 })
    }

    pub fn zero(cm: &CrossedModule, chart: crate::exterior::Chart) -> Self {
        let a = AlgebraForm::zero_in(cm, Side::G, chart, 1);
        let b = AlgebraForm::zero_in(cm, Side::H, chart, 2);
        VariationData {
            da0: a.clone(),
            da1: a,
            db0: b.clone(),
            db1: b,
        }
    }

    pub fn da0(&self) -> &AlgebraForm {
        &self.da0
    }

    pub fn da1(&self) -> &AlgebraForm {
        &self.da1
    }

    pub fn db0(&self) -> &AlgebraForm {
        &self.db0
    }

    pub fn db1(&self) -> &AlgebraForm {
        &self.db1
    }

    pub fn is_zero(&self) -> bool {
        [&self.da0, &self.da1, &self.db0, &self.db1].iter().all(|w| w.is_zero())
    }

    /// `δA_t = δA₀ + t(δA₁ − δA₀)`.
    pub fn da_t(&self) -> AlgebraForm {
        &self.da0 + &(&self.da1 - &self.da0).mul_poly(&Polynomial::t())
    }

    /// `δB_t = δB₀ + t(δB₁ − δB₀)`.
    pub fn db_t(&self) -> AlgebraForm {
        &self.db0 + &(&self.db1 - &self.db0).mul_poly(&Polynomial::t())
    }
}

/// `Π̂ = n∫₀¹dt { (n−1)⟨θ ∧ δA_t ∧ 𝓕_t^{n−2}, 𝓖_t⟩ + ⟨θ ∧ 𝓕_t^{n−1}, δB_t⟩ − ⟨δA_t ∧ 𝓕_t^{n−1}, Φ⟩ }`,
/// the (2n+1)-form with `δ𝓠 = (field-equation terms) − dΠ̂`.
pub fn boundary_term(
    cm: &CrossedModule,
    interp: &InterpolationData,
    var: &VariationData,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    let n = p.arity();
    let CurvaturePair { f: f_t, g: g_t } = interp.curvatures_t(cm)?;
    let (da_t, db_t) = (var.da_t(), var.db_t());
    let theta = interp.theta();
    let mut sum = eval_filled(p, &[theta], &f_t, &db_t)?;
    sum -= &eval_filled(p, &[&da_t], &f_t, interp.phi())?;
    if n >= 2 {
        sum += &eval_filled(p, &[theta, &da_t], &f_t, &g_t)?.scale(&rat(n as i64 - 1, 1));
    }
    Ok(sum.scale(&rat(n as i64, 1)).integrate_t())
}

/// Restriction of a form to one face `x_coord = value` of a box.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub coord: usize,
    pub value: Rational,
    pub restricted: ScalarForm,
}

/// Pullbacks of `form` to the `2m` faces of the box, in coordinate order,
/// lower face first.
pub fn boundary_faces(form: &ScalarForm, bounds: &[(Rational, Rational)]) -> Result<Vec<Face>, Error> {
    let m = form.chart().dim();
    if bounds.len() != m {
        return Err(Error::DimensionMismatch {
            what: "box bounds",
            expected: m,
            found: bounds.len(),
        });
    }
    Ok(bounds
        .iter()
        .enumerate()
        .flat_map(|(i, (lo, hi))| {
            [lo, hi].into_iter().map(move |v| Face {
                coord: i,
                value: v.clone(),
                restricted: form.restrict_to_face(i, v),
            })
        })
        .collect())
}

/// First-order change of the lagrangian under `(A_i, B_i) → (A_i + εδA_i, B_i + εδB_i)`
/// minus the field-equation terms plus `dΠ̂`; identically zero.
pub fn variation_identity_residual(
    cm: &CrossedModule,
    interp: &InterpolationData,
    var: &VariationData,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    let eps = Polynomial::eps();
    let shift = |c: &TwoConnection, da: &AlgebraForm, db: &AlgebraForm| {
        TwoConnection::new(cm, c.a() + &da.mul_poly(&eps), c.b() + &db.mul_poly(&eps))
    };
    let varied = InterpolationData::new(
        cm,
        shift(interp.conn0(), var.da0(), var.db0())?,
        shift(interp.conn1(), var.da1(), var.db1())?,
    )?;
    let delta_q = action_integrand(cm, &varied, p)?.eps_coefficient(1);
    let n = rat(p.arity() as i64, 1);
    let field_terms = |c: &TwoConnection, da: &AlgebraForm, db: &AlgebraForm| -> Result<ScalarForm, Error> {
        let CurvaturePair { f, g } = curvatures(cm, c)?;
        Ok(&eval_filled(p, &[da], &f, &g)?.scale(&n) + &eval_filled(p, &[], &f, db)?)
    };
    let eom = &field_terms(interp.conn1(), var.da1(), var.db1())? - &field_terms(interp.conn0(), var.da0(), var.db0())?;
    let pi = boundary_term(cm, interp, var, p)?;
    Ok(&(&delta_q - &eom) + &pi.d())
}

/// Outcome of the 2-gauge invariance check of the action.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeInvarianceReport {
    /// `𝓠(transformed) − 𝓠`.
    pub integrand: ScalarForm,
    /// `θ' − g⁻¹θg`.
    pub theta: AlgebraForm,
    /// `Φ' − g⁻¹▷Φ − θ' ∧^▷ φ`.
    pub phi: AlgebraForm,
    /// `𝓕'_t − g⁻¹𝓕_t g`.
    pub f_t: AlgebraForm,
    /// `𝓖'_t − g⁻¹▷𝓖_t − 𝓕'_t ∧^▷ φ`.
    pub g_t: AlgebraForm,
    /// When the integrand residual is nonzero: a polynomial form `β` with
    /// `dβ` equal to it, if one exists on the chart.
    pub preimage: Option<ScalarForm>,
}

impl GaugeInvarianceReport {
    pub fn transform_laws_hold(&self) -> bool {
        self.theta.is_zero() && self.phi.is_zero() && self.f_t.is_zero() && self.g_t.is_zero()
    }

    pub fn passed(&self) -> bool {
        self.integrand.is_zero() && self.transform_laws_hold()
    }
}

/// Applies the same `(g, φ)` to both endpoints and compares lagrangians and
/// the transformation laws of `θ`, `Φ`, `𝓕_t`, `𝓖_t`.
pub fn action_gauge_invariance(
    cm: &CrossedModule,
    interp: &InterpolationData,
    gd: &GaugeData,
    p: &InvariantPairing,
) -> Result<GaugeInvarianceReport, Error> {
    let transformed = InterpolationData::new(
        cm,
        gauge_transform(cm, interp.conn0(), gd)?,
        gauge_transform(cm, interp.conn1(), gd)?,
    )?;
    let integrand = &action_integrand(cm, &transformed, p)? - &action_integrand(cm, interp, p)?;
    let theta = transformed.theta() - &gd.conjugate(interp.theta());
    let phi = &(transformed.phi() - &gd.act(interp.phi())) - &wedge_act(cm, transformed.theta(), gd.phi())?;
    let before = interp.curvatures_t(cm)?;
    let after = transformed.curvatures_t(cm)?;
    let f_t = &after.f - &gd.conjugate(&before.f);
    let g_t = &(&after.g - &gd.act(&before.g)) - &wedge_act(cm, &after.f, gd.phi())?;
    let preimage = if integrand.is_zero() {
        None
    } else {
        integrand.exact_preimage()
    };
    Ok(GaugeInvarianceReport {
        integrand,
        theta,
        phi,
        f_t,
        g_t,
        preimage,
    })
}

/// `𝓠(transformed) − 𝓠`.
pub fn action_gauge_invariance_residual(
    cm: &CrossedModule,
    interp: &InterpolationData,
    gd: &GaugeData,
    p: &InvariantPairing,
) -> Result<ScalarForm, Error> {
    Ok(action_gauge_invariance(cm, interp, gd, p)?.integrand)
}
