use crate::algebra::matrix::PolyMatrix;
use crate::algebra::CrossedModule;
use crate::exterior::{Chart, Polynomial, ScalarForm};
use crate::{rat, Error};

use super::{alpha_lift, curvatures, wedge_act, wedge_bracket, AlgebraForm, Side, TwoConnection};

/// A 2-gauge transformation `(g, φ)`.
///
/// `g` and its inverse are matrices in the g-representation; `gact` is the
/// matrix of `g⁻¹ ▷` on h-coefficient columns. The adjoint matrix of
/// `X ↦ g⁻¹Xg` and the Maurer-Cartan form `g⁻¹dg` are derived and cached.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeData {
    g: PolyMatrix,
    ginv: PolyMatrix,
    gact: PolyMatrix,
    phi: AlgebraForm,
    adjoint: PolyMatrix,
    maurer_cartan: AlgebraForm,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGauge(msg.into())
}

/// `(m · w)^c = Σ_a m[c][a] w^a`.
fn apply(m: &PolyMatrix, w: &AlgebraForm) -> AlgebraForm {
    let out = (0..m.rows())
        .map(|c| {
            let mut acc = ScalarForm::zero(w.chart(), w.degree());
            for a in 0..m.cols() {
                let entry = m.get(c, a);
                if !entry.is_zero() && !w.component(a).is_zero() {
                    acc += &w.component(a).mul_poly(entry);
                }
            }
            acc
        })
        .collect();
    AlgebraForm::new(w.side(), out).expect("uniform components")
}

impl GaugeData {
    pub fn new(
        cm: &CrossedModule,
        g: PolyMatrix,
        ginv: PolyMatrix,
        gact: PolyMatrix,
        phi: AlgebraForm,
    ) -> Result<Self, Error> {
        let adjoint = Self::adjoint_of(cm, &g, &ginv)?;
        let (dg, dh) = (cm.g().dim(), cm.h().dim());
        if gact.rows() != dh || gact.cols() != dh {
            return Err(invalid(format!("action matrix must be {dh}x{dh}")));
        }
        phi.expect(cm, Side::H, Some(1))?;
        let chart = phi.chart();
        let maurer_cartan = Self::maurer_cartan_of(cm, &g, &ginv, chart)?;

        // g⁻¹ ▷ (X_a ▷ Y) = (g⁻¹ X_a g) ▷ (g⁻¹ ▷ Y)
        for a in 0..dg {
            let lhs = gact.mul(&cm.action_matrix(a).to_poly());
            let mut conj = PolyMatrix::zeros(dh, dh);
            for c in 0..dg {
                let k = adjoint.get(c, a);
                if !k.is_zero() {
                    conj = conj.add(&cm.action_matrix(c).map(|e| k.scale(e)));
                }
            }
            if lhs != conj.mul(&gact) {
                return Err(invalid(format!(
                    "action matrix is not compatible with the g-action of {}",
                    cm.g().labels()[a]
                )));
            }
        }
        // α(g⁻¹ ▷ Y) = g⁻¹ α(Y) g
        let alpha = cm.alpha_matrix().to_poly();
        if alpha.mul(&gact) != adjoint.mul(&alpha) {
            return Err(invalid("action matrix is not compatible with alpha"));
        }
        // g⁻¹ ▷ [Y, Y'] = [g⁻¹ ▷ Y, g⁻¹ ▷ Y']
        let h = cm.h();
        for b in 0..dh {
            for c in 0..dh {
                for e in 0..dh {
                    let mut lhs = Polynomial::zero();
                    for f in 0..dh {
                        let k = h.structure_constant(b, c, f);
                        if !num_traits::Zero::is_zero(k) {
                            lhs += &gact.get(e, f).scale(k);
                        }
                    }
                    let mut rhs = Polynomial::zero();
                    for (p, q, r, k) in h.bracket_terms() {
                        if *r == e {
                            rhs += &(gact.get(*p, b) * gact.get(*q, c)).scale(k);
                        }
                    }
                    if lhs != rhs {
                        return Err(invalid("action matrix does not preserve the h-bracket"));
                    }
                }
            }
        }
        Ok(GaugeData {
            g,
            ginv,
            gact,
            phi,
            adjoint,
            maurer_cartan,
        })
    }

    /// Gauge data whose h-action matrix is the adjoint matrix of `g⁻¹`; valid
    /// for modules where h carries the adjoint-type action, e.g. `poincare2`
    /// and `adjoint_so21`.
    pub fn with_adjoint_action(
        cm: &CrossedModule,
        g: PolyMatrix,
        ginv: PolyMatrix,
        phi: AlgebraForm,
    ) -> Result<Self, Error> {
        let gact = Self::adjoint_of(cm, &g, &ginv)?;
        Self::new(cm, g, ginv, gact, phi)
    }

    /// `g = 1` with the given `φ`.
    pub fn pure_phi(cm: &CrossedModule, phi: AlgebraForm) -> Result<Self, Error> {
        let s = cm
            .g()
            .matrix_rep()
            .ok_or_else(|| Error::MissingMatrixRep(cm.g().name().to_string()))?[0]
            .rows();
        let dh = cm.h().dim();
        Self::new(
            cm,
            PolyMatrix::identity(s),
            PolyMatrix::identity(s),
            PolyMatrix::identity(dh),
            phi,
        )
    }

    pub fn identity(cm: &CrossedModule, chart: Chart) -> Result<Self, Error> {
        Self::pure_phi(cm, AlgebraForm::zero_in(cm, Side::H, chart, 1))
    }

    fn adjoint_of(cm: &CrossedModule, g: &PolyMatrix, ginv: &PolyMatrix) -> Result<PolyMatrix, Error> {
        let rep = cm
            .g()
            .matrix_rep()
            .ok_or_else(|| Error::MissingMatrixRep(cm.g().name().to_string()))?;
        let s = rep[0].rows();
        if !g.is_square() || g.rows() != s || ginv.rows() != s || !ginv.is_square() {
            return Err(invalid(format!("group matrices must be {s}x{s}")));
        }
        let id = PolyMatrix::identity(s);
        if g.mul(ginv) != id || ginv.mul(g) != id {
            return Err(invalid("supplied inverse does not satisfy g·g⁻¹ = 1"));
        }
        let dg = cm.g().dim();
        let mut adjoint = PolyMatrix::zeros(dg, dg);
        for (a, x) in rep.iter().enumerate() {
            let conj = ginv.mul(&x.to_poly()).mul(g);
            let coeffs = cm
                .g()
                .decompose(&conj)
                .map_err(|_| invalid("g⁻¹Xg leaves the algebra"))?;
            for (c, k) in coeffs.into_iter().enumerate() {
                adjoint.set(c, a, k);
            }
        }
        Ok(adjoint)
    }

    fn maurer_cartan_of(
        cm: &CrossedModule,
        g: &PolyMatrix,
        ginv: &PolyMatrix,
        chart: Chart,
    ) -> Result<AlgebraForm, Error> {
        let dg = cm.g().dim();
        let mut out = AlgebraForm::zero_in(cm, Side::G, chart, 1).into_components();
        let used = (0..g.rows())
            .flat_map(|r| (0..g.cols()).map(move |c| (r, c)))
            .filter_map(|(r, c)| g.get(r, c).max_coordinate())
            .max();
        if let Some(top) = used {
            if top >= chart.dim() {
                return Err(invalid(format!(
                    "group matrix depends on x{} outside the chart",
                    top + 1
                )));
            }
        }
        for i in 0..chart.dim() {
            let dgi = g.map(|e| e.partial(i));
            if dgi.is_zero() {
                continue;
            }
            let coeffs = cm
                .g()
                .decompose(&ginv.mul(&dgi))
                .map_err(|_| invalid("g⁻¹dg leaves the algebra"))?;
            for (a, k) in coeffs.into_iter().enumerate().take(dg) {
                if !k.is_zero() {
                    out[a] += &ScalarForm::dx(chart, i).mul_poly(&k);
                }
            }
        }
        AlgebraForm::new(Side::G, out)
    }

    pub fn g(&self) -> &PolyMatrix {
        &self.g
    }

    pub fn ginv(&self) -> &PolyMatrix {
        &self.ginv
    }

    pub fn gact(&self) -> &PolyMatrix {
        &self.gact
    }

    pub fn phi(&self) -> &AlgebraForm {
        &self.phi
    }

    /// Matrix of `X ↦ g⁻¹Xg` on g-coefficient columns.
    pub fn adjoint(&self) -> &PolyMatrix {
        &self.adjoint
    }

    /// `g⁻¹dg` as a g-valued 1-form.
    pub fn maurer_cartan(&self) -> &AlgebraForm {
        &self.maurer_cartan
    }

    /// `g⁻¹ ω g` for a g-valued form.
    pub fn conjugate(&self, w: &AlgebraForm) -> AlgebraForm {
        apply(&self.adjoint, w)
    }

    /// `g⁻¹ ▷ ω` for an h-valued form.
    pub fn act(&self, w: &AlgebraForm) -> AlgebraForm {
        apply(&self.gact, w)
    }
}

/// `A' = g⁻¹Ag + g⁻¹dg + α(φ)`,
/// `B' = g⁻¹▷B + dφ + A' ∧^▷ φ − ½ φ ∧^{[,]} φ`.
pub fn gauge_transform(cm: &CrossedModule, conn: &TwoConnection, gd: &GaugeData) -> Result<TwoConnection, Error> {
    if gd.phi.chart() != conn.chart() {
        return Err(Error::ChartMismatch(conn.chart().dim(), gd.phi.chart().dim()));
    }
    let phi = &gd.phi;
    let a = &(&gd.conjugate(conn.a()) + &gd.maurer_cartan) + &alpha_lift(cm, phi)?;
    let mut b = &gd.act(conn.b()) + &phi.d();
    b += &wedge_act(cm, &a, phi)?;
    b -= &wedge_bracket(cm, phi, phi)?.scale(&rat(1, 2));
    TwoConnection::new(cm, a, b)
}

/// `(𝓕' − g⁻¹𝓕g, 𝓖' − g⁻¹▷𝓖 − 𝓕' ∧^▷ φ)`, both identically zero.
pub fn curvature_transform_residual(
    cm: &CrossedModule,
    conn: &TwoConnection,
    gd: &GaugeData,
) -> Result<(AlgebraForm, AlgebraForm), Error> {
    let before = curvatures(cm, conn)?;
    let after = curvatures(cm, &gauge_transform(cm, conn, gd)?)?;
    let rf = &after.f - &gd.conjugate(&before.f);
    let rg = &(&after.g - &gd.act(&before.g)) - &wedge_act(cm, &after.f, &gd.phi)?;
    Ok((rf, rg))
}
