//! Seeded generators for randomized checks.
//!
//! Coefficients are drawn from `{−2, −1, 0, 1, 2} / {1, 2}`, polynomials are
//! sparse with coordinate degree at most 2, and group elements are products
//! of exact one-parameter subgroups, so every trial stays small and exact.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::matrix::{PolyMatrix, RatMatrix};
use crate::algebra::CrossedModule;
use crate::exterior::{Chart, Monomial, Polynomial, ScalarForm};
use crate::gauge::{AlgebraForm, GaugeData, Side, TwoConnection};
use crate::{rat, Error, Rational};

/// Rational `(c, s)` with `c² − s² = 1`.
const HYPERBOLIC: [(i64, i64, i64); 5] = [(5, 3, 4), (13, 12, 5), (17, 15, 8), (25, 7, 24), (41, 40, 9)];
/// Rational `(c, s)` with `c² + s² = 1`.
const CIRCULAR: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

/// Deterministic generator (ChaCha8) for test data.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `k` of a suite seeded with `seed`.
    pub fn for_trial(seed: u64, k: u64) -> Self {
        Self::new(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k))
    }

    pub fn coefficient(&mut self) -> Rational {
        rat(self.rng.gen_range(-2..=2), self.rng.gen_range(1..=2))
    }

    pub fn nonzero_coefficient(&mut self) -> Rational {
        let num = *[-2, -1, 1, 2].choose(&mut self.rng).expect("nonempty");
        rat(num, self.rng.gen_range(1..=2))
    }

    /// Rational point with small numerators and denominators.
    pub fn point(&mut self, dim: usize) -> Vec<Rational> {
        (0..dim)
            .map(|_| rat(self.rng.gen_range(-5..=5), self.rng.gen_range(1..=4)))
            .collect()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Sparse polynomial in the chart coordinates, degree at most `max_degree`.
    pub fn polynomial(&mut self, chart: Chart, max_degree: u32, max_terms: usize) -> Polynomial {
        let terms = self.rng.gen_range(1..=max_terms);
        let mut p = Polynomial::zero();
        for _ in 0..terms {
            let degree = self.rng.gen_range(0..=max_degree);
            let mut m = Monomial::ONE;
            for _ in 0..degree {
                m = m * Monomial::var(self.rng.gen_range(0..chart.dim()));
            }
            p.add_term(m, self.nonzero_coefficient());
        }
        p
    }

    /// Random `degree`-form with up to `max_components` covector components.
    pub fn scalar_form(&mut self, chart: Chart, degree: usize, max_components: usize) -> ScalarForm {
        let mut out = ScalarForm::zero(chart, degree);
        if degree > chart.dim() {
            return out;
        }
        let count = self.rng.gen_range(1..=max_components);
        for _ in 0..count {
            let mut idx: Vec<usize> = (0..chart.dim()).collect();
            idx.shuffle(&mut self.rng);
            idx.truncate(degree);
            let p = self.polynomial(chart, 2, 2);
            out += &ScalarForm::monomial(chart, p, &idx).expect("indices in range");
        }
        out
    }

    /// Random algebra-valued form; each basis component is present with
    /// probability `density`.
    pub fn algebra_form(
        &mut self,
        cm: &CrossedModule,
        side: Side,
        chart: Chart,
        degree: usize,
        density: f64,
    ) -> AlgebraForm {
        let dim = side.dim(cm);
        let components = (0..dim)
            .map(|_| {
                if self.chance(density) {
                    self.scalar_form(chart, degree, 2)
                } else {
                    ScalarForm::zero(chart, degree)
                }
            })
            .collect();
        AlgebraForm::new(side, components).expect("uniform components")
    }

    pub fn connection(&mut self, cm: &CrossedModule, chart: Chart) -> TwoConnection {
        let a = self.algebra_form(cm, Side::G, chart, 1, 0.7);
        let b = self.algebra_form(cm, Side::H, chart, 2, 0.7);
        TwoConnection::new(cm, a, b).expect("generated with matching shapes")
    }

    /// Exponential of `s·K` for a representation matrix `K` with
    /// `K³ = ±K` or `K² = 0`, with its inverse. `None` otherwise.
    fn one_parameter(&mut self, k: &RatMatrix) -> Option<(RatMatrix, RatMatrix)> {
        let n = k.rows();
        let id = RatMatrix::identity(n);
        let k2 = k.mul(k);
        let k3 = k2.mul(k);
        let sign = if self.chance(0.5) { 1 } else { -1 };
        if k2.is_zero() {
            let c = self.nonzero_coefficient();
            return Some((id.add(&k.scale(&c)), id.sub(&k.scale(&c))));
        }
        let (cosh_like, s) = if k3 == *k {
            let (c, s, d) = *HYPERBOLIC.choose(&mut self.rng).expect("nonempty");
            // exp(sK) = 1 + sinh·K + (cosh − 1)·K²
            (rat(c, d) - rat(1, 1), rat(sign * s, d))
        } else if k3 == k.neg() {
            let (c, s, d) = *CIRCULAR.choose(&mut self.rng).expect("nonempty");
            // exp(sK) = 1 + sin·K + (1 − cos)·K²
            (rat(1, 1) - rat(c, d), rat(sign * s, d))
        } else {
            return None;
        };
        let g = id.add(&k.scale(&s)).add(&k2.scale(&cosh_like));
        let ginv = id.sub(&k.scale(&s)).add(&k2.scale(&cosh_like));
        Some((g, ginv))
    }

    /// Constant group element: a product of up to three exact one-parameter
    /// subgroup elements generated by basis matrices of the g-representation.
    pub fn constant_group_element(&mut self, cm: &CrossedModule) -> Result<(RatMatrix, RatMatrix), Error> {
        let rep = cm
            .g()
            .matrix_rep()
            .ok_or_else(|| Error::MissingMatrixRep(cm.g().name().to_string()))?;
        let n = rep[0].rows();
        let (mut g, mut ginv) = (RatMatrix::identity(n), RatMatrix::identity(n));
        let factors = self.rng.gen_range(1..=3);
        for _ in 0..factors {
            let k = &rep[self.index(rep.len())];
            if let Some((f, finv)) = self.one_parameter(k) {
                g = g.mul(&f);
                ginv = finv.mul(&ginv);
            }
        }
        if g == RatMatrix::identity(n) {
            // Fall back to the first usable generator so the element is nontrivial.
            for k in rep {
                if let Some((f, finv)) = self.one_parameter(k) {
                    return Ok((f, finv));
                }
            }
        }
        Ok((g, ginv))
    }

    /// `g = 1 + fN + ½f²N²` with `N` nilpotent (`N³ = 0`) in the
    /// representation and `f` a random polynomial, with its exact inverse.
    pub fn unipotent_group_element(
        &mut self,
        cm: &CrossedModule,
        chart: Chart,
        nilpotent: &RatMatrix,
    ) -> Result<(PolyMatrix, PolyMatrix), Error> {
        let n2 = nilpotent.mul(nilpotent);
        if !n2.mul(nilpotent).is_zero() {
            return Err(Error::InvalidGauge("generator is not nilpotent of order 3".into()));
        }
        cm.g().decompose(nilpotent)?;
        let f = self.polynomial(chart, 1, 2);
        let f2 = (&f * &f).scale(&rat(1, 2));
        let id = PolyMatrix::identity(nilpotent.rows());
        let np = nilpotent.to_poly();
        let n2p = n2.to_poly();
        let fn_ = np.map(|e| e * &f);
        let f2n2 = n2p.map(|e| e * &f2);
        Ok((id.add(&fn_).add(&f2n2), id.sub(&fn_).add(&f2n2)))
    }

    /// Gauge data from a constant group element, with the action matrix
    /// taken to be the adjoint matrix and a random `φ` present with
    /// probability `phi_density` per component.
    pub fn adjoint_gauge(&mut self, cm: &CrossedModule, chart: Chart, phi_density: f64) -> Result<GaugeData, Error> {
        let (g, ginv) = self.constant_group_element(cm)?;
        let phi = self.algebra_form(cm, Side::H, chart, 1, phi_density);
        GaugeData::with_adjoint_action(cm, g.to_poly(), ginv.to_poly(), phi)
    }
}
