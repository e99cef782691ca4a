use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::Zero;

use super::polynomial::{Polynomial, EPS_VAR, MAX_DIM, T_VAR};
use crate::{Error, Rational};

/// A single global coordinate chart `x1..xm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chart {
    dim: usize,
}

impl Chart {
    pub fn new(dim: usize) -> Result<Self, Error> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::ChartDimension(dim));
        }
        Ok(Chart { dim })
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    /// Label of the zero-based coordinate `i` (`x1` for `i = 0`).
    pub fn label(self, i: usize) -> String {
        format!("x{}", i + 1)
    }

    fn check(self, other: Chart) -> Result<(), Error> {
        if self != other {
            return Err(Error::ChartMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

/// Covector index set `dx_{i1}∧…∧dx_{ik}` with `i1 < … < ik`, stored as a bitmask.
pub type Covectors = u16;

pub fn covector_indices(mask: Covectors) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `dx_a ∧ dx_b` relative to the sorted product, `None` if they overlap.
fn merge_sign(a: Covectors, b: Covectors) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// A scalar differential form with polynomial coefficients.
///
/// Degrees above the chart dimension are allowed and always hold the zero form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarForm {
    chart: Chart,
    degree: usize,
    components: BTreeMap<Covectors, Polynomial>,
}

impl ScalarForm {
    pub fn zero(chart: Chart, degree: usize) -> Self {
        ScalarForm {
            chart,
            degree,
            components: BTreeMap::new(),
        }
    }

    /// The 0-form `p`.
    pub fn function(chart: Chart, p: Polynomial) -> Self {
        let mut f = Self::zero(chart, 0);
        f.add_component(0, p);
        f
    }

    pub fn constant(chart: Chart, c: Rational) -> Self {
        Self::function(chart, Polynomial::constant(c))
    }

    /// `dx_{i+1}`.
    pub fn dx(chart: Chart, i: usize) -> Self {
        Self::monomial(chart, Polynomial::one(), &[i]).expect("covector in range")
    }

    /// `p dx_{i1}∧…∧dx_{ik}` for covectors in any order; the sign of the sorting
    /// permutation is absorbed into the coefficient and repeats give zero.
    pub fn monomial(chart: Chart, p: Polynomial, covectors: &[usize]) -> Result<Self, Error> {
        let mut out = Self::zero(chart, covectors.len());
        let mut mask: Covectors = 0;
        let mut negate = false;
        for &i in covectors {
            if i >= chart.dim {
                return Err(Error::DimensionMismatch {
                    what: "covector index",
                    expected: chart.dim,
                    found: i + 1,
                });
            }
            match merge_sign(mask, 1 << i) {
                None => return Ok(out),
                Some(s) => negate ^= s,
            }
            mask |= 1 << i;
        }
        let p = if negate { -&p } else { p };
        out.add_component(mask, p);
        Ok(out)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of stored (covector tuple, monomial) terms.
    pub fn term_count(&self) -> usize {
        self.components.values().map(Polynomial::len).sum()
    }

    pub fn components(&self) -> impl Iterator<Item = (Covectors, &Polynomial)> {
        self.components.iter().map(|(m, p)| (*m, p))
    }

    /// Coefficient of `dx_I` for a strictly increasing zero-based tuple.
    pub fn component(&self, indices: &[usize]) -> Polynomial {
        let mask = indices.iter().fold(0, |m, &i| m | (1 << i));
        self.components.get(&mask).cloned().unwrap_or_default()
    }

    /// First stored component, used as a failure witness.
    pub fn first_component(&self) -> Option<(Vec<usize>, &Polynomial)> {
        self.components.iter().next().map(|(m, p)| (covector_indices(*m), p))
    }

    pub fn is_parameter_free(&self) -> bool {
        self.components.values().all(Polynomial::is_parameter_free)
    }

    pub(crate) fn add_component(&mut self, mask: Covectors, p: Polynomial) {
        if p.is_zero() || self.degree > self.chart.dim {
            return;
        }
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        match self.components.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &p;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let mut out = Self::zero(self.chart, self.degree);
        for (m, p) in &self.components {
            out.add_component(*m, f(p));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|p| p.scale(c))
    }

    /// Multiplication by a 0-form coefficient.
    pub fn mul_poly(&self, q: &Polynomial) -> Self {
        if q.is_zero() {
            return Self::zero(self.chart, self.degree);
        }
        self.map_coefficients(|p| p * q)
    }

    pub fn wedge(&self, other: &ScalarForm) -> Result<ScalarForm, Error> {
        self.chart.check(other.chart)?;
        let mut out = Self::zero(self.chart, self.degree + other.degree);
        if out.degree > self.chart.dim {
            return Ok(out);
        }
        for (ma, pa) in &self.components {
            for (mb, pb) in &other.components {
                if let Some(negate) = merge_sign(*ma, *mb) {
                    let prod = pa * pb;
                    out.add_component(ma | mb, if negate { -&prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative over the chart coordinates; `t` and `eps` are constants.
    pub fn d(&self) -> ScalarForm {
        let mut out = Self::zero(self.chart, self.degree + 1);
        for (mask, p) in &self.components {
            for i in 0..self.chart.dim {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let dp = p.partial(i);
                if dp.is_zero() {
                    continue;
                }
                let negate = (mask & ((1 << i) - 1)).count_ones() % 2 == 1;
                out.add_component(mask | (1 << i), if negate { -&dp } else { dp });
            }
        }
        out
    }

    /// Coefficient-wise `∂/∂t`.
    pub fn partial_t(&self) -> ScalarForm {
        self.map_coefficients(|p| p.partial(T_VAR))
    }

    /// Substitutes a value for `t`.
    pub fn at_t(&self, value: &Rational) -> ScalarForm {
        self.map_coefficients(|p| p.substitute(T_VAR, value))
    }

    /// Coefficient of `eps^power` in the formal expansion.
    pub fn eps_coefficient(&self, power: u8) -> ScalarForm {
        self.map_coefficients(|p| p.coefficient_of_power(EPS_VAR, power))
    }

    /// Exact `∫₀¹ dt` applied to every coefficient.
    pub fn integrate_t(&self) -> ScalarForm {
        self.map_coefficients(Polynomial::integrate_t)
    }

    /// Value of the `frame` coefficient at `point`.
    pub fn evaluate(&self, point: &[Rational], frame: &[usize]) -> Result<Rational, Error> {
        if frame.len() != self.degree {
            return Err(Error::DegreeMismatch {
                what: "evaluation frame",
                expected: self.degree,
                found: frame.len(),
            });
        }
        if point.len() != self.chart.dim {
            return Err(Error::DimensionMismatch {
                what: "evaluation point",
                expected: self.chart.dim,
                found: point.len(),
            });
        }
        if frame.windows(2).any(|w| w[0] >= w[1]) || frame.iter().any(|&i| i >= self.chart.dim) {
            return Err(Error::DimensionMismatch {
                what: "evaluation frame (strictly increasing, in range)",
                expected: self.chart.dim,
                found: frame.iter().copied().max().unwrap_or(0) + 1,
            });
        }
        if !self.is_parameter_free() {
            return Err(Error::ParameterPresent);
        }
        self.component(frame).evaluate(point)
    }

    /// Exact integral of a top-degree form over a coordinate box, with
    /// `dx1∧…∧dxm` positively oriented.
    pub fn integrate_box(&self, bounds: &[(Rational, Rational)]) -> Result<Rational, Error> {
        if self.degree != self.chart.dim {
            return Err(Error::DegreeMismatch {
                what: "box integral",
                expected: self.chart.dim,
                found: self.degree,
            });
        }
        if bounds.len() != self.chart.dim {
            return Err(Error::DimensionMismatch {
                what: "integration box",
                expected: self.chart.dim,
                found: bounds.len(),
            });
        }
        match self.components.values().next() {
            None => Ok(Rational::zero()),
            Some(p) => p.integrate_box(bounds),
        }
    }

    /// Pullback to the face `x_{coord+1} = value`: the coordinate is frozen and
    /// every component containing its covector is dropped.
    pub fn restrict_to_face(&self, coord: usize, value: &Rational) -> ScalarForm {
        let mut out = Self::zero(self.chart, self.degree);
        for (mask, p) in &self.components {
            if mask & (1 << coord) == 0 {
                out.add_component(*mask, p.substitute(coord, value));
            }
        }
        out
    }

    /// Radial homotopy operator of the Poincaré lemma, centred at the origin:
    /// `ω = d(Kω) + K(dω)` for every form of positive degree.
    pub fn homotopy(&self) -> ScalarForm {
        let mut out = Self::zero(self.chart, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (mask, p) in &self.components {
            for (pos, i) in covector_indices(*mask).into_iter().enumerate() {
                let reduced = mask & !(1 << i);
                let mut coeff = Polynomial::zero();
                for (m, c) in p.terms() {
                    let weight = Rational::from_integer(((m.coordinate_degree() as usize + self.degree) as i64).into());
                    coeff.add_term(*m * super::Monomial::var(i), c / weight);
                }
                if pos % 2 == 1 {
                    coeff = -&coeff;
                }
                out.add_component(reduced, coeff);
            }
        }
        out
    }

    /// A form whose exterior derivative is `self`, if one exists on the chart.
    pub fn exact_preimage(&self) -> Option<ScalarForm> {
        if self.is_zero() {
            return Some(Self::zero(self.chart, self.degree.saturating_sub(1)));
        }
        if self.degree == 0 || !self.d().is_zero() {
            return None;
        }
        let k = self.homotopy();
        (k.d() == *self).then_some(k)
    }
}

impl Add<&ScalarForm> for &ScalarForm {
    type Output = ScalarForm;
    fn add(self, rhs: &ScalarForm) -> ScalarForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&ScalarForm> for &ScalarForm {
    type Output = ScalarForm;
    fn sub(self, rhs: &ScalarForm) -> ScalarForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&ScalarForm> for ScalarForm {
    fn add_assign(&mut self, rhs: &ScalarForm) {
        assert_eq!(self.chart, rhs.chart, "adding forms on different charts");
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for (m, p) in &rhs.components {
            self.add_component(*m, p.clone());
        }
    }
}

impl SubAssign<&ScalarForm> for ScalarForm {
    fn sub_assign(&mut self, rhs: &ScalarForm) {
        assert_eq!(self.chart, rhs.chart, "subtracting forms on different charts");
        assert_eq!(self.degree, rhs.degree, "subtracting forms of different degree");
        for (m, p) in &rhs.components {
            self.add_component(*m, -p);
        }
    }
}

impl Neg for &ScalarForm {
    type Output = ScalarForm;
    fn neg(self) -> ScalarForm {
        self.map_coefficients(|p| -p)
    }
}

impl fmt::Debug for ScalarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {}", self.degree, self)
    }
}

impl fmt::Display for ScalarForm {
    /// Term syntax: `3/2 x1^2 dx2 dx4 + …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (mask, p) in &self.components {
            let covs: String = covector_indices(*mask)
                .iter()
                .map(|i| format!(" dx{}", i + 1))
                .collect();
            for (m, c) in p.terms() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if *m == super::Monomial::ONE {
                    write!(f, "{c}{covs}")?;
                } else {
                    write!(f, "{c} {m}{covs}")?;
                }
            }
        }
        Ok(())
    }
}
