use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::algebra::CrossedModule;
use crate::exterior::{Chart, Polynomial, ScalarForm};
use crate::{Error, Rational};

/// Which algebra of the crossed module a form takes values in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    G,
    H,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::G => "g",
            Side::H => "h",
        })
    }
}

impl Side {
    pub fn dim(self, cm: &CrossedModule) -> usize {
        match self {
            Side::G => cm.g().dim(),
            Side::H => cm.h().dim(),
        }
    }

    pub fn labels(self, cm: &CrossedModule) -> &[String] {
        match self {
            Side::G => cm.g().labels(),
            Side::H => cm.h().labels(),
        }
    }
}

/// `Σ_a ω^a ⊗ X_a`: one scalar form per basis element, all of one degree.
#[derive(Clone, PartialEq)]
pub struct AlgebraForm {
    side: Side,
    chart: Chart,
    degree: usize,
    components: Vec<ScalarForm>,
}

impl AlgebraForm {
    pub fn zero(side: Side, chart: Chart, degree: usize, dim: usize) -> Self {
        AlgebraForm {
            side,
            chart,
            degree,
            components: vec![ScalarForm::zero(chart, degree); dim],
        }
    }

    /// Zero form sized for `cm`.
    pub fn zero_in(cm: &CrossedModule, side: Side, chart: Chart, degree: usize) -> Self {
        Self::zero(side, chart, degree, side.dim(cm))
    }

    pub fn new(side: Side, components: Vec<ScalarForm>) -> Result<Self, Error> {
        let first = components.first().ok_or(Error::DimensionMismatch {
            what: "algebra form components",
            expected: 1,
            found: 0,
        })?;
        let (chart, degree) = (first.chart(), first.degree());
        for c in &components {
            if c.chart() != chart {
                return Err(Error::ChartMismatch(chart.dim(), c.chart().dim()));
            }
            if c.degree() != degree {
                return Err(Error::DegreeMismatch {
                    what: "algebra form component",
                    expected: degree,
                    found: c.degree(),
                });
            }
        }
        Ok(AlgebraForm {
            side,
            chart,
            degree,
            components,
        })
    }

    /// `ω ⊗ basis[index]`.
    pub fn basis(side: Side, dim: usize, index: usize, form: ScalarForm) -> Self {
        let mut out = Self::zero(side, form.chart(), form.degree(), dim);
        out.components[index] = form;
        out
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarForm] {
        &self.components
    }

    pub fn component(&self, a: usize) -> &ScalarForm {
        &self.components[a]
    }

    pub fn into_components(self) -> Vec<ScalarForm> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarForm::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.components.iter().map(ScalarForm::term_count).sum()
    }

    /// First nonzero component as `(basis index, covectors, coefficient)`.
    pub fn first_nonzero(&self) -> Option<(usize, Vec<usize>, &Polynomial)> {
        self.components
            .iter()
            .enumerate()
            .find_map(|(a, c)| c.first_component().map(|(cov, p)| (a, cov, p)))
    }

    pub fn is_parameter_free(&self) -> bool {
        self.components.iter().all(ScalarForm::is_parameter_free)
    }

    /// Checks this form is `side`-valued of the given degree and sized for `cm`.
    pub fn expect(&self, cm: &CrossedModule, side: Side, degree: Option<usize>) -> Result<(), Error> {
        if self.side != side {
            return Err(Error::SideMismatch {
                expected: side,
                found: self.side,
            });
        }
        if self.dim() != side.dim(cm) {
            return Err(Error::DimensionMismatch {
                what: "algebra form",
                expected: side.dim(cm),
                found: self.dim(),
            });
        }
        if let Some(k) = degree {
            if self.degree != k {
                return Err(Error::DegreeMismatch {
                    what: "algebra form",
                    expected: k,
                    found: self.degree,
                });
            }
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&ScalarForm) -> ScalarForm) -> Self {
        let components: Vec<ScalarForm> = self.components.iter().map(f).collect();
        let degree = components.first().map_or(self.degree, ScalarForm::degree);
        AlgebraForm {
            side: self.side,
            chart: self.chart,
            degree,
            components,
        }
    }

    pub fn d(&self) -> Self {
        let mut out = self.map(ScalarForm::d);
        out.degree = self.degree + 1;
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|w| w.scale(c))
    }

    pub fn mul_poly(&self, q: &Polynomial) -> Self {
        self.map(|w| w.mul_poly(q))
    }

    pub fn partial_t(&self) -> Self {
        self.map(ScalarForm::partial_t)
    }

    pub fn at_t(&self, value: &Rational) -> Self {
        self.map(|w| w.at_t(value))
    }

    pub fn integrate_t(&self) -> Self {
        self.map(ScalarForm::integrate_t)
    }

    pub fn eps_coefficient(&self, power: u8) -> Self {
        self.map(|w| w.eps_coefficient(power))
    }

    /// Same components relabelled as `side`-valued.
    pub fn relabel(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    /// Componentwise scalar-form wedge `ω ∧ self` with a scalar form on the left.
    pub fn left_wedge(&self, w: &ScalarForm) -> Result<Self, Error> {
        let components = self
            .components
            .iter()
            .map(|c| w.wedge(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlgebraForm {
            side: self.side,
            chart: self.chart,
            degree: self.degree + w.degree(),
            components,
        })
    }

    /// Human-readable rendering with basis labels.
    pub fn describe(&self, labels: &[String]) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .zip(labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("{l}: {c}"))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("; ")
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.side, other.side, "side mismatch in algebra form arithmetic");
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in algebra form arithmetic");
        assert_eq!(self.degree, other.degree, "degree mismatch in algebra form arithmetic");
    }
}

impl fmt::Debug for AlgebraForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-valued {}-form [", self.side, self.degree)?;
        for (a, c) in self.components.iter().enumerate() {
            if a > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add<&AlgebraForm> for &AlgebraForm {
    type Output = AlgebraForm;
    fn add(self, rhs: &AlgebraForm) -> AlgebraForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&AlgebraForm> for &AlgebraForm {
    type Output = AlgebraForm;
    fn sub(self, rhs: &AlgebraForm) -> AlgebraForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&AlgebraForm> for AlgebraForm {
    fn add_assign(&mut self, rhs: &AlgebraForm) {
        self.check_compatible(rhs);
        for (a, b) in self.components.iter_mut().zip(&rhs.components) {
            *a += b;
        }
    }
}

impl SubAssign<&AlgebraForm> for AlgebraForm {
    fn sub_assign(&mut self, rhs: &AlgebraForm) {
        self.check_compatible(rhs);
        for (a, b) in self.components.iter_mut().zip(&rhs.components) {
            *a -= b;
        }
    }
}

impl Neg for &AlgebraForm {
    type Output = AlgebraForm;
    fn neg(self) -> AlgebraForm {
        self.map(|w| -w)
    }
}
