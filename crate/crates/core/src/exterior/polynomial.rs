//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables live in fixed slots: `0..MAX_DIM` are the chart coordinates
//! `x1..x9`, [`EPS_VAR`] is a formal nilpotent parameter used for first-order
//! expansions and [`T_VAR`] is the interpolation parameter `t`. Exterior
//! derivatives only ever differentiate the coordinate slots.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Rational};

/// Largest supported chart dimension.
pub const MAX_DIM: usize = 9;
/// Slot of the formal first-order parameter.
pub const EPS_VAR: usize = 14;
/// Slot of the homotopy parameter `t`.
pub const T_VAR: usize = 15;
/// Largest total coordinate degree accepted for user-supplied coefficients.
pub const MAX_INPUT_DEGREE: u32 = 8;

const SLOTS: usize = 16;
const MAX_EXPONENT: u8 = 127;
const GUARD: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

/// Exponent vector packed one byte per variable slot.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(slot: usize) -> Self {
        Self::var_pow(slot, 1)
    }

    pub fn var_pow(slot: usize, exp: u8) -> Self {
        assert!(slot < SLOTS, "variable slot {slot} out of range");
        assert!(exp <= MAX_EXPONENT, "exponent {exp} too large");
        Monomial((exp as u128) << (8 * slot))
    }

    pub fn from_exponents(exps: &[(usize, u8)]) -> Self {
        exps.iter()
            .fold(Monomial::ONE, |m, &(slot, e)| m * Monomial::var_pow(slot, e))
    }

    #[inline]
    pub fn exponent(self, slot: usize) -> u8 {
        ((self.0 >> (8 * slot)) & 0xff) as u8
    }

    fn with_exponent(self, slot: usize, exp: u8) -> Self {
        let mask = !(0xffu128 << (8 * slot));
        Monomial((self.0 & mask) | ((exp as u128) << (8 * slot)))
    }

    /// Total degree over the coordinate slots only.
    pub fn coordinate_degree(self) -> u32 {
        (0..MAX_DIM).map(|i| self.exponent(i) as u32).sum()
    }

    /// Highest coordinate slot carrying a nonzero exponent, if any.
    pub fn max_coordinate(self) -> Option<usize> {
        (0..MAX_DIM).rev().find(|&i| self.exponent(i) > 0)
    }

    pub fn is_parameter_free(self) -> bool {
        self.exponent(T_VAR) == 0 && self.exponent(EPS_VAR) == 0
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    #[inline]
    fn mul(self, rhs: Monomial) -> Monomial {
        let sum = self.0 + rhs.0;
        assert!(sum & GUARD == 0, "monomial exponent overflow");
        Monomial(sum)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for slot in 0..SLOTS {
            let e = self.exponent(slot);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match slot {
                T_VAR => f.write_str("t")?,
                EPS_VAR => f.write_str("eps")?,
                i => write!(f, "x{}", i + 1)?,
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// The coordinate `x_{i+1}`.
    pub fn coordinate(i: usize) -> Self {
        assert!(i < MAX_DIM, "coordinate index {i} out of range");
        Self::term(Rational::one(), Monomial::var(i))
    }

    pub fn t() -> Self {
        Self::term(Rational::one(), Monomial::var(T_VAR))
    }

    pub fn eps() -> Self {
        Self::term(Rational::one(), Monomial::var(EPS_VAR))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Maximum total coordinate degree, or `None` for the zero polynomial.
    pub fn coordinate_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.coordinate_degree()).max()
    }

    pub fn degree_in(&self, slot: usize) -> u8 {
        self.terms.keys().map(|m| m.exponent(slot)).max().unwrap_or(0)
    }

    pub fn is_parameter_free(&self) -> bool {
        self.terms.keys().all(|m| m.is_parameter_free())
    }

    pub fn max_coordinate(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.max_coordinate()).max()
    }

    pub fn partial(&self, slot: usize) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(slot);
            if e == 0 {
                continue;
            }
            out.add_term(m.with_exponent(slot, e - 1), c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Substitutes `value` for the variable in `slot`.
    pub fn substitute(&self, slot: usize, value: &Rational) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(slot);
            let factor = pow(value, e as u32);
            out.add_term(m.with_exponent(slot, 0), c * factor);
        }
        out
    }

    /// Coefficient polynomial of `var^power`.
    pub fn coefficient_of_power(&self, slot: usize, power: u8) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(slot) == power)
                .map(|(m, c)| (m.with_exponent(slot, 0), c.clone()))
                .collect(),
        }
    }

    /// Exact `∫₀¹ dt`: each `tᵖ q(x)` becomes `q(x)/(p+1)`.
    pub fn integrate_t(&self) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let p = m.exponent(T_VAR) as i64;
            out.add_term(m.with_exponent(T_VAR, 0), c / Rational::from_integer((p + 1).into()));
        }
        out
    }

    /// Evaluates at a coordinate point. Fails if `t` or `eps` occur or the
    /// polynomial references a coordinate beyond the point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, Error> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            if !m.is_parameter_free() {
                return Err(Error::ParameterPresent);
            }
            let mut v = c.clone();
            for slot in 0..MAX_DIM {
                let e = m.exponent(slot);
                if e == 0 {
                    continue;
                }
                let x = point.get(slot).ok_or(Error::DimensionMismatch {
                    what: "evaluation point",
                    expected: slot + 1,
                    found: point.len(),
                })?;
                v *= pow(x, e as u32);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Exact iterated integral over a coordinate box, one interval per
    /// coordinate. Fails on parameters.
    pub fn integrate_box(&self, bounds: &[(Rational, Rational)]) -> Result<Rational, Error> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            if !m.is_parameter_free() {
                return Err(Error::ParameterPresent);
            }
            if let Some(top) = m.max_coordinate() {
                if top >= bounds.len() {
                    return Err(Error::DimensionMismatch {
                        what: "integration box",
                        expected: top + 1,
                        found: bounds.len(),
                    });
                }
            }
            let mut v = c.clone();
            for (slot, (lo, hi)) in bounds.iter().enumerate() {
                let e = m.exponent(slot) as u32 + 1;
                let k = Rational::from_integer(e.into());
                v *= (pow(hi, e) - pow(lo, e)) / k;
            }
            acc += v;
        }
        Ok(acc)
    }
}

pub(crate) fn pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(*ma * *mb, ca * cb);
            }
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Polynomial::one()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    /// Writes terms in the scenario term syntax, e.g. `3/2 x1^2 + -1 x2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} {m}")?;
            }
        }
        Ok(())
    }
}
