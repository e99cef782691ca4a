//! Finite-dimensional Lie algebras, differential crossed modules and
//! generalized invariant pairings `⟨X₁…Xₙ, Y⟩`.
//!
//! All tensors are dense. Axioms are not enforced at construction; they are
//! reported with exact residual tensors by [`CrossedModule::validate`] and
//! [`CrossedModule::validate_pairing`].

mod builtin;
mod file;
pub mod matrix;

use std::fmt;

use num_traits::{One, Zero};

pub use builtin::{builtin_pairing, load_builtin, BUILTIN_NAMES};
pub use file::{parse_algebra_file, AlgebraFile};
use matrix::{Matrix, RatMatrix, Ring};

use crate::{Error, Rational};

/// All multi-indices of the given shape, last index fastest.
pub(crate) fn multi_indices(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    (0..total).map(move |mut k| {
        let mut idx = vec![0; dims.len()];
        for (slot, &d) in dims.iter().enumerate().rev() {
            idx[slot] = k % d;
            k /= d;
        }
        idx
    })
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), Error> {
    if expected != found {
        return Err(Error::DimensionMismatch { what, expected, found });
    }
    Ok(())
}

/// Linear functional on matrices: weighted sum of selected entries.
type Coordinate = Vec<(usize, usize, Rational)>;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    /// `c[(a·d + b)·d + c]` is the `X_c` coefficient of `[X_a, X_b]`.
    structure: Vec<Rational>,
    rep: Option<Vec<RatMatrix>>,
    bracket_terms: Vec<(usize, usize, usize, Rational)>,
    coordinates: Option<Vec<Coordinate>>,
}

impl LieAlgebra {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        structure: Vec<Rational>,
        rep: Option<Vec<RatMatrix>>,
    ) -> Result<Self, Error> {
        let name = name.into();
        let d = labels.len();
        if d == 0 {
            return Err(Error::InvalidAlgebra(format!("{name}: empty basis")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidAlgebra(format!("{name}: duplicate label '{l}'")));
            }
        }
        check_len("structure constants", d * d * d, structure.len())?;
        if let Some(mats) = &rep {
            check_len("matrix representation", d, mats.len())?;
            let s = mats[0].rows();
            if mats.iter().any(|m| m.rows() != s || m.cols() != s) {
                return Err(Error::InvalidAlgebra(format!(
                    "{name}: representation matrices must be square of a common size"
                )));
            }
        }
        let bracket_terms = multi_indices(&[d, d, d])
            .filter_map(|i| {
                let c = &structure[(i[0] * d + i[1]) * d + i[2]];
                (!c.is_zero()).then(|| (i[0], i[1], i[2], c.clone()))
            })
            .collect();
        let coordinates = rep.as_deref().and_then(coordinate_functionals);
        Ok(LieAlgebra {
            name,
            labels,
            structure,
            rep,
            bracket_terms,
            coordinates,
        })
    }

    /// Algebra whose brackets are the commutators of the given matrices.
    pub fn from_matrices(name: impl Into<String>, labels: Vec<String>, mats: Vec<RatMatrix>) -> Result<Self, Error> {
        let name = name.into();
        let d = labels.len();
        let probe = LieAlgebra::new(
            name.clone(),
            labels.clone(),
            vec![Rational::zero(); d * d * d],
            Some(mats.clone()),
        )?;
        let mut structure = vec![Rational::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                let coeffs = probe.decompose(&mats[a].commutator(&mats[b]))?;
                for (c, v) in coeffs.into_iter().enumerate() {
                    structure[(a * d + b) * d + c] = v;
                }
            }
        }
        LieAlgebra::new(name, labels, structure, Some(mats))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> &Rational {
        let d = self.dim();
        &self.structure[(a * d + b) * d + c]
    }

    /// Nonzero `(a, b, c, c^c_{ab})`.
    pub fn bracket_terms(&self) -> &[(usize, usize, usize, Rational)] {
        &self.bracket_terms
    }

    pub fn matrix_rep(&self) -> Option<&[RatMatrix]> {
        self.rep.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket_terms.is_empty()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>, Error> {
        check_len("bracket argument", self.dim(), x.len())?;
        check_len("bracket argument", self.dim(), y.len())?;
        let mut out = vec![Rational::zero(); self.dim()];
        for (a, b, c, k) in &self.bracket_terms {
            if !x[*a].is_zero() && !y[*b].is_zero() {
                out[*c] += k * &x[*a] * &y[*b];
            }
        }
        Ok(out)
    }

    /// `ρ(x)` for a coefficient vector.
    pub fn represent(&self, x: &[Rational]) -> Result<RatMatrix, Error> {
        let mats = self
            .rep
            .as_ref()
            .ok_or_else(|| Error::MissingMatrixRep(self.name.clone()))?;
        check_len("algebra element", self.dim(), x.len())?;
        let s = mats[0].rows();
        Ok(mats
            .iter()
            .zip(x)
            .fold(RatMatrix::zeros(s, s), |acc, (m, c)| acc.add(&m.scale(c))))
    }

    /// Coefficients of a matrix in the basis `ρ(X_a)`, verified by reconstruction.
    pub fn decompose<T: Ring>(&self, m: &Matrix<T>) -> Result<Vec<T>, Error> {
        let mats = self
            .rep
            .as_ref()
            .ok_or_else(|| Error::MissingMatrixRep(self.name.clone()))?;
        let coords = self.coordinates.as_ref().ok_or(Error::NotInAlgebra)?;
        let s = mats[0].rows();
        if m.rows() != s || m.cols() != s {
            return Err(Error::DimensionMismatch {
                what: "matrix to decompose",
                expected: s,
                found: m.rows(),
            });
        }
        let coeffs: Vec<T> = coords
            .iter()
            .map(|f| {
                f.iter()
                    .fold(T::zero(), |acc, (r, c, w)| acc.plus(&m.get(*r, *c).scale(w)))
            })
            .collect();
        let rebuilt = mats
            .iter()
            .zip(&coeffs)
            .fold(Matrix::<T>::zeros(s, s), |acc, (basis, c)| {
                acc.add(&basis.map(|e| c.scale(e)))
            });
        if &rebuilt != m {
            return Err(Error::NotInAlgebra);
        }
        Ok(coeffs)
    }

    fn antisymmetry_residual(&self) -> Vec<(Vec<usize>, Rational)> {
        let d = self.dim();
        multi_indices(&[d, d, d])
            .filter_map(|i| {
                let r = self.structure_constant(i[0], i[1], i[2]) + self.structure_constant(i[1], i[0], i[2]);
                (!r.is_zero()).then_some((i, r))
            })
            .collect()
    }

    fn jacobi_residual(&self) -> Vec<(Vec<usize>, Rational)> {
        let d = self.dim();
        let c = |a, b, e| self.structure_constant(a, b, e);
        multi_indices(&[d, d, d, d])
            .filter_map(|i| {
                let (a, b, cc, dd) = (i[0], i[1], i[2], i[3]);
                let mut r = Rational::zero();
                for e in 0..d {
                    r += c(a, b, e) * c(e, cc, dd) + c(b, cc, e) * c(e, a, dd) + c(cc, a, e) * c(e, b, dd);
                }
                (!r.is_zero()).then_some((i, r))
            })
            .collect()
    }

    fn rep_residual(&self) -> Option<Vec<(Vec<usize>, Rational)>> {
        let mats = self.rep.as_ref()?;
        let d = self.dim();
        let mut out = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let lhs = mats[a].commutator(&mats[b]);
                let rhs = (0..d).fold(RatMatrix::zeros(lhs.rows(), lhs.cols()), |acc, c| {
                    acc.add(&mats[c].scale(self.structure_constant(a, b, c)))
                });
                let diff = lhs.sub(&rhs);
                for r in 0..diff.rows() {
                    for col in 0..diff.cols() {
                        if !diff.get(r, col).is_zero() {
                            out.push((vec![a, b, r, col], diff.get(r, col).clone()));
                        }
                    }
                }
            }
        }
        Some(out)
    }
}

/// Picks `d` matrix entries on which the basis is invertible and returns, per
/// basis element, the weights reading off its coefficient. `None` if the
/// representation is not faithful.
fn coordinate_functionals(mats: &[RatMatrix]) -> Option<Vec<Coordinate>> {
    let d = mats.len();
    let s = mats[0].rows();
    let positions: Vec<(usize, usize)> = (0..s).flat_map(|r| (0..s).map(move |c| (r, c))).collect();
    // Row-reduce the d × s² coefficient matrix to find pivot entries.
    let mut rows: Vec<Vec<Rational>> = mats
        .iter()
        .map(|m| positions.iter().map(|&(r, c)| m.get(r, c).clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for (col, _) in positions.iter().enumerate() {
        let Some(p) = (rank..d).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let lead = rows[rank][col].clone();
        let pivot_row: Vec<Rational> = rows[rank].iter().map(|v| v / &lead).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rows[rank] = pivot_row;
        pivots.push(positions[col]);
        rank += 1;
        if rank == d {
            break;
        }
    }
    if rank < d {
        return None;
    }
    let sub = RatMatrix::from_rows(
        mats.iter()
            .map(|m| pivots.iter().map(|&(r, c)| m.get(r, c).clone()).collect())
            .collect(),
    );
    let inv = sub.inverse().ok()?;
    Some(
        (0..d)
            .map(|a| {
                pivots
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !inv.get(*j, a).is_zero())
                    .map(|(j, &(r, c))| (r, c, inv.get(j, a).clone()))
                    .collect()
            })
            .collect(),
    )
}

/// One axiom with its nonzero residual entries.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: String,
    pub residual: Vec<(Vec<usize>, Rational)>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, residual: Vec<(Vec<usize>, Rational)>) {
        self.checks.push(AxiomCheck {
            name: name.to_string(),
            residual,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "{:<24} {status}", c.name)?;
            if let Some((idx, r)) = c.residual.first() {
                write!(f, " ({} nonzero, first {idx:?} = {r})", c.residual.len())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A differential crossed module `(h, g; α, ▷)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedModule {
    name: String,
    g: LieAlgebra,
    h: LieAlgebra,
    /// `alpha[a·dh + b]` is the `X_a` coefficient of `α(Y_b)`.
    alpha: Vec<Rational>,
    /// `action[(a·dh + c)·dh + b]` is the `Y_b` coefficient of `X_a ▷ Y_c`.
    action: Vec<Rational>,
    alpha_terms: Vec<(usize, usize, Rational)>,
    action_terms: Vec<(usize, usize, usize, Rational)>,
}

impl CrossedModule {
    pub fn new(
        name: impl Into<String>,
        g: LieAlgebra,
        h: LieAlgebra,
        alpha: Vec<Rational>,
        action: Vec<Rational>,
    ) -> Result<Self, Error> {
        let (dg, dh) = (g.dim(), h.dim());
        check_len("alpha matrix", dg * dh, alpha.len())?;
        check_len("action tensor", dg * dh * dh, action.len())?;
        let alpha_terms = multi_indices(&[dg, dh])
            .filter_map(|i| {
                let v = &alpha[i[0] * dh + i[1]];
                (!v.is_zero()).then(|| (i[0], i[1], v.clone()))
            })
            .collect();
        let action_terms = multi_indices(&[dg, dh, dh])
            .filter_map(|i| {
                let v = &action[(i[0] * dh + i[1]) * dh + i[2]];
                (!v.is_zero()).then(|| (i[0], i[1], i[2], v.clone()))
            })
            .collect();
        Ok(CrossedModule {
            name: name.into(),
            g,
            h,
            alpha,
            action,
            alpha_terms,
            action_terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn h(&self) -> &LieAlgebra {
        &self.h
    }

    pub fn alpha_entry(&self, a: usize, b: usize) -> &Rational {
        &self.alpha[a * self.h.dim() + b]
    }

    pub fn action_entry(&self, a: usize, c: usize, b: usize) -> &Rational {
        let dh = self.h.dim();
        &self.action[(a * dh + c) * dh + b]
    }

    /// Nonzero `(a, b, α^a_b)`.
    pub fn alpha_terms(&self) -> &[(usize, usize, Rational)] {
        &self.alpha_terms
    }

    /// Nonzero `(a, c, b, r^b_{ac})` with `X_a ▷ Y_c = Σ_b r^b_{ac} Y_b`.
    pub fn action_terms(&self) -> &[(usize, usize, usize, Rational)] {
        &self.action_terms
    }

    pub fn act(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>, Error> {
        check_len("action g-argument", self.g.dim(), x.len())?;
        check_len("action h-argument", self.h.dim(), y.len())?;
        let mut out = vec![Rational::zero(); self.h.dim()];
        for (a, c, b, r) in &self.action_terms {
            if !x[*a].is_zero() && !y[*c].is_zero() {
                out[*b] += r * &x[*a] * &y[*c];
            }
        }
        Ok(out)
    }

    pub fn alpha_map(&self, y: &[Rational]) -> Result<Vec<Rational>, Error> {
        check_len("alpha argument", self.h.dim(), y.len())?;
        let mut out = vec![Rational::zero(); self.g.dim()];
        for (a, b, v) in &self.alpha_terms {
            out[*a] += v * &y[*b];
        }
        Ok(out)
    }

    /// Matrix of `Y ↦ X_a ▷ Y` acting on coefficient columns.
    pub fn action_matrix(&self, a: usize) -> RatMatrix {
        let dh = self.h.dim();
        let mut m = RatMatrix::zeros(dh, dh);
        for c in 0..dh {
            for b in 0..dh {
                m.set(b, c, self.action_entry(a, c, b).clone());
            }
        }
        m
    }

    /// Matrix of `α` acting on coefficient columns (`dg × dh`).
    pub fn alpha_matrix(&self) -> RatMatrix {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        let mut m = RatMatrix::zeros(dg, dh);
        for a in 0..dg {
            for b in 0..dh {
                m.set(a, b, self.alpha_entry(a, b).clone());
            }
        }
        m
    }

    /// Exact residuals of every crossed-module axiom.
    pub fn validate(&self) -> ValidationReport {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        let unit = |d: usize, i: usize| -> Vec<Rational> {
            (0..d)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        };
        let gx: Vec<_> = (0..dg).map(|i| unit(dg, i)).collect();
        let hy: Vec<_> = (0..dh).map(|i| unit(dh, i)).collect();
        let act = |x: &[Rational], y: &[Rational]| self.act(x, y).expect("dims");
        let hbr = |x: &[Rational], y: &[Rational]| self.h.bracket(x, y).expect("dims");
        let gbr = |x: &[Rational], y: &[Rational]| self.g.bracket(x, y).expect("dims");
        let alpha = |y: &[Rational]| self.alpha_map(y).expect("dims");
        let sub = |a: Vec<Rational>, b: Vec<Rational>| -> Vec<Rational> {
            a.into_iter().zip(b).map(|(x, y)| x - y).collect()
        };
        let collect = |out: &mut Vec<(Vec<usize>, Rational)>, idx: &[usize], v: Vec<Rational>| {
            for (k, r) in v.into_iter().enumerate() {
                if !r.is_zero() {
                    let mut i = idx.to_vec();
                    i.push(k);
                    out.push((i, r));
                }
            }
        };

        let mut report = ValidationReport::default();
        report.push("g-antisymmetry", self.g.antisymmetry_residual());
        report.push("g-jacobi", self.g.jacobi_residual());
        report.push("h-antisymmetry", self.h.antisymmetry_residual());
        report.push("h-jacobi", self.h.jacobi_residual());
        if let Some(r) = self.g.rep_residual() {
            report.push("g-matrix-rep", r);
        }
        if let Some(r) = self.h.rep_residual() {
            report.push("h-matrix-rep", r);
        }

        // [X, X'] ▷ Y = X ▷ (X' ▷ Y) − X' ▷ (X ▷ Y)
        let mut rep = Vec::new();
        for idx in multi_indices(&[dg, dg, dh]) {
            let (x, xp, y) = (&gx[idx[0]], &gx[idx[1]], &hy[idx[2]]);
            let lhs = act(&gbr(x, xp), y);
            let rhs = sub(act(x, &act(xp, y)), act(xp, &act(x, y)));
            collect(&mut rep, &idx, sub(lhs, rhs));
        }
        report.push("action-representation", rep);

        // X ▷ [Y, Y'] = [X ▷ Y, Y'] + [Y, X ▷ Y']
        let mut der = Vec::new();
        for idx in multi_indices(&[dg, dh, dh]) {
            let (x, y, yp) = (&gx[idx[0]], &hy[idx[1]], &hy[idx[2]]);
            let lhs = act(x, &hbr(y, yp));
            let rhs: Vec<Rational> = hbr(&act(x, y), yp)
                .into_iter()
                .zip(hbr(y, &act(x, yp)))
                .map(|(a, b)| a + b)
                .collect();
            collect(&mut der, &idx, sub(lhs, rhs));
        }
        report.push("action-derivation", der);

        // α([Y, Y']) = [α(Y), α(Y')]
        let mut hom = Vec::new();
        for idx in multi_indices(&[dh, dh]) {
            let (y, yp) = (&hy[idx[0]], &hy[idx[1]]);
            collect(&mut hom, &idx, sub(alpha(&hbr(y, yp)), gbr(&alpha(y), &alpha(yp))));
        }
        report.push("alpha-homomorphism", hom);

        // α(X ▷ Y) = [X, α(Y)]
        let mut eqv = Vec::new();
        for idx in multi_indices(&[dg, dh]) {
            let (x, y) = (&gx[idx[0]], &hy[idx[1]]);
            collect(&mut eqv, &idx, sub(alpha(&act(x, y)), gbr(x, &alpha(y))));
        }
        report.push("alpha-equivariance", eqv);

        // α(Y) ▷ Y' = [Y, Y']
        let mut peiffer = Vec::new();
        for idx in multi_indices(&[dh, dh]) {
            let (y, yp) = (&hy[idx[0]], &hy[idx[1]]);
            collect(&mut peiffer, &idx, sub(act(&alpha(y), yp), hbr(y, yp)));
        }
        report.push("peiffer", peiffer);
        report
    }

    /// Exact residuals of the pairing axioms: slot symmetry, ad-invariance
    /// and the α-swap rule.
    pub fn validate_pairing(&self, p: &InvariantPairing) -> Result<ValidationReport, Error> {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        check_len("pairing g-dimension", dg, p.dim_g)?;
        check_len("pairing h-dimension", dh, p.dim_h)?;
        let n = p.arity;
        let mut shape = vec![dg; n];
        shape.push(dh);

        let mut symmetry = Vec::new();
        for idx in multi_indices(&shape) {
            for i in 0..n {
                for j in i + 1..n {
                    let mut swapped = idx.clone();
                    swapped.swap(i, j);
                    let r = p.get(&idx) - p.get(&swapped);
                    if !r.is_zero() {
                        let mut key = idx.clone();
                        key.extend([i, j]);
                        symmetry.push((key, r));
                    }
                }
            }
        }

        // ⟨X_{a1}…X_{an}, X_x ▷ Y_b⟩ + Σ_i ⟨…[X_x, X_{ai}]…, Y_b⟩ = 0
        let mut invariance = Vec::new();
        let mut inv_shape = shape.clone();
        inv_shape.insert(n, dg);
        for idx in multi_indices(&inv_shape) {
            let (gs, x, b) = (&idx[..n], idx[n], idx[n + 1]);
            let mut r = Rational::zero();
            let mut args: Vec<usize> = gs.to_vec();
            args.push(0);
            for c in 0..dh {
                let k = self.action_entry(x, b, c);
                if !k.is_zero() {
                    args[n] = c;
                    r += k * p.get(&args);
                }
            }
            args[n] = b;
            for i in 0..n {
                for e in 0..dg {
                    let k = self.g.structure_constant(x, gs[i], e);
                    if !k.is_zero() {
                        let mut a2 = args.clone();
                        a2[i] = e;
                        r += k * p.get(&a2);
                    }
                }
            }
            if !r.is_zero() {
                invariance.push((idx, r));
            }
        }

        // ⟨…α(Y_c)@i…, Y_b⟩ = ⟨…α(Y_b)@i…, Y_c⟩
        let mut swap = Vec::new();
        let mut swap_shape = vec![dg; n.saturating_sub(1)];
        swap_shape.extend([dh, dh]);
        for idx in multi_indices(&swap_shape) {
            let (rest, c, b) = (&idx[..n - 1], idx[n - 1], idx[n]);
            for i in 0..n {
                let mut r = Rational::zero();
                for e in 0..dg {
                    let mut args: Vec<usize> = rest.to_vec();
                    args.insert(i, e);
                    let mut lhs = args.clone();
                    lhs.push(b);
                    let mut rhs = args;
                    rhs.push(c);
                    r += self.alpha_entry(e, c) * p.get(&lhs) - self.alpha_entry(e, b) * p.get(&rhs);
                }
                if !r.is_zero() {
                    let mut key = idx.clone();
                    key.push(i);
                    swap.push((key, r));
                }
            }
        }

        let mut report = ValidationReport::default();
        report.push("pairing-symmetry", symmetry);
        report.push("pairing-ad-invariance", invariance);
        report.push("pairing-alpha-swap", swap);
        Ok(report)
    }

    /// Residual of group-level invariance
    /// `⟨gX₁g⁻¹…gXₙg⁻¹, g▷Y⟩ = ⟨X₁…Xₙ, Y⟩` for one group element, given
    /// by its adjoint matrix on g-coefficients and its action matrix on h.
    pub fn group_invariance_residual(
        &self,
        p: &InvariantPairing,
        adjoint: &RatMatrix,
        action: &RatMatrix,
    ) -> Result<Vec<(Vec<usize>, Rational)>, Error> {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        check_len("adjoint matrix", dg, adjoint.rows())?;
        check_len("action matrix", dh, action.rows())?;
        let n = p.arity;
        let mut shape = vec![dg; n];
        shape.push(dh);
        let mut out = Vec::new();
        for idx in multi_indices(&shape) {
            let mut r = -p.get(&idx);
            for (targets, v) in p.nonzero() {
                let mut w = v.clone();
                for i in 0..n {
                    w *= adjoint.get(targets[i], idx[i]);
                    if w.is_zero() {
                        break;
                    }
                }
                if w.is_zero() {
                    continue;
                }
                w *= action.get(targets[n], idx[n]);
                r += w;
            }
            if !r.is_zero() {
                out.push((idx, r));
            }
        }
        Ok(out)
    }

    /// The symmetrized-trace pairing of arity `n`: for every ordering of the
    /// g-slots and every insertion point of `ρ(α(Y_b))`, the trace of the
    /// ordered product, summed.
    pub fn pairing_from_trace(&self, n: usize) -> Result<InvariantPairing, Error> {
        if n == 0 {
            return Err(Error::ArityMismatch { arity: 0, found: 0 });
        }
        let mats = self
            .g
            .matrix_rep()
            .ok_or_else(|| Error::MissingMatrixRep(self.g.name().to_string()))?;
        let (dg, dh) = (self.g.dim(), self.h.dim());
        let alpha_mats: Vec<RatMatrix> = (0..dh)
            .map(|b| {
                let col: Vec<Rational> = (0..dg).map(|a| self.alpha_entry(a, b).clone()).collect();
                self.g.represent(&col)
            })
            .collect::<Result<_, _>>()?;
        let perms = permutations(n);
        let mut shape = vec![dg; n];
        shape.push(dh);
        let mut tensor = Vec::with_capacity(shape.iter().product());
        for idx in multi_indices(&shape) {
            let inserted = &alpha_mats[idx[n]];
            let mut total = Rational::zero();
            if !inserted.is_zero() {
                for perm in &perms {
                    let ordered: Vec<&RatMatrix> = perm.iter().map(|&i| &mats[idx[i]]).collect();
                    for pos in 0..=n {
                        let mut prod = RatMatrix::identity(inserted.rows());
                        for (k, m) in ordered.iter().enumerate() {
                            if k == pos {
                                prod = prod.mul(inserted);
                            }
                            prod = prod.mul(m);
                        }
                        if pos == n {
                            prod = prod.mul(inserted);
                        }
                        total += prod.trace();
                    }
                }
            }
            tensor.push(total);
        }
        InvariantPairing::new(n, dg, dh, tensor)
    }
}

/// `⟨X_{a1}…X_{an}, Y_b⟩ = T[a1,…,an,b]`, stored densely with `b` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPairing {
    arity: usize,
    dim_g: usize,
    dim_h: usize,
    tensor: Vec<Rational>,
    nonzero: Vec<(Vec<usize>, Rational)>,
}

impl InvariantPairing {
    pub fn new(arity: usize, dim_g: usize, dim_h: usize, tensor: Vec<Rational>) -> Result<Self, Error> {
        if arity == 0 {
            return Err(Error::ArityMismatch { arity: 0, found: 0 });
        }
        let mut shape = vec![dim_g; arity];
        shape.push(dim_h);
        check_len("pairing tensor", shape.iter().product(), tensor.len())?;
        let nonzero = multi_indices(&shape)
            .zip(&tensor)
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        Ok(InvariantPairing {
            arity,
            dim_g,
            dim_h,
            tensor,
            nonzero,
        })
    }

    /// Builds a pairing from a function of `(g-indices, h-index)`.
    pub fn from_fn(
        arity: usize,
        dim_g: usize,
        dim_h: usize,
        f: impl Fn(&[usize], usize) -> Rational,
    ) -> Result<Self, Error> {
        let mut shape = vec![dim_g; arity];
        shape.push(dim_h);
        let tensor = multi_indices(&shape).map(|i| f(&i[..arity], i[arity])).collect();
        Self::new(arity, dim_g, dim_h, tensor)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    /// Entry at `[a1, …, an, b]`.
    pub fn get(&self, idx: &[usize]) -> &Rational {
        debug_assert_eq!(idx.len(), self.arity + 1);
        let mut k = 0;
        for &a in &idx[..self.arity] {
            k = k * self.dim_g + a;
        }
        &self.tensor[k * self.dim_h + idx[self.arity]]
    }

    pub fn nonzero(&self) -> &[(Vec<usize>, Rational)] {
        &self.nonzero
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}
