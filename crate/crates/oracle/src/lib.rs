//! Reference implementation of the exterior calculus of 2-connections.
//!
//! Everything here is written for clarity rather than speed: polynomials are
//! maps from exponent vectors to coefficients, forms are maps from sorted
//! index lists to polynomials, wedge products are expanded shuffle by
//! shuffle, and pairings are contracted over every index tuple. It shares no
//! code with the main engine and is only used to cross-check it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial in `nvars` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.push(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.push(e, Q::one());
        p
    }

    fn push(&mut self, e: Vec<u32>, c: Q) {
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.push(e.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.push(e, c1 * c2);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.push(e2, c * Q::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }

    /// `∫₀¹ p dv_i`.
    pub fn integrate_unit(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            out.push(e2, c / Q::from_integer(BigInt::from(k + 1)));
        }
        out
    }

    /// Replaces variable `i` by the constant `v`.
    pub fn substitute(&self, i: usize, v: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            out.push(e2, c * pow(v, k));
        }
        out
    }

    /// Value at a point with one coordinate per variable; missing trailing
    /// variables count as zero.
    pub fn eval(&self, point: &[Q]) -> Q {
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    v *= pow(point.get(i).unwrap_or(&Q::zero()), k);
                }
            }
            total += v;
        }
        total
    }
}

fn pow(v: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * v)
}

/// Differential form on coordinates `x0..x(m−1)`; polynomial coefficients may
/// carry extra variables beyond the coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    m: usize,
    nvars: usize,
    comps: BTreeMap<Vec<usize>, Poly>,
}

impl Form {
    pub fn zero(m: usize, nvars: usize) -> Self {
        Form {
            m,
            nvars,
            comps: BTreeMap::new(),
        }
    }

    /// `p · dx_{i1} ∧ … ∧ dx_{ik}` for any (not necessarily sorted) index list.
    pub fn term(m: usize, p: Poly, idx: &[usize]) -> Self {
        let nvars = p.nvars;
        let mut out = Form::zero(m, nvars);
        if let Some((sorted, sign)) = sort_with_sign(idx) {
            out.push(sorted, p.scale(&q(sign, 1)));
        }
        out
    }

    fn push(&mut self, idx: Vec<usize>, p: Poly) {
        let sum = match self.comps.remove(&idx) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.comps.insert(idx, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.comps.iter()
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (i, p) in &o.comps {
            out.push(i.clone(), p.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Form {
        self.mul_poly(&Poly::constant(self.nvars, c.clone()))
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul_poly(&self, p: &Poly) -> Form {
        let mut out = Form::zero(self.m, self.nvars);
        for (i, c) in &self.comps {
            out.push(i.clone(), c.mul(p));
        }
        out
    }

    /// Wedge product expanded term by term: concatenate the index lists and
    /// sort, counting transpositions.
    pub fn wedge(&self, o: &Form) -> Form {
        let mut out = Form::zero(self.m, self.nvars);
        for (i1, p1) in &self.comps {
            for (i2, p2) in &o.comps {
                let joined: Vec<usize> = i1.iter().chain(i2).copied().collect();
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    out.push(sorted, p1.mul(p2).scale(&q(sign, 1)));
                }
            }
        }
        out
    }

    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.m, self.nvars);
        for (idx, p) in &self.comps {
            for i in 0..self.m {
                let dp = p.partial(i);
                if dp.is_zero() {
                    continue;
                }
                let mut joined = vec![i];
                joined.extend(idx);
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    out.push(sorted, dp.scale(&q(sign, 1)));
                }
            }
        }
        out
    }

    /// `∫₀¹ dv` applied to every coefficient.
    pub fn integrate_unit(&self, var: usize) -> Form {
        let mut out = Form::zero(self.m, self.nvars);
        for (i, p) in &self.comps {
            out.push(i.clone(), p.integrate_unit(var));
        }
        out
    }

    /// Pullback to the hyperplane `x_coord = value`.
    pub fn restrict(&self, coord: usize, value: &Q) -> Form {
        let mut out = Form::zero(self.m, self.nvars);
        for (i, p) in &self.comps {
            if !i.contains(&coord) {
                out.push(i.clone(), p.substitute(coord, value));
            }
        }
        out
    }

    /// Every component evaluated at `point`; zero values are dropped.
    pub fn eval(&self, point: &[Q]) -> BTreeMap<Vec<usize>, Q> {
        self.comps
            .iter()
            .map(|(i, p)| (i.clone(), p.eval(point)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

/// Sorts by adjacent transpositions; `None` when an index repeats.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Raw structure tensors of a differential crossed module.
///
/// `g_bracket[a][b][c]`: `[X_a, X_b] = Σ g_bracket[a][b][c] X_c`;
/// `h_bracket` likewise; `action[a][c][b]`: `X_a ▷ Y_c = Σ action[a][c][b] Y_b`;
/// `alpha[b][a]`: `α(Y_b) = Σ alpha[b][a] X_a`.
#[derive(Debug, Clone)]
pub struct Module {
    pub g_bracket: Vec<Vec<Vec<Q>>>,
    pub h_bracket: Vec<Vec<Vec<Q>>>,
    pub action: Vec<Vec<Vec<Q>>>,
    pub alpha: Vec<Vec<Q>>,
}

impl Module {
    pub fn dim_g(&self) -> usize {
        self.g_bracket.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_bracket.len()
    }
}

/// Algebra-valued form: one scalar form per basis element.
pub type VForm = Vec<Form>;

pub fn vzero(dim: usize, m: usize, nvars: usize) -> VForm {
    vec![Form::zero(m, nvars); dim]
}

pub fn vadd(x: &VForm, y: &VForm) -> VForm {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

pub fn vsub(x: &VForm, y: &VForm) -> VForm {
    x.iter().zip(y).map(|(a, b)| a.sub(b)).collect()
}

pub fn vscale(x: &VForm, c: &Q) -> VForm {
    x.iter().map(|a| a.scale(c)).collect()
}

pub fn vmul_poly(x: &VForm, p: &Poly) -> VForm {
    x.iter().map(|a| a.mul_poly(p)).collect()
}

pub fn vd(x: &VForm) -> VForm {
    x.iter().map(Form::d).collect()
}

fn contract(tensor: &[Vec<Vec<Q>>], x: &VForm, y: &VForm, out_dim: usize) -> VForm {
    let (m, nvars) = (x[0].m, x[0].nvars);
    let mut out = vzero(out_dim, m, nvars);
    for (a, xa) in x.iter().enumerate() {
        for (b, yb) in y.iter().enumerate() {
            let w = xa.wedge(yb);
            if w.is_zero() {
                continue;
            }
            for (c, k) in tensor[a][b].iter().enumerate() {
                if !k.is_zero() {
                    out[c] = out[c].add(&w.scale(k));
                }
            }
        }
    }
    out
}

/// `x ∧^{[,]} y` for g-valued forms.
pub fn bracket_g(md: &Module, x: &VForm, y: &VForm) -> VForm {
    contract(&md.g_bracket, x, y, md.dim_g())
}

/// `x ∧^{[,]} y` for h-valued forms.
pub fn bracket_h(md: &Module, x: &VForm, y: &VForm) -> VForm {
    contract(&md.h_bracket, x, y, md.dim_h())
}

/// `x ∧^▷ w` with `x` g-valued and `w` h-valued.
pub fn act(md: &Module, x: &VForm, w: &VForm) -> VForm {
    contract(&md.action, x, w, md.dim_h())
}

pub fn alpha(md: &Module, w: &VForm) -> VForm {
    let (m, nvars) = (w[0].m, w[0].nvars);
    let mut out = vzero(md.dim_g(), m, nvars);
    for (b, wb) in w.iter().enumerate() {
        for (a, k) in md.alpha[b].iter().enumerate() {
            if !k.is_zero() {
                out[a] = out[a].add(&wb.scale(k));
            }
        }
    }
    out
}

/// `(F, G)` with `F = dA + ½A ∧^{[,]} A − α(B)` and `G = dB + A ∧^▷ B`.
pub fn curvatures(md: &Module, a: &VForm, b: &VForm) -> (VForm, VForm) {
    let f = vsub(&vadd(&vd(a), &vscale(&bracket_g(md, a, a), &q(1, 2))), &alpha(md, b));
    let g = vadd(&vd(b), &act(md, a, b));
    (f, g)
}

/// Multilinear pairing `gⁿ × h → Q` stored sparsely by index tuple
/// `(a1, …, an, b)`.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub arity: usize,
    pub entries: BTreeMap<Vec<usize>, Q>,
}

impl Pairing {
    pub fn get(&self, idx: &[usize]) -> Q {
        self.entries.get(idx).cloned().unwrap_or_else(Q::zero)
    }
}

fn all_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

/// `⟨x1 ∧ … ∧ xn, w⟩ = Σ T(a1..an, b) x1^{a1} ∧ … ∧ xn^{an} ∧ w^b`, summed
/// over every index tuple.
pub fn pair(p: &Pairing, gs: &[&VForm], w: &VForm) -> Form {
    assert_eq!(gs.len(), p.arity, "pairing arity");
    let (m, nvars) = (w[0].m, w[0].nvars);
    let mut dims: Vec<usize> = gs.iter().map(|x| x.len()).collect();
    dims.push(w.len());
    let mut out = Form::zero(m, nvars);
    for idx in all_tuples(&dims) {
        let k = p.get(&idx);
        if k.is_zero() {
            continue;
        }
        let mut prod = Form::term(m, Poly::constant(nvars, Q::one()), &[]);
        for (slot, x) in gs.iter().enumerate() {
            prod = prod.wedge(&x[idx[slot]]);
        }
        prod = prod.wedge(&w[idx[gs.len()]]);
        out = out.add(&prod.scale(&k));
    }
    out
}

/// `⟨first ∧ fill ∧ … ∧ fill, w⟩` with the remaining slots filled.
pub fn pair_filled(p: &Pairing, first: &[&VForm], fill: &VForm, w: &VForm) -> Form {
    let mut gs: Vec<&VForm> = first.to_vec();
    while gs.len() < p.arity {
        gs.push(fill);
    }
    pair(p, &gs, w)
}

/// `⟨Fⁿ, G⟩`.
pub fn p_form(md: &Module, p: &Pairing, a: &VForm, b: &VForm) -> Form {
    let (f, g) = curvatures(md, a, b);
    pair_filled(p, &[], &f, &g)
}

/// The straight-line family between two connections, with the parameter
/// `t` stored as polynomial variable `t_var`.
pub struct Family {
    pub theta: VForm,
    pub phi: VForm,
    pub f_t: VForm,
    pub g_t: VForm,
}

pub fn family(md: &Module, t_var: usize, a0: &VForm, b0: &VForm, a1: &VForm, b1: &VForm) -> Family {
    let nvars = a0[0].nvars;
    let t = Poly::var(nvars, t_var);
    let theta = vsub(a1, a0);
    let phi = vsub(b1, b0);
    let a_t = vadd(a0, &vmul_poly(&theta, &t));
    let b_t = vadd(b0, &vmul_poly(&phi, &t));
    let (f_t, g_t) = curvatures(md, &a_t, &b_t);
    Family { theta, phi, f_t, g_t }
}

/// `∫₀¹ { n⟨θ ∧ F_tⁿ⁻¹, G_t⟩ + ⟨F_tⁿ, Φ⟩ } dt`.
pub fn ast_form(md: &Module, p: &Pairing, t_var: usize, a0: &VForm, b0: &VForm, a1: &VForm, b1: &VForm) -> Form {
    let fam = family(md, t_var, a0, b0, a1, b1);
    let n = q(p.arity as i64, 1);
    pair_filled(p, &[&fam.theta], &fam.f_t, &fam.g_t)
        .scale(&n)
        .add(&pair_filled(p, &[], &fam.f_t, &fam.phi))
        .integrate_unit(t_var)
}

/// Boundary term of the variation of the transgression action.
#[allow(clippy::too_many_arguments)]
pub fn boundary_term(
    md: &Module,
    p: &Pairing,
    t_var: usize,
    (a0, b0, a1, b1): (&VForm, &VForm, &VForm, &VForm),
    (da0, db0, da1, db1): (&VForm, &VForm, &VForm, &VForm),
) -> Form {
    let fam = family(md, t_var, a0, b0, a1, b1);
    let nvars = a0[0].nvars;
    let t = Poly::var(nvars, t_var);
    let da_t = vadd(da0, &vmul_poly(&vsub(da1, da0), &t));
    let db_t = vadd(db0, &vmul_poly(&vsub(db1, db0), &t));
    let n = p.arity as i64;
    let mut sum = pair_filled(p, &[&fam.theta], &fam.f_t, &db_t).sub(&pair_filled(p, &[&da_t], &fam.f_t, &fam.phi));
    if n >= 2 {
        sum = sum.add(&pair_filled(p, &[&fam.theta, &da_t], &fam.f_t, &fam.g_t).scale(&q(n - 1, 1)));
    }
    sum.scale(&q(n, 1)).integrate_unit(t_var)
}

/// Square matrix with rational entries, row-major.
pub type Mat = Vec<Vec<Q>>;

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                .collect()
        })
        .collect()
}

fn trace(x: &Mat) -> Q {
    (0..x.len()).fold(Q::zero(), |acc, i| acc + &x[i][i])
}

fn perms(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in perms(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// `T(a1..an, b) = Σ_σ Σ_k tr(X_{σ1} ⋯ X_{σk} · H_b · X_{σ(k+1)} ⋯ X_{σn})`.
pub fn trace_pairing(g_mats: &[Mat], h_mats: &[Mat], n: usize) -> Pairing {
    let mut dims = vec![g_mats.len(); n];
    dims.push(h_mats.len());
    let mut entries = BTreeMap::new();
    for idx in all_tuples(&dims) {
        let mut total = Q::zero();
        for perm in perms(&(0..n).collect::<Vec<_>>()) {
            for k in 0..=n {
                let mut word: Vec<&Mat> = perm.iter().map(|&s| &g_mats[idx[s]]).collect();
                word.insert(k, &h_mats[idx[n]]);
                let prod = word[1..].iter().fold(word[0].clone(), |acc, x| mat_mul(&acc, x));
                total += trace(&prod);
            }
        }
        if !total.is_zero() {
            entries.insert(idx, total);
        }
    }
    Pairing { arity: n, entries }
}

/// Solves `Σ_a c_a M_a = target` by Gaussian elimination; `None` if
/// inconsistent.
fn solve_span(basis: &[Mat], target: &Mat) -> Option<Vec<Q>> {
    let cols = basis.len();
    let flat = |m: &Mat| m.iter().flatten().cloned().collect::<Vec<Q>>();
    let b_flat: Vec<Vec<Q>> = basis.iter().map(flat).collect();
    let t_flat = flat(target);
    let mut rows: Vec<Vec<Q>> = (0..t_flat.len())
        .map(|r| {
            let mut row: Vec<Q> = (0..cols).map(|c| b_flat[c][r].clone()).collect();
            row.push(t_flat[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c].clone();
                for j in 0..=cols {
                    let v = &rows[r][j] * &k;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut out = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = rows[i][cols].clone();
    }
    Some(out)
}

/// `M[b][a]` with `g⁻¹ X_a g = Σ_b M[b][a] X_b`.
pub fn adjoint_matrix(g_mats: &[Mat], g: &Mat, ginv: &Mat) -> Mat {
    let cols: Vec<Vec<Q>> = g_mats
        .iter()
        .map(|x| solve_span(g_mats, &mat_mul(&mat_mul(ginv, x), g)).expect("conjugate stays in the algebra"))
        .collect();
    (0..g_mats.len())
        .map(|b| cols.iter().map(|c| c[b].clone()).collect())
        .collect()
}

/// `y_b = Σ_a m[b][a] x_a`.
pub fn vlinear(m: &Mat, x: &VForm) -> VForm {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(Form::zero(x[0].m, x[0].nvars), |acc, (k, xa)| acc.add(&xa.scale(k)))
        })
        .collect()
}

/// 2-gauge transform by a constant group element: `A' = Ad·A + α(φ)`,
/// `B' = act·B + dφ + A' ∧^▷ φ − ½[φ, φ]`.
pub fn gauge_transform_constant(
    md: &Module,
    adjoint: &Mat,
    action: &Mat,
    a: &VForm,
    b: &VForm,
    phi: &VForm,
) -> (VForm, VForm) {
    let a2 = vadd(&vlinear(adjoint, a), &alpha(md, phi));
    let b2 = vadd(&vlinear(action, b), &vd(phi));
    let b2 = vadd(&b2, &act(md, &a2, phi));
    let b2 = vsub(&b2, &vscale(&bracket_h(md, phi, phi), &q(1, 2)));
    (a2, b2)
}
