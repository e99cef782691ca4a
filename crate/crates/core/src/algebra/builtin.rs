//! Built-in crossed modules.

use num_traits::Zero;

use super::matrix::RatMatrix;
use super::{CrossedModule, InvariantPairing, LieAlgebra};
use crate::{rat, Error, Rational};

pub const BUILTIN_NAMES: [&str; 4] = ["poincare2", "abelian_tt", "adjoint_so21", "adjoint_gl2"];

/// Levi-Civita symbol with `ε(0,1,2) = 1`.
fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        return 0;
    }
    let inversions = (i > j) as i64 + (i > k) as i64 + (j > k) as i64;
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Minkowski metric `diag(−1, 1, 1)`.
fn eta(i: usize) -> i64 {
    if i == 0 {
        -1
    } else {
        1
    }
}

fn labels(prefix: &str, d: usize) -> Vec<String> {
    (0..d).map(|i| format!("{prefix}{i}")).collect()
}

/// `[J_i, J_j] = Σ_k ε(i,j,k) η_kk J_k`.
fn so21_structure() -> Vec<Rational> {
    let mut c = Vec::with_capacity(27);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c.push(rat(levi_civita(i, j, k) * eta(k), 1));
            }
        }
    }
    c
}

/// Adjoint matrices `ρ(X_a)[c][b] = c^c_{ab}`.
fn adjoint_matrices(structure: &[Rational], d: usize) -> Vec<RatMatrix> {
    (0..d)
        .map(|a| {
            let mut m = RatMatrix::zeros(d, d);
            for b in 0..d {
                for c in 0..d {
                    m.set(c, b, structure[(a * d + b) * d + c].clone());
                }
            }
            m
        })
        .collect()
}

fn so21(prefix: &str) -> Result<LieAlgebra, Error> {
    let c = so21_structure();
    let rep = adjoint_matrices(&c, 3);
    LieAlgebra::new("so(2,1)", labels(prefix, 3), c, Some(rep))
}

fn identity_alpha(d: usize) -> Vec<Rational> {
    (0..d * d)
        .map(|k| if k / d == k % d { rat(1, 1) } else { rat(0, 1) })
        .collect()
}

/// Module with `h = g`, `α = id` and the adjoint action.
fn adjoint_module(name: &str, g: LieAlgebra, h: LieAlgebra) -> Result<CrossedModule, Error> {
    let d = g.dim();
    let mut action = Vec::with_capacity(d * d * d);
    for a in 0..d {
        for c in 0..d {
            for b in 0..d {
                action.push(g.structure_constant(a, c, b).clone());
            }
        }
    }
    CrossedModule::new(name, g, h, identity_alpha(d), action)
}

fn gl2(prefix: &str) -> Result<LieAlgebra, Error> {
    let mut mats = Vec::new();
    let mut names = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            let mut m = RatMatrix::zeros(2, 2);
            m.set(r, c, rat(1, 1));
            mats.push(m);
            names.push(format!("{prefix}{}{}", r + 1, c + 1));
        }
    }
    LieAlgebra::from_matrices("gl(2)", names, mats)
}

fn module(name: &str) -> Result<CrossedModule, Error> {
    match name {
        "poincare2" => {
            let g = so21("J")?;
            let h = LieAlgebra::new("R3", labels("P", 3), vec![Rational::zero(); 27], None)?;
            // J_i ▷ P_a = Σ_b ε(i,a,b) η_bb P_b
            let mut action = Vec::with_capacity(27);
            for i in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        action.push(rat(levi_civita(i, a, b) * eta(b), 1));
                    }
                }
            }
            CrossedModule::new(name, g, h, vec![Rational::zero(); 9], action)
        }
        "abelian_tt" => {
            let t = || {
                LieAlgebra::new(
                    "t",
                    vec!["e".to_string()],
                    vec![rat(0, 1)],
                    Some(vec![RatMatrix::identity(1)]),
                )
            };
            CrossedModule::new(name, t()?, t()?, vec![rat(1, 1)], vec![rat(0, 1)])
        }
        "adjoint_so21" => adjoint_module(name, so21("J")?, so21("Y")?),
        "adjoint_gl2" => adjoint_module(name, gl2("E")?, gl2("F")?),
        other => Err(Error::UnknownModule(other.to_string())),
    }
}

/// The default pairing of arity `n` for a built-in module.
pub fn builtin_pairing(name: &str, n: usize) -> Result<InvariantPairing, Error> {
    let cm = module(name)?;
    if n == 0 {
        return Err(Error::NoPairing {
            module: name.to_string(),
            arity: n,
        });
    }
    match name {
        "poincare2" if n == 1 => {
            InvariantPairing::from_fn(1, 3, 3, |g, b| if g[0] == b { rat(eta(b), 1) } else { rat(0, 1) })
        }
        "poincare2" => Err(Error::NoPairing {
            module: name.to_string(),
            arity: n,
        }),
        "abelian_tt" => InvariantPairing::from_fn(n, 1, 1, |_, _| rat(1, 1)),
        _ => cm.pairing_from_trace(n),
    }
}

/// Built-in module with its arity-1 pairing.
pub fn load_builtin(name: &str) -> Result<(CrossedModule, InvariantPairing), Error> {
    Ok((module(name)?, builtin_pairing(name, 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name() {
        assert_eq!(load_builtin("e8").unwrap_err(), Error::UnknownModule("e8".into()));
    }

    #[test]
    fn poincare_pairing_is_eta() {
        let (_, p) = load_builtin("poincare2").unwrap();
        assert_eq!(p.get(&[0, 0]), &rat(-1, 1));
        assert_eq!(p.get(&[1, 1]), &rat(1, 1));
        assert_eq!(p.get(&[2, 2]), &rat(1, 1));
        assert_eq!(p.get(&[0, 1]), &rat(0, 1));
        assert!(builtin_pairing("poincare2", 2).is_err());
    }

    #[test]
    fn antidiagonal_poincare_pairing_breaks_invariance() {
        let (cm, _) = load_builtin("poincare2").unwrap();
        let bad = InvariantPairing::from_fn(1, 3, 3, |g, b| if g[0] + b == 2 { rat(1, 1) } else { rat(0, 1) }).unwrap();
        let report = cm.validate_pairing(&bad).unwrap();
        assert!(!report.get("pairing-ad-invariance").unwrap().passed());
    }

    #[test]
    fn higher_arity_pairings_validate() {
        for name in ["abelian_tt", "adjoint_so21", "adjoint_gl2"] {
            for n in 1..=3 {
                let cm = module(name).unwrap();
                let p = builtin_pairing(name, n).unwrap();
                assert!(cm.validate_pairing(&p).unwrap().passed(), "{name} n={n}");
            }
        }
        assert!(builtin_pairing("adjoint_so21", 2).unwrap().is_zero());
        assert!(!builtin_pairing("adjoint_gl2", 2).unwrap().is_zero());
    }
}
