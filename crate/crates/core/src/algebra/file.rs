//! Custom algebra definition files.
//!
//! ```text
//! name my_module
//! [g]
//! basis J0 J1 J2
//! J0 J1 J2 = 1          # [X_a, X_b] has X_c coefficient 1
//! rep_size 3
//! rep J0 2 3 = -1       # entry (row 2, column 3) of ρ(J0)
//! [h]
//! basis P0 P1 P2
//! [alpha]
//! J0 P0 = 1             # α(Y_b) has X_a coefficient 1
//! [action]
//! J0 P1 P2 = 1          # X_a ▷ Y_c has Y_b coefficient 1
//! [pairing n=1]
//! J0 P0 = -1
//! ```
//!
//! Indices are basis labels or 1-based integers; matrix rows and columns are
//! 1-based. `#` starts a comment. Omitted entries are zero.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::matrix::RatMatrix;
use super::{CrossedModule, InvariantPairing, LieAlgebra};
use crate::exterior::term::{parse_rational, tokens_with_columns};
use crate::{Error, Rational};

/// A parsed algebra file: the module and every pairing it declares.
#[derive(Debug, Clone)]
pub struct AlgebraFile {
    pub module: CrossedModule,
    pub pairings: Vec<InvariantPairing>,
}

impl AlgebraFile {
    pub fn pairing(&self, n: usize) -> Option<&InvariantPairing> {
        self.pairings.iter().find(|p| p.arity() == n)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Header,
    G,
    H,
    Alpha,
    Action,
    Pairing(usize),
}

#[derive(Default)]
struct AlgebraDraft {
    basis: Option<(usize, Vec<String>)>,
    structure: BTreeMap<Vec<usize>, (usize, Rational)>,
    rep_size: Option<usize>,
    rep: BTreeMap<Vec<usize>, (usize, Rational)>,
    /// Raw entries awaiting the basis: (line, tokens, value).
    pending: Vec<Entry>,
}

struct Entry {
    line: usize,
    indices: Vec<(usize, String)>,
    value: Rational,
    rep: bool,
}

fn resolve(labels: &[String], line: usize, col: usize, tok: &str) -> Result<usize, Error> {
    if let Some(i) = labels.iter().position(|l| l == tok) {
        return Ok(i);
    }
    match tok.parse::<usize>() {
        Ok(i) if (1..=labels.len()).contains(&i) => Ok(i - 1),
        _ => Err(Error::parse(line, col, format!("unknown basis element '{tok}'"))),
    }
}

fn resolve_1based(limit: usize, line: usize, col: usize, tok: &str) -> Result<usize, Error> {
    match tok.parse::<usize>() {
        Ok(i) if (1..=limit).contains(&i) => Ok(i - 1),
        _ => Err(Error::parse(
            line,
            col,
            format!("matrix index '{tok}' outside 1..={limit}"),
        )),
    }
}

fn insert_unique(
    map: &mut BTreeMap<Vec<usize>, (usize, Rational)>,
    key: Vec<usize>,
    line: usize,
    value: Rational,
) -> Result<(), Error> {
    if let Some((first, _)) = map.get(&key) {
        return Err(Error::parse(
            line,
            1,
            format!("duplicate entry (first given on line {first})"),
        ));
    }
    map.insert(key, (line, value));
    Ok(())
}

impl AlgebraDraft {
    fn finish(mut self, name: &str, section: &str) -> Result<LieAlgebra, Error> {
        let (_, labels) = self
            .basis
            .take()
            .ok_or_else(|| Error::parse(0, 0, format!("section [{section}] has no basis line")))?;
        let d = labels.len();
        for e in std::mem::take(&mut self.pending) {
            if e.rep {
                let s = self
                    .rep_size
                    .ok_or_else(|| Error::parse(e.line, 1, "rep entry before rep_size"))?;
                let a = resolve(&labels, e.line, e.indices[0].0, &e.indices[0].1)?;
                let r = resolve_1based(s, e.line, e.indices[1].0, &e.indices[1].1)?;
                let c = resolve_1based(s, e.line, e.indices[2].0, &e.indices[2].1)?;
                insert_unique(&mut self.rep, vec![a, r, c], e.line, e.value)?;
            } else {
                let idx = e
                    .indices
                    .iter()
                    .map(|(col, t)| resolve(&labels, e.line, *col, t))
                    .collect::<Result<Vec<_>, _>>()?;
                insert_unique(&mut self.structure, idx, e.line, e.value)?;
            }
        }
        let mut structure = vec![Rational::zero(); d * d * d];
        for (k, (_, v)) in self.structure {
            structure[(k[0] * d + k[1]) * d + k[2]] = v;
        }
        let rep = self.rep_size.map(|s| {
            let mut mats = vec![RatMatrix::zeros(s, s); d];
            for (k, (_, v)) in &self.rep {
                mats[k[0]].set(k[1], k[2], v.clone());
            }
            mats
        });
        LieAlgebra::new(format!("{name}.{section}"), labels, structure, rep)
    }
}

/// Parses an algebra definition file.
pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile, Error> {
    let mut name = "custom".to_string();
    let mut section = Section::Header;
    let mut seen: Vec<Section> = Vec::new();
    let mut g = AlgebraDraft::default();
    let mut h = AlgebraDraft::default();
    // (section, line, indices, value)
    let mut tensors: Vec<(Section, usize, Vec<(usize, String)>, Rational)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokens_with_columns(content, 1);
        let Some(&(col0, first)) = tokens.first() else {
            continue;
        };
        if first.starts_with('[') {
            let header = content.trim();
            let next = match header {
                "[g]" => Section::G,
                "[h]" => Section::H,
                "[alpha]" => Section::Alpha,
                "[action]" => Section::Action,
                _ => {
                    let arity = header
                        .strip_prefix("[pairing")
                        .and_then(|r| r.strip_suffix(']'))
                        .and_then(|r| r.trim().strip_prefix("n="))
                        .and_then(|r| r.trim().parse::<usize>().ok())
                        .filter(|&n| n >= 1);
                    match arity {
                        Some(n) => Section::Pairing(n),
                        None => return Err(Error::parse(line, col0, format!("unknown section '{header}'"))),
                    }
                }
            };
            if seen.contains(&next) {
                return Err(Error::parse(line, col0, format!("duplicate section '{header}'")));
            }
            seen.push(next);
            section = next;
            continue;
        }
        match (section, first) {
            (Section::Header, "name") => {
                if tokens.len() != 2 {
                    return Err(Error::parse(line, col0, "expected 'name <identifier>'"));
                }
                name = tokens[1].1.to_string();
                continue;
            }
            (Section::Header, _) => {
                return Err(Error::parse(
                    line,
                    col0,
                    format!("unexpected '{first}' outside a section"),
                ));
            }
            (Section::G | Section::H, "basis") => {
                let draft = if section == Section::G { &mut g } else { &mut h };
                if let Some((prev, _)) = draft.basis {
                    return Err(Error::parse(
                        line,
                        col0,
                        format!("duplicate basis (first given on line {prev})"),
                    ));
                }
                let labels: Vec<String> = tokens[1..].iter().map(|(_, t)| t.to_string()).collect();
                if labels.is_empty() {
                    return Err(Error::parse(line, col0, "empty basis"));
                }
                for (i, (c, l)) in tokens[1..].iter().enumerate() {
                    if labels[..i].iter().any(|p| p == l) {
                        return Err(Error::parse(line, *c, format!("duplicate label '{l}'")));
                    }
                    if l.parse::<usize>().is_ok() {
                        return Err(Error::parse(line, *c, format!("label '{l}' must not be an integer")));
                    }
                }
                draft.basis = Some((line, labels));
                continue;
            }
            (Section::G | Section::H, "rep_size") => {
                let draft = if section == Section::G { &mut g } else { &mut h };
                let size = tokens
                    .get(1)
                    .and_then(|(_, t)| t.parse::<usize>().ok())
                    .filter(|&s| s >= 1 && tokens.len() == 2)
                    .ok_or_else(|| Error::parse(line, col0, "expected 'rep_size <positive integer>'"))?;
                if draft.rep_size.is_some() {
                    return Err(Error::parse(line, col0, "duplicate rep_size"));
                }
                draft.rep_size = Some(size);
                continue;
            }
            _ => {}
        }

        // Tensor entry: indices… = value
        let eq = tokens
            .iter()
            .position(|(_, t)| *t == "=")
            .ok_or_else(|| Error::parse(line, col0, "expected 'indices = value'"))?;
        if eq + 2 != tokens.len() {
            return Err(Error::parse(line, col0, "expected exactly one value after '='"));
        }
        let (vcol, vtok) = tokens[eq + 1];
        let value =
            parse_rational(vtok).ok_or_else(|| Error::parse(line, vcol, format!("malformed rational '{vtok}'")))?;
        let is_rep = first == "rep";
        let idx_tokens = if is_rep { &tokens[1..eq] } else { &tokens[..eq] };
        let indices: Vec<(usize, String)> = idx_tokens.iter().map(|(c, t)| (*c, t.to_string())).collect();
        let expected = match section {
            Section::G | Section::H => 3,
            Section::Alpha => 2,
            Section::Action => 3,
            Section::Pairing(n) => n + 1,
            Section::Header => unreachable!(),
        };
        if indices.len() != expected {
            return Err(Error::parse(
                line,
                col0,
                format!("expected {expected} indices, found {}", indices.len()),
            ));
        }
        match section {
            Section::G | Section::H => {
                let draft = if section == Section::G { &mut g } else { &mut h };
                draft.pending.push(Entry {
                    line,
                    indices,
                    value,
                    rep: is_rep,
                });
            }
            _ if is_rep => return Err(Error::parse(line, col0, "rep entries belong in [g] or [h]")),
            _ => tensors.push((section, line, indices, value)),
        }
    }

    let g = g.finish(&name, "g")?;
    let h = h.finish(&name, "h")?;
    let (dg, dh) = (g.dim(), h.dim());
    let mut alpha = vec![Rational::zero(); dg * dh];
    let mut action = vec![Rational::zero(); dg * dh * dh];
    let mut pairing_entries: BTreeMap<usize, BTreeMap<Vec<usize>, (usize, Rational)>> = BTreeMap::new();
    let mut alpha_seen = BTreeMap::new();
    let mut action_seen = BTreeMap::new();
    for s in &seen {
        if let Section::Pairing(n) = s {
            pairing_entries.entry(*n).or_default();
        }
    }
    for (section, line, indices, value) in tensors {
        let sides: Vec<&LieAlgebra> = match section {
            Section::Alpha => vec![&g, &h],
            Section::Action => vec![&g, &h, &h],
            Section::Pairing(n) => {
                let mut s = vec![&g; n];
                s.push(&h);
                s
            }
            _ => unreachable!(),
        };
        let idx = indices
            .iter()
            .zip(&sides)
            .map(|((c, t), alg)| resolve(alg.labels(), line, *c, t))
            .collect::<Result<Vec<_>, _>>()?;
        match section {
            Section::Alpha => {
                alpha[idx[0] * dh + idx[1]] = value.clone();
                insert_unique(&mut alpha_seen, idx, line, value)?;
            }
            Section::Action => {
                action[(idx[0] * dh + idx[1]) * dh + idx[2]] = value.clone();
                insert_unique(&mut action_seen, idx, line, value)?;
            }
            Section::Pairing(n) => {
                insert_unique(
                    pairing_entries.get_mut(&n).expect("section registered"),
                    idx,
                    line,
                    value,
                )?;
            }
            _ => unreachable!(),
        }
    }
    let pairings = pairing_entries
        .into_iter()
        .map(|(n, entries)| {
            InvariantPairing::from_fn(n, dg, dh, |gs, b| {
                let mut key = gs.to_vec();
                key.push(b);
                entries.get(&key).map(|(_, v)| v.clone()).unwrap_or_else(Rational::zero)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let module = CrossedModule::new(name, g, h, alpha, action)?;
    Ok(AlgebraFile { module, pairings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::load_builtin;
    use crate::rat;

    const POINCARE: &str = "\
name poincare_file
[g]
basis J0 J1 J2
J0 J1 J2 = 1
J1 J0 J2 = -1
J1 J2 J0 = -1
J2 J1 J0 = 1
J2 J0 J1 = 1
J0 J2 J1 = -1
[h]
basis P0 P1 P2
[action]
J0 P1 P2 = 1
J0 P2 P1 = -1
J1 P2 P0 = -1
J1 P0 P2 = -1
J2 P0 P1 = 1
J2 P1 P0 = 1
[pairing n=1]
J0 P0 = -1   # time-like
2 2 = 1
J2 P2 = 1
";

    #[test]
    fn reproduces_poincare_builtin() {
        let file = parse_algebra_file(POINCARE).unwrap();
        let (cm, p) = load_builtin("poincare2").unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(
                        file.module.g().structure_constant(a, b, c),
                        cm.g().structure_constant(a, b, c)
                    );
                    assert_eq!(file.module.action_entry(a, b, c), cm.action_entry(a, b, c));
                }
            }
        }
        assert_eq!(file.pairing(1).unwrap(), &p);
        assert!(file.module.validate().passed());
    }

    #[test]
    fn matrix_rep_entries() {
        let text = "[g]\nbasis e\nrep_size 2\nrep e 1 2 = 1/2\n[h]\nbasis f\n[alpha]\ne f = 1\n";
        let file = parse_algebra_file(text).unwrap();
        let rep = file.module.g().matrix_rep().unwrap();
        assert_eq!(rep[0].get(0, 1), &rat(1, 2));
        assert!(file.pairings.is_empty());
    }

    #[test]
    fn located_errors() {
        let err = parse_algebra_file("[g]\nbasis a b\na b c = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 5, .. }), "{err}");
        let err = parse_algebra_file("[g]\nbasis a\n[g]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_algebra_file("[q]\n").unwrap_err();
        assert!(err.to_string().contains("unknown section"));
        let err = parse_algebra_file("[g]\nbasis a\na a a = 2/0\n").unwrap_err();
        assert!(err.to_string().contains("malformed rational"));
        let err = parse_algebra_file("[g]\nbasis a\na a a = 1\na a a = 2\n[h]\nbasis b\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }
}
