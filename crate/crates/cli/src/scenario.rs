//! Scenario files.
//!
//! ```text
//! module poincare2          # or: module file my_module.alg
//! dim 5
//! n 1
//! seed 7
//! trials 5
//! box 0 1 0 1 0 1 0 1 0 1   # lower and upper bound per coordinate
//! A J1 : 1 x2 dx1           # header lines before any section belong to [conn1]
//! B P1 : 1 x4 dx3 dx5
//! [conn0]
//! A J0 : 1/2 x1 dx3
//! [gauge]
//! g 5/4 0 3/4 ; 0 1 0 ; 3/4 0 5/4   # constant matrix, rows separated by ';'
//! phi P2 : 1 x1 dx2
//! [variation]
//! dA1 J2 : 1 dx4
//! dB0 P0 : 1 x5 dx1 dx2
//! ```
//!
//! Gauge matrices may also be given entry by entry with polynomial entries,
//! e.g. `g 1 2 = 1 x3` and `ginv 1 2 = -1 x3`; unlisted entries are those of
//! the identity. Entry-wise `g` needs `ginv` unless it is constant. `gact`
//! defaults to the adjoint matrix.

use std::fmt;
use std::path::{Path, PathBuf};

use gauge2::algebra::matrix::{PolyMatrix, RatMatrix};
use gauge2::algebra::{builtin_pairing, load_builtin, parse_algebra_file};
use gauge2::exterior::term::{parse_form, parse_rational};
use gauge2::exterior::Monomial;
use gauge2::tgft::VariationData;
use gauge2::{
    AlgebraForm, Chart, CrossedModule, GaugeData, InvariantPairing, Rational, ScalarForm, Side, TwoConnection,
};

/// A diagnostic with a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn from_engine(line: usize, column: usize, e: gauge2::Error) -> Self {
        match e {
            gauge2::Error::Parse { line, column, message } => ParseError { line, column, message },
            other => ParseError::new(line, column, other.to_string()),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub module_name: String,
    pub module: CrossedModule,
    pub pairing: InvariantPairing,
    pub chart: Chart,
    pub n: usize,
    pub conn1: TwoConnection,
    pub conn0: Option<TwoConnection>,
    pub gauge: Option<GaugeData>,
    pub variation: Option<VariationData>,
    pub bounds: Option<Vec<(Rational, Rational)>>,
    pub seed: u64,
    pub trials: usize,
}

impl Scenario {
    /// `conn0`, or the zero connection when none was given.
    pub fn conn0_or_zero(&self) -> TwoConnection {
        self.conn0
            .clone()
            .unwrap_or_else(|| TwoConnection::zero(&self.module, self.chart))
    }
}

const DEFAULT_TRIALS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Conn1,
    Conn0,
    Gauge,
    Variation,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Conn1 => "conn1",
            Section::Conn0 => "conn0",
            Section::Gauge => "gauge",
            Section::Variation => "variation",
        }
    }
}

/// A form assignment `<key> <label> : <terms>` waiting for the module.
#[derive(Debug)]
struct Assignment {
    section: Section,
    key: String,
    label: String,
    label_col: usize,
    terms: String,
    terms_col: usize,
    line: usize,
}

#[derive(Debug)]
enum MatrixBody {
    Rows(Vec<Vec<Rational>>),
    /// 1-based row and column.
    Entry {
        row: usize,
        col: usize,
        terms: String,
        terms_col: usize,
    },
}

#[derive(Debug)]
struct MatrixLine {
    key: String,
    body: MatrixBody,
    line: usize,
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

/// Parses a scenario; `module file` paths resolve against the current directory.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    parse_scenario_in(text, Path::new("."))
}

/// Parses a scenario; `module file` paths resolve against `base`.
pub fn parse_scenario_in(text: &str, base: &Path) -> Result<Scenario, ParseError> {
    let mut module: Option<(String, ModuleSource, usize)> = None;
    let mut dim: Option<(usize, usize)> = None;
    let mut n: Option<usize> = None;
    let mut seed: Option<u64> = None;
    let mut trials: Option<usize> = None;
    let mut bounds: Option<(Vec<(Rational, Rational)>, usize)> = None;
    let mut section = Section::Conn1;
    let mut seen_sections: Vec<Section> = Vec::new();
    let mut assignments: Vec<Assignment> = Vec::new();
    let mut matrices: Vec<MatrixLine> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, first)) = toks.first() else {
            continue;
        };
        if first.starts_with('[') {
            let header = content.trim();
            let next = match header {
                "[conn1]" => Section::Conn1,
                "[conn0]" => Section::Conn0,
                "[gauge]" => Section::Gauge,
                "[variation]" => Section::Variation,
                _ => return Err(ParseError::new(line, col, format!("unknown section '{header}'"))),
            };
            if seen_sections.contains(&next) {
                return Err(ParseError::new(line, col, format!("duplicate section '{header}'")));
            }
            seen_sections.push(next);
            section = next;
            continue;
        }

        if let Some(colon) = content.find(':') {
            let head = tokens(&content[..colon]);
            if head.len() != 2 {
                return Err(ParseError::new(line, col, "expected '<field> <basis label> : <terms>'"));
            }
            let allowed: &[&str] = match section {
                Section::Conn1 | Section::Conn0 => &["A", "B"],
                Section::Gauge => &["phi"],
                Section::Variation => &["dA0", "dA1", "dB0", "dB1"],
            };
            let key = head[0].1;
            if !allowed.contains(&key) {
                return Err(ParseError::new(
                    line,
                    head[0].0,
                    format!("unknown field '{key}' in [{}]", section.name()),
                ));
            }
            assignments.push(Assignment {
                section,
                key: key.to_string(),
                label: head[1].1.to_string(),
                label_col: head[1].0,
                terms: content[colon + 1..].to_string(),
                terms_col: colon + 2,
                line,
            });
            continue;
        }

        let args = &toks[1..];
        let once = |present: bool| {
            if present {
                Err(ParseError::new(line, col, format!("duplicate assignment of '{first}'")))
            } else {
                Ok(())
            }
        };
        match (section, first) {
            (Section::Gauge, "g" | "ginv" | "gact") => {
                let body = match content.find('=') {
                    Some(eq) => {
                        let idx = tokens(&content[..eq]);
                        let [_, (rc, r), (cc, c)] = idx[..] else {
                            return Err(ParseError::new(
                                line,
                                col,
                                format!("expected '{first} <row> <col> = <terms>'"),
                            ));
                        };
                        let index = |t: &str, at: usize| {
                            t.parse::<usize>().ok().filter(|&i| i >= 1).ok_or_else(|| {
                                ParseError::new(line, at, format!("matrix index '{t}' must be a positive integer"))
                            })
                        };
                        let (row, col_) = (index(r, rc)?, index(c, cc)?);
                        let duplicate = matrices.iter().any(|m| {
                            m.key == first
                                && match &m.body {
                                    MatrixBody::Rows(_) => true,
                                    MatrixBody::Entry { row: r2, col: c2, .. } => (*r2, *c2) == (row, col_),
                                }
                        });
                        if duplicate {
                            return Err(ParseError::new(
                                line,
                                col,
                                format!("duplicate assignment of '{first}' entry ({row}, {col_})"),
                            ));
                        }
                        MatrixBody::Entry {
                            row,
                            col: col_,
                            terms: content[eq + 1..].to_string(),
                            terms_col: eq + 2,
                        }
                    }
                    None => {
                        if matrices.iter().any(|m| m.key == first) {
                            return Err(ParseError::new(line, col, format!("duplicate assignment of '{first}'")));
                        }
                        MatrixBody::Rows(parse_matrix(content, col + first.len(), line)?)
                    }
                };
                matrices.push(MatrixLine {
                    key: first.to_string(),
                    body,
                    line,
                });
            }
            (Section::Conn1, "module") if seen_sections.is_empty() => {
                once(module.is_some())?;
                let source = match args {
                    [(_, name)] => ModuleSource::Builtin(name.to_string()),
                    [(_, "file"), (_, path)] => ModuleSource::File(base.join(path)),
                    _ => {
                        return Err(ParseError::new(
                            line,
                            col,
                            "expected 'module <name>' or 'module file <path>'",
                        ))
                    }
                };
                let label = match &source {
                    ModuleSource::Builtin(name) => name.clone(),
                    ModuleSource::File(p) => p.display().to_string(),
                };
                module = Some((label, source, line));
            }
            (Section::Conn1, "dim") if seen_sections.is_empty() => {
                once(dim.is_some())?;
                dim = Some((single_number(args, line, col)?, line));
            }
            (Section::Conn1, "n") if seen_sections.is_empty() => {
                once(n.is_some())?;
                n = Some(single_number(args, line, col)?);
            }
            (Section::Conn1, "seed") if seen_sections.is_empty() => {
                once(seed.is_some())?;
                seed = Some(single_number(args, line, col)?);
            }
            (Section::Conn1, "trials") if seen_sections.is_empty() => {
                once(trials.is_some())?;
                trials = Some(single_number(args, line, col)?);
            }
            (Section::Conn1, "box") if seen_sections.is_empty() => {
                once(bounds.is_some())?;
                if args.is_empty() || !args.len().is_multiple_of(2) {
                    return Err(ParseError::new(
                        line,
                        col,
                        "box needs a lower and upper bound per coordinate",
                    ));
                }
                let values = args
                    .iter()
                    .map(|&(c, t)| {
                        parse_rational(t).ok_or_else(|| ParseError::new(line, c, format!("malformed rational '{t}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let pairs = values.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
                bounds = Some((pairs, line));
            }
            _ => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("unexpected '{first}' in [{}]", section.name()),
                ))
            }
        }
    }

    let (_, source, module_line) = module.ok_or_else(|| ParseError::new(1, 1, "missing 'module' declaration"))?;
    let (dim, dim_line) = dim.ok_or_else(|| ParseError::new(1, 1, "missing 'dim' declaration"))?;
    let n = n.ok_or_else(|| ParseError::new(1, 1, "missing 'n' declaration"))?;
    let chart = Chart::new(dim).map_err(|e| ParseError::from_engine(dim_line, 1, e))?;
    let (module, pairing) = resolve_module(&source, n, module_line)?;

    let forms = FormBuilder { module: &module, chart };
    let conn1 = forms.connection(&assignments, Section::Conn1)?;
    let conn0 = if seen_sections.contains(&Section::Conn0) {
        Some(forms.connection(&assignments, Section::Conn0)?)
    } else {
        None
    };
    let gauge = if seen_sections.contains(&Section::Gauge) {
        Some(forms.gauge(&assignments, &matrices)?)
    } else {
        None
    };
    let variation = if seen_sections.contains(&Section::Variation) {
        Some(forms.variation(&assignments)?)
    } else {
        None
    };
    let bounds = match bounds {
        Some((b, line)) if b.len() != dim => {
            return Err(ParseError::new(
                line,
                1,
                format!("box has {} intervals but the chart has dimension {dim}", b.len()),
            ))
        }
        Some((b, _)) => Some(b),
        None => None,
    };

    Ok(Scenario {
        module_name: module.name().to_string(),
        module,
        pairing,
        chart,
        n,
        conn1,
        conn0,
        gauge,
        variation,
        bounds,
        seed: seed.unwrap_or(0),
        trials: trials.unwrap_or(DEFAULT_TRIALS),
    })
}

#[derive(Debug, Clone)]
enum ModuleSource {
    Builtin(String),
    File(PathBuf),
}

fn resolve_module(
    source: &ModuleSource,
    n: usize,
    line: usize,
) -> Result<(CrossedModule, InvariantPairing), ParseError> {
    match source {
        ModuleSource::Builtin(name) => {
            let (cm, _) = load_builtin(name).map_err(|e| ParseError::from_engine(line, 1, e))?;
            let p = builtin_pairing(name, n).map_err(|e| ParseError::from_engine(line, 1, e))?;
            Ok((cm, p))
        }
        ModuleSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ParseError::new(line, 1, format!("cannot read {}: {e}", path.display())))?;
            let file = parse_algebra_file(&text)
                .map_err(|e| ParseError::new(line, 1, format!("in {}: {e}", path.display())))?;
            let p = file.pairing(n).cloned().ok_or_else(|| {
                ParseError::new(line, 1, format!("{} declares no pairing of arity {n}", path.display()))
            })?;
            Ok((file.module, p))
        }
    }
}

fn single_number<T: std::str::FromStr>(args: &[(usize, &str)], line: usize, col: usize) -> Result<T, ParseError> {
    match args {
        [(c, t)] => t
            .parse()
            .map_err(|_| ParseError::new(line, *c, format!("expected a non-negative integer, found '{t}'"))),
        _ => Err(ParseError::new(line, col, "expected exactly one value")),
    }
}

/// Rows separated by `;`, entries by whitespace.
fn parse_matrix(content: &str, start: usize, line: usize) -> Result<Vec<Vec<Rational>>, ParseError> {
    let mut rows = Vec::new();
    let mut offset = start;
    for chunk in content[start..].split(';') {
        let row = tokens(chunk)
            .into_iter()
            .map(|(c, t)| {
                parse_rational(t).ok_or_else(|| ParseError::new(line, offset + c, format!("malformed rational '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.is_empty() {
            return Err(ParseError::new(line, offset + 1, "empty matrix row"));
        }
        rows.push(row);
        offset += chunk.len() + 1;
    }
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(ParseError::new(line, start, "matrix must be square"));
    }
    Ok(rows)
}

struct FormBuilder<'a> {
    module: &'a CrossedModule,
    chart: Chart,
}

impl FormBuilder<'_> {
    /// Sums the assignments of `section` with key `key` into one algebra form.
    fn collect(
        &self,
        all: &[Assignment],
        section: Section,
        key: &str,
        side: Side,
        degree: usize,
    ) -> Result<AlgebraForm, ParseError> {
        let labels = side.labels(self.module);
        let mut components = vec![ScalarForm::zero(self.chart, degree); labels.len()];
        let mut assigned = vec![false; labels.len()];
        for a in all.iter().filter(|a| a.section == section && a.key == key) {
            let index = labels
                .iter()
                .position(|l| *l == a.label)
                .ok_or_else(|| ParseError::new(a.line, a.label_col, format!("unknown basis label {}", a.label)))?;
            if assigned[index] {
                return Err(ParseError::new(
                    a.line,
                    a.label_col,
                    format!("duplicate assignment of {} {}", a.key, a.label),
                ));
            }
            assigned[index] = true;
            let form = parse_form(&a.terms, self.chart, a.line, a.terms_col)
                .map_err(|e| ParseError::from_engine(a.line, a.terms_col, e))?;
            if form.degree() != degree && !form.is_zero() {
                return Err(ParseError::new(
                    a.line,
                    a.terms_col,
                    format!("{key} must be a {degree}-form, found degree {}", form.degree()),
                ));
            }
            if form.degree() == degree {
                components[index] = form;
            }
        }
        AlgebraForm::new(side, components).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    fn connection(&self, all: &[Assignment], section: Section) -> Result<TwoConnection, ParseError> {
        let a = self.collect(all, section, "A", Side::G, 1)?;
        let b = self.collect(all, section, "B", Side::H, 2)?;
        TwoConnection::new(self.module, a, b).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    /// The matrix named `key`, starting from the `size`×`size` identity.
    fn matrix(
        &self,
        matrices: &[MatrixLine],
        key: &str,
        size: usize,
    ) -> Result<Option<(PolyMatrix, usize)>, ParseError> {
        let mut out: Option<(PolyMatrix, usize)> = None;
        for m in matrices.iter().filter(|m| m.key == key) {
            let (target, _) = out.get_or_insert_with(|| (PolyMatrix::identity(size), m.line));
            match &m.body {
                MatrixBody::Rows(rows) => {
                    if rows.len() != size {
                        return Err(ParseError::new(m.line, 1, format!("'{key}' must be {size}x{size}")));
                    }
                    *target = RatMatrix::from_rows(rows.clone()).to_poly();
                }
                MatrixBody::Entry {
                    row,
                    col,
                    terms,
                    terms_col,
                } => {
                    if *row > size || *col > size {
                        return Err(ParseError::new(
                            m.line,
                            1,
                            format!("entry ({row}, {col}) outside the {size}x{size} matrix '{key}'"),
                        ));
                    }
                    let w = parse_form(terms, self.chart, m.line, *terms_col)
                        .map_err(|e| ParseError::from_engine(m.line, *terms_col, e))?;
                    if w.degree() != 0 {
                        return Err(ParseError::new(m.line, *terms_col, "matrix entries must be 0-forms"));
                    }
                    target.set(row - 1, col - 1, w.component(&[]));
                }
            }
        }
        Ok(out)
    }

    fn gauge(&self, all: &[Assignment], matrices: &[MatrixLine]) -> Result<GaugeData, ParseError> {
        let phi = self.collect(all, Section::Gauge, "phi", Side::H, 1)?;
        let rep_size = self.module.g().matrix_rep().map(|r| r[0].rows());
        let size = |key: &str| {
            rep_size.ok_or_else(|| {
                let line = matrices.iter().find(|m| m.key == key).map_or(1, |m| m.line);
                ParseError::new(
                    line,
                    1,
                    format!("'{key}' needs a matrix representation of {}", self.module.g().name()),
                )
            })
        };
        let present = |key: &str| matrices.iter().any(|m| m.key == key);
        if !present("g") {
            if let Some(m) = matrices.first() {
                return Err(ParseError::new(m.line, 1, format!("'{}' requires 'g'", m.key)));
            }
            return GaugeData::pure_phi(self.module, phi).map_err(|e| ParseError::new(1, 1, e.to_string()));
        }
        let (g, g_line) = self.matrix(matrices, "g", size("g")?)?.expect("g is present");
        let err = |line: usize| move |e: gauge2::Error| ParseError::new(line, 1, e.to_string());
        let ginv = match self.matrix(matrices, "ginv", size("ginv")?)? {
            Some((m, _)) => m,
            None => constant(&g)
                .ok_or_else(|| ParseError::new(g_line, 1, "a non-constant 'g' needs an explicit 'ginv'"))?
                .inverse()
                .map_err(err(g_line))?
                .to_poly(),
        };
        match self.matrix(matrices, "gact", self.module.h().dim())? {
            Some((gact, line)) => GaugeData::new(self.module, g, ginv, gact, phi).map_err(err(line)),
            None => GaugeData::with_adjoint_action(self.module, g, ginv, phi).map_err(err(g_line)),
        }
    }

    fn variation(&self, all: &[Assignment]) -> Result<VariationData, ParseError> {
        let da0 = self.collect(all, Section::Variation, "dA0", Side::G, 1)?;
        let da1 = self.collect(all, Section::Variation, "dA1", Side::G, 1)?;
        let db0 = self.collect(all, Section::Variation, "dB0", Side::H, 2)?;
        let db1 = self.collect(all, Section::Variation, "dB1", Side::H, 2)?;
        VariationData::new(self.module, da0, da1, db0, db1).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }
}

/// The rational matrix of a polynomial matrix with constant entries.
fn constant(m: &PolyMatrix) -> Option<RatMatrix> {
    let mut out = RatMatrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let e = m.get(r, c);
            if e.terms().any(|(mono, _)| *mono != Monomial::ONE) {
                return None;
            }
            out.set(r, c, e.coefficient(Monomial::ONE));
        }
    }
    Some(out)
}
