//! Term syntax shared by scenario and algebra files.
//!
//! A term is `<rational> [x<i>^<e>]* [dx<i>]*`, e.g. `3/2 x1^2 dx2 dx4`.
//! Terms are joined by `+` or `-` tokens. Covectors may be written in any
//! order and are normalized with the sign of the sorting permutation.

use num_bigint::BigInt;
use num_traits::Zero;

use super::form::{Chart, ScalarForm};
use super::polynomial::{Monomial, Polynomial, MAX_INPUT_DEGREE};
use crate::{Error, Rational};

/// Parses `p`, `-p` or `p/q` with integer `p, q` and `q ≠ 0`.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Splits `text` into whitespace-separated tokens with 1-based columns.
pub(crate) fn tokens_with_columns(text: &str, base_column: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((base_column + s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((base_column + s, &text[s..]));
    }
    out
}

fn parse_index(digits: &str, limit: usize) -> Option<usize> {
    let i: usize = digits.parse().ok()?;
    (1..=limit).contains(&i).then_some(i - 1)
}

struct Location {
    line: usize,
}

impl Location {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.line, column, message)
    }
}

/// Parses a sum of terms into a form on `chart`. `line` and `column` locate
/// the start of `text` for diagnostics.
pub fn parse_form(text: &str, chart: Chart, line: usize, column: usize) -> Result<ScalarForm, Error> {
    let loc = Location { line };
    let tokens = tokens_with_columns(text, column);
    if tokens.is_empty() {
        return Err(loc.err(column, "expected at least one term"));
    }
    let mut total: Option<ScalarForm> = None;
    let mut negate = false;
    let mut iter = tokens.into_iter().peekable();
    loop {
        let (col, tok) = iter.next().ok_or_else(|| loc.err(column, "dangling operator"))?;
        let coeff = parse_rational(tok).ok_or_else(|| loc.err(col, format!("malformed rational '{tok}'")))?;
        let coeff = if negate { -coeff } else { coeff };
        let mut mono = Monomial::ONE;
        let mut covectors = Vec::new();
        while let Some(&(c, t)) = iter.peek() {
            if t == "+" || t == "-" {
                break;
            }
            iter.next();
            if let Some(rest) = t.strip_prefix("dx") {
                let i = parse_index(rest, chart.dim())
                    .ok_or_else(|| loc.err(c, format!("covector '{t}' outside chart of dimension {}", chart.dim())))?;
                covectors.push(i);
            } else if let Some(rest) = t.strip_prefix('x') {
                if !covectors.is_empty() {
                    return Err(loc.err(c, format!("coordinate '{t}' after covectors")));
                }
                let (var, exp) = rest.split_once('^').unwrap_or((rest, "1"));
                let i = parse_index(var, chart.dim()).ok_or_else(|| {
                    loc.err(
                        c,
                        format!("coordinate '{t}' outside chart of dimension {}", chart.dim()),
                    )
                })?;
                let e: u8 = exp
                    .parse()
                    .ok()
                    .filter(|&e| e as u32 <= MAX_INPUT_DEGREE)
                    .ok_or_else(|| loc.err(c, format!("degree overflow in '{t}'")))?;
                mono = mono * Monomial::var_pow(i, e);
                if mono.coordinate_degree() > MAX_INPUT_DEGREE {
                    return Err(loc.err(
                        c,
                        format!("degree overflow: coefficient degree exceeds {MAX_INPUT_DEGREE}"),
                    ));
                }
            } else {
                return Err(loc.err(c, format!("unexpected token '{t}'")));
            }
        }
        let term = ScalarForm::monomial(chart, Polynomial::term(coeff, mono), &covectors)
            .map_err(|e| loc.err(col, e.to_string()))?;
        match &mut total {
            None => total = Some(term),
            Some(acc) => {
                if acc.degree() != term.degree() {
                    return Err(loc.err(
                        col,
                        format!("term of degree {} in a sum of degree {}", term.degree(), acc.degree()),
                    ));
                }
                *acc += &term;
            }
        }
        match iter.next() {
            None => break,
            Some((_, "+")) => negate = false,
            Some((_, "-")) => negate = true,
            Some((c, t)) => return Err(loc.err(c, format!("unexpected token '{t}'"))),
        }
    }
    Ok(total.expect("at least one term parsed"))
}

/// Parses a sum of covector-free terms.
pub fn parse_polynomial(text: &str, chart: Chart, line: usize, column: usize) -> Result<Polynomial, Error> {
    let form = parse_form(text, chart, line, column)?;
    if form.degree() != 0 {
        return Err(Error::parse(line, column, "expected a polynomial without covectors"));
    }
    Ok(form.component(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn chart(m: usize) -> Chart {
        Chart::new(m).unwrap()
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2"), Some(rat(3, 2)));
        assert_eq!(parse_rational("-4"), Some(rat(-4, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x/2"), None);
        assert_eq!(parse_rational("2/0"), None);
    }

    #[test]
    fn single_term_with_sorting_sign() {
        let f = parse_form("3/2 x1^2 dx4 dx2", chart(4), 1, 1).unwrap();
        let mono = Polynomial::term(rat(-3, 2), Monomial::var_pow(0, 2));
        assert_eq!(f, ScalarForm::monomial(chart(4), mono, &[1, 3]).unwrap());
    }

    #[test]
    fn sums_and_differences() {
        let f = parse_form("1 x2 dx1 + 2 dx3 - 1 x2 dx1", chart(3), 1, 1).unwrap();
        assert_eq!(f, ScalarForm::dx(chart(3), 2).scale(&rat(2, 1)));
    }

    #[test]
    fn located_errors() {
        let err = parse_form("2/0 x1 dx1", chart(2), 7, 10).unwrap_err();
        assert_eq!(err, Error::parse(7, 10, "malformed rational '2/0'"));
        let err = parse_form("1 x1 dx5", chart(3), 2, 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 6, .. }));
        let err = parse_form("1 x1^9 dx1", chart(3), 1, 1).unwrap_err();
        assert!(err.to_string().contains("degree overflow"));
        let err = parse_form("1 dx1 + 1 dx1 dx2", chart(3), 1, 1).unwrap_err();
        assert!(err.to_string().contains("degree"));
    }

    #[test]
    fn polynomial_rejects_covectors() {
        assert_eq!(
            parse_polynomial("1 + 1/2 x1^2", chart(2), 1, 1).unwrap(),
            &Polynomial::one() + &Polynomial::term(rat(1, 2), Monomial::var_pow(0, 2))
        );
        assert!(parse_polynomial("1 dx1", chart(2), 1, 1).is_err());
    }
}
