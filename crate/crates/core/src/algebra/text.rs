//! Plain-text polynomial form: `3*y1^2*y3 + y2 + 32002`.
//!
//! Printing goes through `Display` on [`Polynomial`]. The parser is a little
//! more forgiving than the printer: it accepts `-` between terms, signed
//! coefficients and arbitrary whitespace.

use super::field::Field;
use super::monomial::Monomial;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Parses one polynomial over `num_vars` variables. `line` is only used in
/// error messages.
pub fn parse_polynomial<F: Field>(
    src: &str,
    num_vars: usize,
    line: usize,
) -> Result<Polynomial<F>> {
    let mut terms = Vec::new();
    for (negative, body) in split_terms(src).map_err(|m| Error::parse(line, m))? {
        let (m, c) = parse_term::<F>(body, num_vars).map_err(|m| Error::parse(line, m))?;
        terms.push((m, if negative { -c } else { c }));
    }
    Ok(Polynomial::from_terms(num_vars, terms))
}

/// Parses a file with one polynomial per line. Blank lines and lines starting
/// with `#` are skipped. The ring has as many variables as the largest
/// `y<k>` index mentioned (at least one).
pub fn parse_system<F: Field>(text: &str) -> Result<(usize, Vec<Polynomial<F>>)> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut num_vars = 1;
    for (line, l) in &lines {
        for v in variable_indices(l).map_err(|m| Error::parse(*line, m))? {
            num_vars = num_vars.max(v);
        }
    }
    let polys = lines
        .iter()
        .map(|(line, l)| parse_polynomial(l, num_vars, *line))
        .collect::<Result<Vec<_>>>()?;
    Ok((num_vars, polys))
}

/// Renders polynomials one per line.
pub fn format_system<F: Field>(polys: &[Polynomial<F>]) -> String {
    let mut out = String::new();
    for p in polys {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

fn variable_indices(src: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'y' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let idx: usize = src[start..j]
                .parse()
                .map_err(|_| format!("bad variable near column {}", i + 1))?;
            if idx == 0 {
                return Err("variables are numbered from y1".into());
            }
            out.push(idx);
            i = j;
        } else {
            i += 1;
        }
    }
    Ok(out)
}

fn split_terms(src: &str) -> std::result::Result<Vec<(bool, &str)>, String> {
    let src = src.trim();
    if src.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = Vec::new();
    let mut negative = false;
    let mut start = 0;
    let mut expect_term = true;
    for (i, ch) in src.char_indices() {
        if ch == '+' || ch == '-' {
            if expect_term {
                if ch == '-' {
                    negative = !negative;
                }
                start = i + 1;
                continue;
            }
            out.push((negative, src[start..i].trim()));
            negative = ch == '-';
            start = i + 1;
            expect_term = true;
        } else if !ch.is_whitespace() {
            if expect_term {
                start = i;
            }
            expect_term = false;
        }
    }
    if expect_term {
        return Err("dangling operator".into());
    }
    out.push((negative, src[start..].trim()));
    Ok(out)
}

fn parse_term<F: Field>(body: &str, num_vars: usize) -> std::result::Result<(Monomial, F), String> {
    let mut coeff = F::one();
    let mut exps = vec![0u16; num_vars];
    for factor in body.split('*').map(str::trim) {
        if factor.is_empty() {
            return Err(format!("empty factor in `{body}`"));
        }
        if let Some(rest) = factor.strip_prefix('y') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i.trim(), e.trim()),
                None => (rest, "1"),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| format!("bad variable `{factor}`"))?;
            let exp: u16 = exp
                .parse()
                .map_err(|_| format!("bad exponent `{factor}`"))?;
            if idx == 0 || idx > num_vars {
                return Err(format!("variable `{factor}` out of range"));
            }
            exps[idx - 1] = exps[idx - 1]
                .checked_add(exp)
                .ok_or_else(|| format!("exponent overflow in `{body}`"))?;
        } else {
            let v: i64 = factor
                .parse()
                .map_err(|_| format!("bad coefficient `{factor}`"))?;
            let p = F::characteristic() as i64;
            coeff = coeff * F::from_i64(v.rem_euclid(p));
        }
    }
    Ok((Monomial::from_exponents(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Const, Fp};

    type F = Fp<Const<32003>>;
    type P = Polynomial<F>;

    #[test]
    fn round_trip_golden() {
        let src = "y1^2 + 32002*y1";
        let p: P = parse_polynomial(src, 2, 1).unwrap();
        assert_eq!(p.to_string(), src);
    }

    #[test]
    fn accepts_signs_and_spacing() {
        let p: P = parse_polynomial(" - y1*y2 +3 - 2 * y2^2 ", 2, 1).unwrap();
        assert_eq!(p.to_string(), "32002*y1*y2 + 32001*y2^2 + 3");
        let q: P = parse_polynomial("y1 + y2 - 1", 2, 1).unwrap();
        assert_eq!(q.to_string(), "y1 + y2 + 32002");
    }

    #[test]
    fn system_infers_arity() {
        let (n, ps) = parse_system::<F>("# comment\ny1^2 - y1\n\ny3 - 1\n").unwrap();
        assert_eq!(n, 3);
        assert_eq!(ps.len(), 2);
        assert_eq!(format_system(&ps), "y1^2 + 32002*y1\ny3 + 32002\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_system::<F>("y1\ny1 + * y2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_system::<F>("y0 + 1").is_err());
        assert!(parse_system::<F>("y1 +").is_err());
    }
}
