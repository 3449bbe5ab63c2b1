//! Text formats for maps, permutations and generator files.
//!
//! A transformation is a comma-separated list of 1-based images
//! (`1,1,3,4,1`). A permutation is either such a list or disjoint cycles
//! (`(1 2 3)(4 5 6)`); cycles may also be comma separated (`(1,2,3)`).

use crate::error::{Error, Result};
use crate::transform::{Permutation, Transformation};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a 1-based comma-separated image list, with optional brackets.
pub fn parse_transformation(text: &str) -> Result<Transformation> {
    parse_transformation_at(text, 1)
}

fn parse_transformation_at(text: &str, line: usize) -> Result<Transformation> {
    let images = parse_image_list(text, line)?;
    let n = images.len();
    for &(col, p) in &images {
        if p == 0 || p > n {
            return Err(parse_error(
                line,
                col,
                format!("image {p} is outside [1..{n}]"),
            ));
        }
    }
    let values: Vec<usize> = images.iter().map(|(_, p)| *p).collect();
    Transformation::from_one_based(&values)
}

fn parse_image_list(text: &str, line: usize) -> Result<Vec<(usize, usize)>> {
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    let (body, offset) = match body.strip_prefix('[') {
        Some(rest) => match rest.strip_suffix(']') {
            Some(inner) => (inner, trimmed_start + 1),
            None => {
                return Err(parse_error(
                    line,
                    trimmed_start + body.len() + 1,
                    "missing `]`",
                ));
            }
        },
        None => (body, trimmed_start),
    };
    if body.trim().is_empty() {
        return Err(parse_error(line, offset + 1, "empty image list"));
    }
    let mut out = Vec::new();
    let mut pos = offset;
    for field in body.split(',') {
        let lead = field.len() - field.trim_start().len();
        let token = field.trim();
        let column = pos + lead + 1;
        let value = token
            .parse::<usize>()
            .map_err(|_| parse_error(line, column, format!("expected a point, found `{token}`")))?;
        out.push((column, value));
        pos += field.len() + 1;
    }
    Ok(out)
}

/// Parses a permutation of degree `n` from an image list or cycle notation.
pub fn parse_permutation(text: &str, n: usize) -> Result<Permutation> {
    parse_permutation_at(text, n, 1)
}

fn parse_permutation_at(text: &str, n: usize, line: usize) -> Result<Permutation> {
    let body = text.trim();
    if !body.starts_with('(') {
        let t = parse_transformation_at(text, line)?;
        if t.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: t.degree(),
            });
        }
        return t.to_permutation();
    }
    let cycles = parse_cycles(text, n, line)?;
    Permutation::from_cycles(n, &cycles)
}

fn parse_cycles(text: &str, n: usize, line: usize) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut seen = vec![false; n];
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let column = i + 1;
        match c {
            '(' => {
                if current.is_some() {
                    return Err(parse_error(line, column, "nested `(`"));
                }
                current = Some(Vec::new());
                i += 1;
            }
            ')' => {
                let cycle = current
                    .take()
                    .ok_or_else(|| parse_error(line, column, "unmatched `)`"))?;
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                i += 1;
            }
            ' ' | '\t' | ',' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let p: usize = text[start..i]
                    .parse()
                    .map_err(|_| parse_error(line, column, "point too large"))?;
                let cycle = current
                    .as_mut()
                    .ok_or_else(|| parse_error(line, column, "point outside a cycle"))?;
                if p == 0 || p > n {
                    return Err(parse_error(
                        line,
                        column,
                        format!("point {p} is outside [1..{n}]"),
                    ));
                }
                if seen[p - 1] {
                    return Err(parse_error(
                        line,
                        column,
                        format!("point {p} appears twice; cycles must be disjoint"),
                    ));
                }
                seen[p - 1] = true;
                cycle.push(p);
            }
            other => {
                return Err(parse_error(
                    line,
                    column,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    if current.is_some() {
        return Err(parse_error(line, text.len() + 1, "unclosed `(`"));
    }
    Ok(cycles)
}

/// Parses a generator file: one permutation per line, `#` starts a comment.
pub fn parse_generator_file(text: &str, n: usize) -> Result<Vec<Permutation>> {
    let mut gens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        gens.push(parse_permutation_at(content, n, idx + 1)?);
    }
    Ok(gens)
}
