//! Plain-text files for interval matrices, rational matrices and witnesses.
//!
//! ```text
//! 2 2
//! 2:4 -1:1
//! -1:1 2:4
//! ```
//!
//! Witness files start with `field sqrt d` and hold `a+b*sqrt(d)` tokens.
//! Optional trailing lines `a`, `b`, `c`, `d` carry a rank-two
//! factorization and `coeffs_b`, `coeffs_c` carry column relations.
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, QuadMatrix, RationalMatrix};
use crate::number::quad::parse_quad;
use crate::number::rational::{format_rational, parse_rational};
use crate::number::interval::parse_interval;
use crate::number::{IntervalMatrix, QuadExt};
use crate::realize::{ColumnDepWitness, Rank2Witness, Witness};

/// A witness together with the field it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessFile {
    pub radicand: u64,
    pub witness: Witness,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices().chain(std::iter::once((self.text.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((self.text[..s].chars().count() + 1, &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.number, column, message: message.into() }
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, text)| Line { number: i + 1, text })
        .filter(|l| {
            let t = l.text.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect()
}

/// Moves a token-level parse error to its place in the file.
fn at<T>(r: Result<T>, line: &Line, column: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { message, .. } => line.error(column, message),
        other => line.error(column, other.to_string()),
    })
}

fn normalize(token: &str) -> String {
    token.replace('\u{2212}', "-")
}

fn header(ls: &[Line], k: usize) -> Result<(usize, usize)> {
    let line = ls.get(k).ok_or(Error::Parse { line: 1, column: 1, message: "missing dimension line `p q`".into() })?;
    let t = line.tokens();
    if t.len() != 2 {
        return Err(line.error(1, "expected dimension line `p q`"));
    }
    let dim = |(c, s): (usize, &str)| s.parse::<usize>().map_err(|_| line.error(c, format!("invalid dimension `{s}`")));
    Ok((dim(t[0])?, dim(t[1])?))
}

fn grid<T: Clone>(ls: &[Line], first: usize, p: usize, q: usize, parse: impl Fn(&str) -> Result<T>) -> Result<Matrix<T>> {
    let mut data = Vec::with_capacity(p * q);
    for i in 0..p {
        let line = ls.get(first + i).ok_or_else(|| {
            let last = ls.last().map_or(1, |l| l.number);
            Error::Parse { line: last + 1, column: 1, message: format!("expected {p} matrix rows, found {i}") }
        })?;
        let t = line.tokens();
        if t.len() != q {
            return Err(line.error(1, format!("expected {q} entries, found {}", t.len())));
        }
        for (c, s) in t {
            data.push(at(parse(&normalize(s)), line, c)?);
        }
    }
    Matrix::from_vec(p, q, data)
}

fn reject_trailing(ls: &[Line], k: usize) -> Result<()> {
    match ls.get(k) {
        Some(line) => Err(line.error(1, "unexpected trailing content")),
        None => Ok(()),
    }
}

pub fn parse_interval_matrix(text: &str) -> Result<IntervalMatrix> {
    let ls = lines(text);
    let (p, q) = header(&ls, 0)?;
    let m = grid(&ls, 1, p, q, parse_interval)?;
    reject_trailing(&ls, 1 + p)?;
    Ok(m)
}

pub fn parse_rational_matrix(text: &str) -> Result<RationalMatrix> {
    let ls = lines(text);
    let (p, q) = header(&ls, 0)?;
    let m = grid(&ls, 1, p, q, parse_rational)?;
    reject_trailing(&ls, 1 + p)?;
    Ok(m)
}

fn write_grid<T: Clone>(m: &Matrix<T>, cell: impl Fn(&T) -> String) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(&cell).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_interval_matrix(m: &IntervalMatrix) -> String {
    write_grid(m, |iv| iv.to_string())
}

pub fn write_rational_matrix(m: &RationalMatrix) -> String {
    write_grid(m, format_rational)
}

pub fn parse_witness(text: &str) -> Result<WitnessFile> {
    let ls = lines(text);
    let first = ls.first().ok_or(Error::Parse { line: 1, column: 1, message: "missing header `field sqrt d`".into() })?;
    let t = first.tokens();
    if t.len() != 3 || t[0].1 != "field" || t[1].1 != "sqrt" {
        return Err(first.error(1, "expected header `field sqrt d`"));
    }
    let radicand: u64 = t[2].1.parse().map_err(|_| first.error(t[2].0, format!("invalid radicand `{}`", t[2].1)))?;
    at(QuadExt::sqrt(radicand).map(|_| ()), first, t[2].0)?;
    let token = |s: &str| -> Result<QuadExt> {
        let x = parse_quad(s)?;
        if !x.is_rational() && x.radicand() != radicand {
            return Err(Error::Parse { line: 0, column: 0, message: format!("token `{s}` is outside the field sqrt {radicand}") });
        }
        Ok(x)
    };
    let (p, q) = header(&ls, 1)?;
    let matrix: QuadMatrix = grid(&ls, 2, p, q, token)?;
    let mut vectors: Vec<(&str, Vec<QuadExt>)> = Vec::new();
    for line in &ls[2 + p..] {
        let t = line.tokens();
        let (_, key) = t[0];
        if !["a", "b", "c", "d", "coeffs_b", "coeffs_c"].contains(&key) {
            return Err(line.error(1, format!("unknown witness section `{key}`")));
        }
        if vectors.iter().any(|(k, _)| *k == key) {
            return Err(line.error(1, format!("duplicate witness section `{key}`")));
        }
        let v = t[1..].iter().map(|&(c, s)| at(token(&normalize(s)), line, c)).collect::<Result<Vec<_>>>()?;
        vectors.push((key, v));
    }
    let get = |key: &str| vectors.iter().find(|(k, _)| *k == key).map(|(_, v)| v.clone());
    let invalid = |m: String| Error::WitnessInvalid(m);
    let has = |keys: &[&str]| keys.iter().any(|k| get(k).is_some());
    let witness = if has(&["coeffs_b", "coeffs_c"]) {
        if has(&["a", "b", "c", "d"]) {
            return Err(invalid("a witness file holds either a factorization or column relations".into()));
        }
        let w = ColumnDepWitness { matrix, coeffs_b: get("coeffs_b").unwrap_or_default(), coeffs_c: get("coeffs_c").unwrap_or_default() };
        if !w.relations_hold() {
            return Err(invalid("column relations do not hold for the witness matrix".into()));
        }
        Witness::ColumnDep(w)
    } else if has(&["a", "b", "c", "d"]) {
        let pad = |key: &str, n: usize| get(key).unwrap_or_else(|| vec![QuadExt::zero(); n]);
        let w = Rank2Witness { a: pad("a", p), b: pad("b", p), c: pad("c", q), d: pad("d", q) };
        if w.a.len() != p || w.b.len() != p || w.c.len() != q || w.d.len() != q {
            return Err(invalid("factor lengths do not match the matrix".into()));
        }
        if w.matrix() != matrix {
            return Err(invalid("factorization does not reproduce the witness matrix".into()));
        }
        Witness::Rank2(w)
    } else {
        Witness::Matrix(matrix)
    };
    Ok(WitnessFile { radicand, witness })
}

pub fn write_witness(w: &WitnessFile) -> String {
    let mut out = format!("field sqrt {}\n", w.radicand);
    out.push_str(&write_grid(&w.witness.matrix(), |x| x.to_string()));
    let mut section = |key: &str, v: &[QuadExt]| {
        let tokens: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        out.push_str(key);
        for t in tokens {
            out.push(' ');
            out.push_str(&t);
        }
        out.push('\n');
    };
    match &w.witness {
        Witness::Matrix(_) => {}
        Witness::Rank2(r) => {
            section("a", &r.a);
            section("b", &r.b);
            section("c", &r.c);
            section("d", &r.d);
        }
        Witness::ColumnDep(c) => {
            if !c.coeffs_b.is_empty() {
                section("coeffs_b", &c.coeffs_b);
            }
            section("coeffs_c", &c.coeffs_c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, RatInterval};

    #[test]
    fn interval_roundtrip() {
        let text = "2 2\n2:4 -1:1\n-1:1 2:4\n";
        let m = parse_interval_matrix(text).unwrap();
        assert_eq!(m.get(0, 0), &RatInterval::new(int(2), int(4)).unwrap());
        assert_eq!(write_interval_matrix(&m), text);
    }

    #[test]
    fn error_positions() {
        match parse_interval_matrix("2 2\n0:1 0:1\n0:1 1:x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 5)),
            other => panic!("{other:?}"),
        }
        match parse_interval_matrix("2 2\n0:1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_interval_matrix("1 1\n2:1\n"), Err(Error::Parse { line: 2, column: 1, .. })));
        assert!(parse_interval_matrix("1 1\n[\u{2212}1:1]\n").is_ok());
    }

    #[test]
    fn witness_sections() {
        let text = "field sqrt 2\n2 2\n1 1+1*sqrt(2)\n1 1+1*sqrt(2)\na 1 1\nc 1 1+1*sqrt(2)\n";
        let w = parse_witness(text).unwrap();
        assert!(matches!(w.witness, Witness::Rank2(_)));
        let back = parse_witness(&write_witness(&w)).unwrap();
        assert_eq!(back, w);
        assert!(matches!(
            parse_witness("field sqrt 2\n1 1\n0+1*sqrt(3)\n"),
            Err(Error::Parse { line: 3, column: 1, .. })
        ));
    }
}
