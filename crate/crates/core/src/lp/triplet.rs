//! Plain-text triplet format:
//!
//! ```text
//! m n nnz
//! row col value      (nnz lines, 0-based indices)
//! b_0 ... b_{m-1}
//! c_0 ... c_{n-1}
//! ```
//!
//! All fields are whitespace separated; `b` and `c` may span several lines.

use std::fmt::Write as _;

use super::LinearProgram;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

struct Tokens<'a> {
    iter: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let iter = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#'))
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
        Self {
            iter: Box::new(iter),
            last_line: 0,
        }
    }

    fn next_tok(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.iter.next() {
            Some((line, tok)) => {
                self.last_line = line;
                Ok((line, tok))
            }
            None => Err(Error::Parse {
                line: self.last_line,
                msg: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn usize(&mut self, what: &str) -> Result<usize> {
        let (line, tok) = self.next_tok(what)?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected {what}, found '{tok}'"),
        })
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        let (line, tok) = self.next_tok(what)?;
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Parse {
                line,
                msg: format!("expected {what}, found '{tok}'"),
            }),
        }
    }
}

pub fn parse_triplet(text: &str) -> Result<LinearProgram> {
    let mut tok = Tokens::new(text);
    let m = tok.usize("row count")?;
    let n = tok.usize("column count")?;
    let nnz = tok.usize("nonzero count")?;
    let mut trip = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let i = tok.usize("row index")?;
        let j = tok.usize("column index")?;
        let v = tok.f64("value")?;
        trip.push((i, j, v));
    }
    let b = (0..m)
        .map(|_| tok.f64("b entry"))
        .collect::<Result<Vec<_>>>()?;
    let c = (0..n)
        .map(|_| tok.f64("c entry"))
        .collect::<Result<Vec<_>>>()?;
    if let Some((line, t)) = tok.iter.next() {
        return Err(Error::Parse {
            line,
            msg: format!("trailing data '{t}'"),
        });
    }
    let a = SparseMatrix::from_triplets(m, n, &trip).map_err(|e| Error::Parse {
        line: tok.last_line,
        msg: e.to_string(),
    })?;
    LinearProgram::new("", a, b, c)
}

pub fn write_triplet(lp: &LinearProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", lp.num_rows(), lp.num_cols(), lp.a().nnz());
    for (i, j, v) in lp.a().triplets() {
        let _ = writeln!(out, "{i} {j} {v:e}");
    }
    let join = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:e}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "{}", join(lp.b()));
    let _ = writeln!(out, "{}", join(lp.c()));
    out
}
