//! Fixed-form MPS subset: NAME, ROWS (N/E/L/G), COLUMNS, RHS, ENDATA.
//!
//! Fields are split on whitespace, so names must not contain blanks. `L` and
//! `G` rows receive a slack column with coefficient `+1` / `−1`. RANGES and
//! BOUNDS are rejected.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::LinearProgram;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Name,
    Rows,
    Columns,
    Rhs,
    End,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Objective,
    Free,
    Eq,
    Le,
    Ge,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, format!("non-numeric field '{tok}'")))?;
    if !v.is_finite() {
        return Err(err(line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

pub fn parse_mps(text: &str) -> Result<LinearProgram> {
    let mut section = Section::Start;
    let mut name = String::new();
    let mut rows: Vec<(String, RowKind)> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut rhs: HashMap<usize, f64> = HashMap::new();
    let mut current_col: Option<String> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let is_header = !raw.starts_with(char::is_whitespace);

        if is_header {
            let next = match tokens[0] {
                "NAME" => Section::Name,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "ENDATA" => Section::End,
                "RANGES" | "BOUNDS" => {
                    return Err(err(line, format!("{} section is not supported", tokens[0])))
                }
                other => return Err(err(line, format!("unknown section '{other}'"))),
            };
            let expected_prev = match next {
                Section::Name => section == Section::Start,
                Section::Rows => section == Section::Name,
                Section::Columns => section == Section::Rows,
                Section::Rhs => section == Section::Columns,
                Section::End => section >= Section::Columns,
                Section::Start => false,
            };
            if !expected_prev {
                return Err(err(line, format!("section {} out of order", tokens[0])));
            }
            if next == Section::Columns
                && !rows
                    .iter()
                    .any(|r| r.1 != RowKind::Objective && r.1 != RowKind::Free)
            {
                return Err(err(line, "ROWS section declares no constraint rows"));
            }
            if next == Section::Name {
                name = tokens.get(1).copied().unwrap_or("").to_string();
            }
            section = next;
            if section == Section::End {
                break;
            }
            continue;
        }

        match section {
            Section::Rows => {
                if tokens.len() != 2 {
                    return Err(err(line, "ROWS entry needs a type and a name"));
                }
                let kind = match tokens[0] {
                    "N" if rows.iter().any(|r| r.1 == RowKind::Objective) => RowKind::Free,
                    "N" => RowKind::Objective,
                    "E" => RowKind::Eq,
                    "L" => RowKind::Le,
                    "G" => RowKind::Ge,
                    t => return Err(err(line, format!("unknown row type '{t}'"))),
                };
                if row_index
                    .insert(tokens[1].to_string(), rows.len())
                    .is_some()
                {
                    return Err(err(line, format!("duplicate row name '{}'", tokens[1])));
                }
                rows.push((tokens[1].to_string(), kind));
            }
            Section::Columns => {
                if tokens.iter().any(|t| *t == "'MARKER'") {
                    return Err(err(line, "integer markers are not supported"));
                }
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(err(
                        line,
                        "COLUMNS entry needs a column name and one or two (row, value) pairs",
                    ));
                }
                let col = tokens[0];
                if current_col.as_deref() != Some(col) {
                    if col_index.contains_key(col) {
                        return Err(err(line, format!("duplicate column name '{col}'")));
                    }
                    col_index.insert(col.to_string(), cost.len());
                    cost.push(0.0);
                    current_col = Some(col.to_string());
                }
                let j = col_index[col];
                for pair in tokens[1..].chunks(2) {
                    let &r = row_index
                        .get(pair[0])
                        .ok_or_else(|| err(line, format!("undeclared row '{}'", pair[0])))?;
                    let v = number(pair[1], line)?;
                    match rows[r].1 {
                        RowKind::Objective => cost[j] = v,
                        RowKind::Free => {}
                        _ => entries.push((r, j, v)),
                    }
                }
            }
            Section::Rhs => {
                let pairs = if tokens.len() % 2 == 1 {
                    &tokens[1..]
                } else {
                    &tokens[..]
                };
                if pairs.is_empty() || pairs.len() > 4 {
                    return Err(err(line, "RHS entry needs one or two (row, value) pairs"));
                }
                for pair in pairs.chunks(2) {
                    let &r = row_index
                        .get(pair[0])
                        .ok_or_else(|| err(line, format!("undeclared row '{}'", pair[0])))?;
                    let v = number(pair[1], line)?;
                    if matches!(rows[r].1, RowKind::Eq | RowKind::Le | RowKind::Ge) {
                        rhs.insert(r, v);
                    }
                }
            }
            Section::Name => return Err(err(line, "data line before ROWS")),
            Section::Start => return Err(err(line, "file must start with NAME")),
            Section::End => unreachable!(),
        }
    }
    if section != Section::End {
        return Err(err(last_line, "missing ENDATA"));
    }

    // constraint rows keep declaration order
    let mut row_map = vec![usize::MAX; rows.len()];
    let mut kinds = Vec::new();
    for (r, (_, kind)) in rows.iter().enumerate() {
        if matches!(kind, RowKind::Eq | RowKind::Le | RowKind::Ge) {
            row_map[r] = kinds.len();
            kinds.push(*kind);
        }
    }
    let m = kinds.len();
    let mut trip: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len() + m);
    for &(r, j, v) in &entries {
        trip.push((row_map[r], j, v));
    }
    let mut b = vec![0.0; m];
    for (&r, &v) in &rhs {
        b[row_map[r]] = v;
    }
    let mut c = cost;
    for (i, kind) in kinds.iter().enumerate() {
        let sign = match kind {
            RowKind::Le => 1.0,
            RowKind::Ge => -1.0,
            _ => continue,
        };
        trip.push((i, c.len(), sign));
        c.push(0.0);
    }
    let n = c.len();
    let a = SparseMatrix::from_triplets(m, n, &trip)
        .map_err(|e| err(last_line, format!("matrix assembly failed: {e}")))?;
    LinearProgram::new(name, a, b, c)
}

/// Writes `lp` as an all-equality MPS file that [`parse_mps`] reads back exactly.
pub fn write_mps(lp: &LinearProgram) -> String {
    let mut out = String::new();
    let name = if lp.name.is_empty() {
        "LP"
    } else {
        lp.name.as_str()
    };
    let _ = writeln!(out, "NAME          {name}");
    out.push_str("ROWS\n N  COST\n");
    for i in 0..lp.num_rows() {
        let _ = writeln!(out, " E  R{i}");
    }
    out.push_str("COLUMNS\n");
    for j in 0..lp.num_cols() {
        let cj = lp.c()[j];
        let mut any = false;
        if cj != 0.0 {
            let _ = writeln!(out, "    C{j}  COST  {cj:e}");
            any = true;
        }
        for (i, v) in lp.a().col(j) {
            let _ = writeln!(out, "    C{j}  R{i}  {v:e}");
            any = true;
        }
        if !any {
            let _ = writeln!(out, "    C{j}  COST  0");
        }
    }
    out.push_str("RHS\n");
    for (i, &v) in lp.b().iter().enumerate() {
        if v != 0.0 {
            let _ = writeln!(out, "    RHS  R{i}  {v:e}");
        }
    }
    out.push_str("ENDATA\n");
    out
}
