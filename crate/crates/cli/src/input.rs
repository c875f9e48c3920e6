use std::path::Path;

use anyhow::{bail, Context, Result};
use potred::lp::{parse_mps, parse_triplet, LinearProgram, PrimalDualPoint};

/// Reads an LP; `.mps` files (or files starting with a NAME card) are MPS,
/// anything else the triplet format.
pub fn load_lp(path: &Path) -> Result<LinearProgram> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_mps = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("mps"))
        || text.trim_start().starts_with("NAME");
    let mut lp = if is_mps {
        parse_mps(&text)
    } else {
        parse_triplet(&text)
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    if lp.name.is_empty() {
        lp.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(lp)
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("line {lineno}: '{t}' is not a number"))
        })
        .collect()
}

/// Three non-comment lines: x, y and z.
pub fn load_start(path: &Path, lp: &LinearProgram) -> Result<PrimalDualPoint> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut vecs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        vecs.push(numbers(line, i + 1)?);
    }
    let [x, y, z]: [Vec<f64>; 3] = vecs.try_into().map_err(|v: Vec<Vec<f64>>| {
        anyhow::anyhow!("start file needs 3 vectors (x, y, z), found {}", v.len())
    })?;
    let (m, n) = (lp.num_rows(), lp.num_cols());
    if x.len() != n || y.len() != m || z.len() != n {
        bail!(
            "start dimensions ({}, {}, {}) do not match m={m}, n={n}",
            x.len(),
            y.len(),
            z.len()
        );
    }
    Ok(PrimalDualPoint { x, y, z })
}

fn count(tok: &str, what: &str) -> Result<usize> {
    tok.trim()
        .parse()
        .with_context(|| format!("invalid {what} '{tok}'"))
}

/// "m,n,seed"
pub fn parse_generate(text: &str) -> Result<(usize, usize, u64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        bail!("--generate expects m,n,seed, got '{text}'");
    }
    let seed = parts[2]
        .trim()
        .parse()
        .with_context(|| format!("invalid seed '{}'", parts[2]))?;
    Ok((count(parts[0], "m")?, count(parts[1], "n")?, seed))
}

/// "MxN,MxN,..."
pub fn parse_sizes(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (m, n) = s
                .split_once('x')
                .with_context(|| format!("size '{s}' is not MxN"))?;
            Ok((count(m, "m")?, count(n, "n")?))
        })
        .collect()
}

/// "A..B" (half open) or "s1,s2,..."; an empty string is an empty list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .with_context(|| format!("invalid seed range '{text}'"))?;
        let b: u64 = b
            .trim()
            .parse()
            .with_context(|| format!("invalid seed range '{text}'"))?;
        return Ok((a..b).collect());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .with_context(|| format!("invalid seed '{s}'"))
        })
        .collect()
}
