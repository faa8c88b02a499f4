//! Versioned text cache for hit bases.
//!
//! ```text
//! cohit-cache v1 k=<k> d=<d>
//! <one admissible monomial per line, exponents comma separated>
//! <one line per degree-d monomial: "exponents : coordinate bits">
//! ```
//! Monomials appear in `compare_monomials` order, so the file is
//! byte-identical for a given (k, d).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::hit::HitBasis;
use crate::poly::Monomial;
use crate::sum::format_tuple;

pub const CACHE_VERSION: &str = "v1";

pub fn header(k: usize, d: u32) -> String {
    format!("cohit-cache {CACHE_VERSION} k={k} d={d}")
}

pub fn cache_path(dir: &Path, k: usize, d: u32) -> PathBuf {
    dir.join(format!("hit_k{k}_d{d}.txt"))
}

pub fn serialize(basis: &HitBasis) -> String {
    let mut out = header(basis.k, basis.d);
    out.push('\n');
    for m in basis.admissible_monomials() {
        out.push_str(&format_tuple(&m.0));
        out.push('\n');
    }
    for (m, v) in basis.ordered.iter().zip(&basis.decomposition) {
        let _ = writeln!(out, "{} : {}", format_tuple(&m.0), v.to_bit_string());
    }
    out
}

fn parse_exponents(s: &str, k: usize) -> Option<Monomial> {
    let e: Vec<u32> = if k == 0 && s.is_empty() {
        Vec::new()
    } else {
        s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?
    };
    (e.len() == k).then_some(Monomial(e))
}

pub fn deserialize(text: &str, k: usize, d: u32, path: &Path) -> Result<HitBasis> {
    let bad = |msg: String| Error::Cache { path: path.display().to_string(), msg };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == header(k, d) => {}
        Some((_, h)) => return Err(bad(format!("header {h:?} does not match {:?}", header(k, d)))),
        None => return Err(bad("empty file".into())),
    }
    let mut admissible = Vec::new();
    let mut decomposition = Vec::new();
    for (n, line) in lines {
        match line.split_once(" : ") {
            None if decomposition.is_empty() => {
                admissible.push(parse_exponents(line, k).ok_or_else(|| bad(format!("line {}: bad monomial", n + 1)))?);
            }
            None => return Err(bad(format!("line {}: expected a coordinate line", n + 1))),
            Some((m, bits)) => {
                parse_exponents(m, k).ok_or_else(|| bad(format!("line {}: bad monomial", n + 1)))?;
                let v = if bits.is_empty() {
                    Some(BitVec::zeros(0))
                } else {
                    BitVec::from_bit_string(bits)
                };
                decomposition.push(v.ok_or_else(|| bad(format!("line {}: bad bit string", n + 1)))?);
            }
        }
    }
    let basis = HitBasis::from_parts(k, d, &admissible, decomposition).map_err(|e| bad(e.to_string()))?;
    if serialize(&basis) != text {
        return Err(bad("contents are not in canonical form".into()));
    }
    if !basis.kills_hit_vectors() {
        return Err(bad("coordinates do not vanish on hit elements".into()));
    }
    Ok(basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    /// Computed and written.
    Stored,
    /// No cache directory given.
    Disabled,
}

/// Loads the basis from `dir` if present and valid; otherwise computes it and
/// writes the cache. Unreadable or mismatched files are reported through
/// `warn` and replaced.
pub fn load_or_compute(dir: Option<&Path>, k: usize, d: u32, warn: &mut dyn FnMut(String)) -> Result<(HitBasis, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((HitBasis::compute(k, d), CacheStatus::Disabled));
    };
    let path = cache_path(dir, k, d);
    if path.exists() {
        match fs::read_to_string(&path).map_err(Error::from).and_then(|t| deserialize(&t, k, d, &path)) {
            Ok(b) => return Ok((b, CacheStatus::Hit)),
            Err(e) => warn(format!("{e}; recomputing")),
        }
    }
    let basis = HitBasis::compute(k, d);
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serialize(&basis))?;
    fs::rename(&tmp, &path)?;
    Ok((basis, CacheStatus::Stored))
}
