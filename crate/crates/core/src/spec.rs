//! Carpet specifications `(d, l, S)`.
//!
//! A spec stores its cell set as sorted mixed-radix codes
//! `i ↦ Σ_k i_k l^k` (coordinate 0 least significant) together with a dense
//! membership table over the full `l^d` grid.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Largest `l^d` grid a spec may occupy.
pub const MAX_GRID: u64 = 1 << 24;

/// A candidate generalized Sierpiński carpet.
#[derive(Clone, PartialEq, Eq)]
pub struct CarpetSpec {
    d: usize,
    l: u32,
    codes: Vec<u64>,
    member: Vec<bool>,
}

/// On-disk form: `{"d": int, "l": int, "S": [[int, ...], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct SpecFile {
    d: usize,
    l: u32,
    #[serde(rename = "S")]
    cells: Vec<Vec<u32>>,
}

impl CarpetSpec {
    pub fn new<I, T>(d: usize, l: u32, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u32]>,
    {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("dimension d = {d} must be at least 2")));
        }
        if l < 3 {
            return Err(Error::InvalidSpec(format!("subdivision l = {l} must be at least 3")));
        }
        let grid = (l as u64)
            .checked_pow(d as u32)
            .filter(|&g| g <= MAX_GRID)
            .ok_or_else(|| Error::InvalidSpec(format!("grid l^d = {l}^{d} is too large")))?;

        let mut member = vec![false; grid as usize];
        let mut codes = Vec::new();
        for cell in cells {
            let cell = cell.as_ref();
            if cell.len() != d {
                return Err(Error::InvalidSpec(format!(
                    "tuple {cell:?} has {} entries, expected {d}",
                    cell.len()
                )));
            }
            if let Some(&bad) = cell.iter().find(|&&x| x >= l) {
                return Err(Error::InvalidSpec(format!(
                    "tuple {cell:?} has entry {bad} outside [0, {}]",
                    l - 1
                )));
            }
            let code = encode(cell, l);
            if member[code as usize] {
                return Err(Error::InvalidSpec(format!("duplicate tuple {cell:?}")));
            }
            member[code as usize] = true;
            codes.push(code);
        }
        if codes.is_empty() {
            return Err(Error::InvalidSpec("S is empty".into()));
        }
        if codes.len() as u64 == grid {
            return Err(Error::InvalidSpec(format!(
                "S is the full grid {{0,...,{}}}^{d}; it must be a proper subset",
                l - 1
            )));
        }
        codes.sort_unstable();
        Ok(Self { d, l, codes, member })
    }

    /// Builds a spec from a membership predicate over the full grid.
    pub fn from_predicate(d: usize, l: u32, mut keep: impl FnMut(&[u32]) -> bool) -> Result<Self> {
        let grid = (l as u64)
            .checked_pow(d as u32)
            .filter(|&g| g <= MAX_GRID)
            .ok_or_else(|| Error::InvalidSpec(format!("grid l^d = {l}^{d} is too large")))?;
        let mut cells = Vec::new();
        let mut buf = vec![0u32; d];
        for code in 0..grid {
            decode_into(code, l, &mut buf);
            if keep(&buf) {
                cells.push(buf.clone());
            }
        }
        Self::new(d, l, cells)
    }

    /// The Sierpiński carpet: `{0,1,2}² ∖ {(1,1)}`.
    pub fn sierpinski_carpet() -> Self {
        Self::from_predicate(2, 3, |i| i != [1, 1]).expect("carpet spec is valid")
    }

    /// The Menger sponge: cells of `{0,1,2}³` with at most one coordinate equal to 1.
    pub fn menger_sponge() -> Self {
        Self::from_predicate(3, 3, |i| i.iter().filter(|&&x| x == 1).count() <= 1)
            .expect("sponge spec is valid")
    }

    /// Resolves `"sc"`, `"menger"` or `"counterexample:d,l"`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name.trim() {
            "sc" | "carpet" => Ok(Self::sierpinski_carpet()),
            "menger" | "ms" => Ok(Self::menger_sponge()),
            other => {
                let args = other.strip_prefix("counterexample:").ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown builtin {other:?}; expected sc, menger or counterexample:d,l"
                    ))
                })?;
                let (d, l) = parse_pair(args)?;
                crate::counterexample::gen_counterexample(d, l)
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `#S`.
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, cell: &[u32]) -> bool {
        cell.len() == self.d
            && cell.iter().all(|&x| x < self.l)
            && self.member[encode(cell, self.l) as usize]
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.member.get(code as usize).copied().unwrap_or(false)
    }

    pub fn encode(&self, cell: &[u32]) -> u64 {
        encode(cell, self.l)
    }

    pub fn decode(&self, code: u64) -> Vec<u32> {
        let mut out = vec![0; self.d];
        decode_into(code, self.l, &mut out);
        out
    }

    /// Rank of a member cell in the sorted code order.
    pub fn rank(&self, cell: &[u32]) -> Option<usize> {
        self.codes.binary_search(&encode(cell, self.l)).ok()
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.codes.iter().map(|&c| self.decode(c))
    }

    /// Number of cells of `S` in each slab `{i : i_axis = j}`.
    pub fn slab_counts(&self, axis: usize) -> Vec<usize> {
        let mut counts = vec![0; self.l as usize];
        for t in self.tuples() {
            counts[t[axis] as usize] += 1;
        }
        counts
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Self::new(file.d, file.l, file.cells)
    }

    /// Canonical JSON: tuples sorted by integer code, compact form.
    pub fn to_canonical_json(&self) -> String {
        let file = SpecFile {
            d: self.d,
            l: self.l,
            cells: self.tuples().collect(),
        };
        serde_json::to_string(&file).expect("spec serializes")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Short prefix of [`CarpetSpec::hash`] used in file names.
    pub fn short_hash(&self) -> String {
        self.hash()[..16].to_string()
    }
}

impl fmt::Debug for CarpetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CarpetSpec")
            .field("d", &self.d)
            .field("l", &self.l)
            .field("cells", &self.codes.len())
            .finish()
    }
}

pub(crate) fn encode(cell: &[u32], l: u32) -> u64 {
    cell.iter().rev().fold(0u64, |acc, &x| acc * l as u64 + x as u64)
}

pub(crate) fn decode_into(mut code: u64, l: u32, out: &mut [u32]) {
    for slot in out.iter_mut() {
        *slot = (code % l as u64) as u32;
        code /= l as u64;
    }
}

pub(crate) fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("expected \"d,l\", got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let d = a.trim().parse().map_err(|_| bad())?;
    let l = b.trim().parse().map_err(|_| bad())?;
    Ok((d, l))
}
