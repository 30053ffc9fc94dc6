//! The hyperoctahedral group: isometries of the unit cube as signed permutations.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An isometry of `[0,1]^d`.
///
/// Acting on a grid index `i ∈ {0,…,side−1}^d`, coordinate `k` of the image is
/// `i[perm[k]]`, replaced by `side − 1 − i[perm[k]]` when `flips[k]` is set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeSymmetry {
    perm: Vec<usize>,
    flips: Vec<bool>,
}

impl CubeSymmetry {
    pub fn new(perm: Vec<usize>, flips: Vec<bool>) -> Result<Self> {
        let d = perm.len();
        if flips.len() != d {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {d} with {} flips",
                flips.len()
            )));
        }
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Self { perm, flips })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            perm: (0..d).collect(),
            flips: vec![false; d],
        }
    }

    /// The coordinate reflection `x_k ↦ 1 − x_k` for every `k` with `mask[k]`.
    pub fn reflection(mask: &[bool]) -> Self {
        Self {
            perm: (0..mask.len()).collect(),
            flips: mask.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    pub fn is_identity(&self) -> bool {
        self.flips.iter().all(|f| !f) && self.perm.iter().enumerate().all(|(k, &p)| k == p)
    }

    /// Image of a grid index on a grid of the given side length.
    pub fn apply<T>(&self, index: &[T], side: T) -> Vec<T>
    where
        T: Copy + std::ops::Sub<Output = T> + From<u8>,
    {
        let mut out = Vec::with_capacity(index.len());
        self.apply_into(index, side, &mut out);
        out
    }

    pub fn apply_into<T>(&self, index: &[T], side: T, out: &mut Vec<T>)
    where
        T: Copy + std::ops::Sub<Output = T> + From<u8>,
    {
        out.clear();
        let top = side - T::from(1);
        out.extend(self.perm.iter().zip(&self.flips).map(|(&p, &f)| {
            let x = index[p];
            if f {
                top - x
            } else {
                x
            }
        }));
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let flips = self
            .perm
            .iter()
            .zip(&self.flips)
            .map(|(&p, &f)| f ^ other.flips[p])
            .collect();
        Self { perm, flips }
    }

    pub fn inverse(&self) -> Self {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut flips = vec![false; d];
        for (k, (&p, &f)) in self.perm.iter().zip(&self.flips).enumerate() {
            perm[p] = k;
            flips[p] = f;
        }
        Self { perm, flips }
    }
}

impl fmt::Debug for CubeSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CubeSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flips: String = self.flips.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "perm={:?} flips={flips}", self.perm)
    }
}

/// All `2^d · d!` symmetries of the `d`-cube, identity first.
pub fn enumerate_cube_group(d: usize) -> Result<Vec<CubeSymmetry>> {
    if d == 0 {
        return Err(Error::InvalidArgument("cube group of dimension 0".into()));
    }
    let perms = permutations(d);
    let mut out = Vec::with_capacity(perms.len() << d);
    for perm in perms {
        for mask in 0u32..(1 << d) {
            let flips = (0..d).map(|k| mask >> k & 1 == 1).collect();
            out.push(CubeSymmetry {
                perm: perm.clone(),
                flips,
            });
        }
    }
    Ok(out)
}

/// The reflections `g_ε` with `ε ∈ {0} × {0,1}^{d−1}`: they fix the two
/// faces normal to the first coordinate.
pub fn first_axis_reflections(d: usize) -> Vec<CubeSymmetry> {
    (0u32..(1 << (d - 1)))
        .map(|mask| {
            let flips: Vec<bool> = (0..d).map(|k| k > 0 && mask >> (k - 1) & 1 == 1).collect();
            CubeSymmetry::reflection(&flips)
        })
        .collect()
}

/// Permutations of `0..d` in lexicographic order.
fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..d).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..d).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}
