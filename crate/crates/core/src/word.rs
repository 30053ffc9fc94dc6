//! Words over `S` and the integer origins of the cells they address.

use crate::error::{Error, Result};
use crate::spec::CarpetSpec;

/// A word `w = w_1 … w_m` with letters in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Vec<u32>>,
}

impl Word {
    pub fn new(spec: &CarpetSpec, letters: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|t| !spec.contains(t)) {
            return Err(Error::InvalidArgument(format!("letter {bad:?} is not in S")));
        }
        Ok(Self { letters })
    }

    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Vec<u32>] {
        &self.letters
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    /// Integer lower corner `Σ_t l^{m−t} w_t` of the cell `F_w([0,1]^d)` at
    /// resolution `l^m`; dividing by `l^m` gives `F_w(0)`. The empty word
    /// maps to the origin at resolution 1.
    pub fn cell_origin(&self, spec: &CarpetSpec) -> Vec<u64> {
        let l = spec.l() as u64;
        let mut origin = vec![0u64; spec.d()];
        for letter in &self.letters {
            for (o, &x) in origin.iter_mut().zip(letter) {
                *o = *o * l + x as u64;
            }
        }
        origin
    }

    /// All words of length `m`, in lexicographic order of letter ranks.
    pub fn all(spec: &CarpetSpec, m: usize) -> Vec<Word> {
        let alphabet: Vec<Vec<u32>> = spec.tuples().collect();
        let mut words = vec![Word::empty()];
        for _ in 0..m {
            words = words
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |a| {
                        let mut letters = w.letters.clone();
                        letters.push(a.clone());
                        Word { letters }
                    })
                })
                .collect();
        }
        words
    }
}

/// `q^w` as floating point: the cell origin scaled by `l^{-m}`.
pub fn q_point(w: &Word, spec: &CarpetSpec) -> Vec<f64> {
    let scale = (spec.l() as f64).powi(w.level() as i32);
    w.cell_origin(spec).iter().map(|&o| o as f64 / scale).collect()
}
