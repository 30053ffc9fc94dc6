//! Exhaustive enumeration of small symmetric specs.
//!
//! A spec invariant under the cube group is a union of group orbits on the
//! grid, so the candidates are the subsets of the orbit list.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::CarpetSpec;
use crate::symmetry::enumerate_cube_group;
use crate::validate::{check_borders, check_connectedness, check_nondiagonality, NdMethod};

/// Orbits of the cube group on `{0,…,l−1}^d`, each as a sorted list of codes.
pub fn grid_orbits(d: usize, l: u32) -> Result<Vec<Vec<u64>>> {
    let group = enumerate_cube_group(d)?;
    let grid = (l as u64)
        .checked_pow(d as u32)
        .filter(|&g| g <= 1 << 20)
        .ok_or_else(|| Error::InvalidArgument(format!("census grid {l}^{d} is too large")))?;
    let mut orbit_of = vec![usize::MAX; grid as usize];
    let mut orbits = Vec::new();
    let mut cell = vec![0u32; d];
    for code in 0..grid {
        if orbit_of[code as usize] != usize::MAX {
            continue;
        }
        crate::spec::decode_into(code, l, &mut cell);
        let mut members: Vec<u64> = group
            .iter()
            .map(|g| crate::spec::encode(&g.apply(&cell, l), l))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            orbit_of[m as usize] = orbits.len();
        }
        orbits.push(members);
    }
    Ok(orbits)
}

/// Every spec with the given `(d, l)` that is symmetric, connected and
/// contains the border `[0,1] × {0}^{d−1}`.
pub fn symmetric_connected_specs(d: usize, l: u32) -> Result<Vec<CarpetSpec>> {
    let orbits = grid_orbits(d, l)?;
    if orbits.len() > 20 {
        return Err(Error::InvalidArgument(format!(
            "{} orbits is too many to enumerate",
            orbits.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << orbits.len()) {
        let cells: Vec<Vec<u32>> = orbits
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .flat_map(|(_, orbit)| orbit.iter())
            .map(|&c| {
                let mut t = vec![0u32; d];
                crate::spec::decode_into(c, l, &mut t);
                t
            })
            .collect();
        let Ok(spec) = CarpetSpec::new(d, l, cells) else {
            continue; // the full grid
        };
        if check_borders(&spec).pass && check_connectedness(&spec).pass {
            out.push(spec);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub d: usize,
    pub l: u32,
    pub spec_hash: String,
    pub cells: usize,
    pub nd_m1: bool,
    pub nd_2: bool,
    pub ndf: bool,
}

/// Evaluates the three non-diagonality formulations over the census.
pub fn nondiagonality_census(d: usize, l: u32) -> Result<Vec<CensusEntry>> {
    Ok(symmetric_connected_specs(d, l)?
        .iter()
        .map(|spec| CensusEntry {
            d,
            l,
            spec_hash: spec.hash(),
            cells: spec.len(),
            nd_m1: check_nondiagonality(spec, NdMethod::LevelOne).pass,
            nd_2: check_nondiagonality(spec, NdMethod::LevelTwo).pass,
            ndf: check_nondiagonality(spec, NdMethod::Paths).pass,
        })
        .collect())
}
