//! Level-`n` cell graphs of a carpet.
//!
//! Vertices are the cells `F_w([0,1]^d)`, `w ∈ S^n`, identified by their
//! integer origin at resolution `l^n` and sorted by the mixed-radix code of
//! that origin. Two cells are joined when they share a `(d−1)`-face, i.e.
//! their origins differ by one in exactly one coordinate.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::CarpetSpec;
use crate::symmetry::CubeSymmetry;
use crate::word::Word;

/// Default cap on the number of cells of a graph: `2^22`.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct CellGraph {
    spec: CarpetSpec,
    level: u32,
    side: u64,
    /// `side^k` for each axis.
    strides: Vec<u64>,
    codes: Vec<u64>,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

/// Cells whose cube meets the hyperplane `{x_axis = side}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    pub axis: usize,
    pub side: u8,
    pub cells: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphHeader {
    pub spec_hash: String,
    pub d: usize,
    pub l: u32,
    pub level: u32,
    pub cells: usize,
    pub face_edges: usize,
}

/// Number of level-`n` cells, `(#S)^n`, checked against a budget.
pub fn check_budget(spec: &CarpetSpec, level: u32, budget: u64) -> Result<u64> {
    let cells = (spec.len() as u128).checked_pow(level).unwrap_or(u128::MAX);
    if cells > budget as u128 {
        return Err(Error::Budget {
            level,
            cells,
            budget,
        });
    }
    Ok(cells as u64)
}

pub fn build_cell_graph(spec: &CarpetSpec, level: u32, budget: u64) -> Result<CellGraph> {
    if level == 0 {
        return Err(Error::InvalidArgument("cell graphs start at level 1".into()));
    }
    let count = check_budget(spec, level, budget)?;
    if count > u32::MAX as u64 {
        return Err(Error::Budget {
            level,
            cells: count as u128,
            budget,
        });
    }
    let d = spec.d();
    let l = spec.l() as u64;
    let side = l.pow(level);
    side.checked_pow(d as u32).ok_or_else(|| {
        Error::InvalidArgument(format!("grid of side {side} in dimension {d} overflows"))
    })?;
    let strides: Vec<u64> = (0..d as u32).map(|k| side.pow(k)).collect();

    // code(w·s) = l · code(w) + code_side(s) at the final resolution
    let letters: Vec<u64> = spec
        .tuples()
        .map(|t| t.iter().zip(&strides).map(|(&x, &s)| x as u64 * s).sum())
        .collect();
    let mut codes = vec![0u64];
    for _ in 0..level {
        codes = codes
            .par_iter()
            .flat_map_iter(|&c| letters.iter().map(move |&s| c * l + s))
            .collect();
    }
    codes.par_sort_unstable();

    let edges: Vec<(u32, u32)> = codes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, &code)| {
            let codes = &codes;
            strides.iter().filter_map(move |&stride| {
                if (code / stride) % side + 1 == side {
                    return None;
                }
                codes
                    .binary_search(&(code + stride))
                    .ok()
                    .map(|b| (a as u32, b as u32))
            })
        })
        .collect();

    let (offsets, neighbors) = csr(codes.len(), &edges);
    Ok(CellGraph {
        spec: spec.clone(),
        level,
        side,
        strides,
        codes,
        edges,
        offsets,
        neighbors,
    })
}

fn csr(n: usize, edges: &[(u32, u32)]) -> (Vec<usize>, Vec<u32>) {
    let mut degree = vec![0usize; n + 1];
    for &(a, b) in edges {
        degree[a as usize + 1] += 1;
        degree[b as usize + 1] += 1;
    }
    for i in 0..n {
        degree[i + 1] += degree[i];
    }
    let offsets = degree;
    let mut fill = offsets.clone();
    let mut neighbors = vec![0u32; 2 * edges.len()];
    for &(a, b) in edges {
        neighbors[fill[a as usize]] = b;
        fill[a as usize] += 1;
        neighbors[fill[b as usize]] = a;
        fill[b as usize] += 1;
    }
    (offsets, neighbors)
}

impl CellGraph {
    pub fn spec(&self) -> &CarpetSpec {
        &self.spec
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn d(&self) -> usize {
        self.spec.d()
    }

    /// Grid resolution `l^n`.
    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Face-adjacency edges `(a, b)`, `a < b`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, cell: usize) -> &[u32] {
        &self.neighbors[self.offsets[cell]..self.offsets[cell + 1]]
    }

    pub fn degree(&self, cell: usize) -> usize {
        self.offsets[cell + 1] - self.offsets[cell]
    }

    /// Adjacency in compressed-row form: `(offsets, neighbors)`.
    pub fn csr(&self) -> (&[usize], &[u32]) {
        (&self.offsets, &self.neighbors)
    }

    /// Self-similar measure of one cell, `(#S)^{-n}`.
    pub fn cell_measure(&self) -> f64 {
        (self.spec.len() as f64).powi(-(self.level as i32))
    }

    pub fn origin(&self, cell: usize) -> Vec<u64> {
        let mut out = vec![0; self.d()];
        self.origin_into(cell, &mut out);
        out
    }

    pub fn origin_into(&self, cell: usize, out: &mut [u64]) {
        let mut code = self.codes[cell];
        for o in out.iter_mut() {
            *o = code % self.side;
            code /= self.side;
        }
    }

    pub fn origin_coord(&self, cell: usize, axis: usize) -> u64 {
        (self.codes[cell] / self.strides[axis]) % self.side
    }

    pub fn index_of(&self, origin: &[u64]) -> Option<usize> {
        if origin.len() != self.d() || origin.iter().any(|&x| x >= self.side) {
            return None;
        }
        let code = origin.iter().zip(&self.strides).map(|(&x, &s)| x * s).sum();
        self.codes.binary_search(&code).ok()
    }

    /// Pairs of distinct cells whose closed cubes intersect at all.
    pub fn touch_edges(&self) -> Vec<(u32, u32)> {
        let d = self.d();
        let total = 3usize.pow(d as u32);
        let offsets: Vec<Vec<i64>> = (0..total)
            .filter(|&c| c != total / 2)
            .map(|mut c| {
                (0..d)
                    .map(|_| {
                        let x = (c % 3) as i64 - 1;
                        c /= 3;
                        x
                    })
                    .collect()
            })
            .collect();
        let mut origin = vec![0u64; d];
        let mut nb = vec![0u64; d];
        let mut out = Vec::new();
        for a in 0..self.len() {
            self.origin_into(a, &mut origin);
            for off in &offsets {
                let inside = origin.iter().zip(off).zip(nb.iter_mut()).all(|((&o, &dx), n)| {
                    let y = o as i64 + dx;
                    *n = y as u64;
                    y >= 0 && (y as u64) < self.side
                });
                if !inside {
                    continue;
                }
                if let Some(b) = self.index_of(&nb) {
                    if b > a {
                        out.push((a as u32, b as u32));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of connected components for an edge list over this graph's cells.
    pub fn component_count(&self, edges: &[(u32, u32)]) -> usize {
        let mut parent: Vec<u32> = (0..self.len() as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        let mut count = self.len();
        for &(a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra as usize] = rb;
                count -= 1;
            }
        }
        count
    }

    pub fn header(&self) -> GraphHeader {
        GraphHeader {
            spec_hash: self.spec.hash(),
            d: self.d(),
            l: self.spec.l(),
            level: self.level,
            cells: self.len(),
            face_edges: self.edges.len(),
        }
    }

    /// One row per face edge: the two origins, `a_1..a_d,b_1..b_d`.
    pub fn write_edges_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.d();
        let head: Vec<String> = (1..=d)
            .map(|k| format!("cell_{k}"))
            .chain((1..=d).map(|k| format!("neighbor_{k}")))
            .collect();
        writeln!(out, "{}", head.join(","))?;
        let mut a = vec![0u64; d];
        let mut b = vec![0u64; d];
        for &(x, y) in &self.edges {
            self.origin_into(x as usize, &mut a);
            self.origin_into(y as usize, &mut b);
            let row: Vec<String> = a.iter().chain(&b).map(u64::to_string).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Cells with `origin_axis = 0` (`side = 0`) or `l^n − 1` (`side = 1`).
pub fn face_cells(graph: &CellGraph, axis: usize, side: u8) -> Result<FaceSet> {
    if axis >= graph.d() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for d = {}",
            graph.d()
        )));
    }
    let target = match side {
        0 => 0,
        1 => graph.side() - 1,
        _ => return Err(Error::InvalidArgument(format!("face side must be 0 or 1, got {side}"))),
    };
    let cells = (0..graph.len())
        .filter(|&c| graph.origin_coord(c, axis) == target)
        .map(|c| c as u32)
        .collect();
    Ok(FaceSet { axis, side, cells })
}

/// The injection `v ↦ w·v` from `inner` cells into `outer` cells, where
/// `outer.level() = |w| + inner.level()`.
pub fn subcell_embedding(inner: &CellGraph, outer: &CellGraph, w: &Word) -> Result<Vec<u32>> {
    if outer.level() as usize != w.level() + inner.level() as usize || inner.spec() != outer.spec() {
        return Err(Error::InvalidArgument(format!(
            "cannot embed level {} under a word of length {} into level {}",
            inner.level(),
            w.level(),
            outer.level()
        )));
    }
    let base: Vec<u64> = w
        .cell_origin(outer.spec())
        .iter()
        .map(|&o| o * inner.side())
        .collect();
    let mut origin = vec![0u64; inner.d()];
    (0..inner.len())
        .map(|v| {
            inner.origin_into(v, &mut origin);
            for (o, &b) in origin.iter_mut().zip(&base) {
                *o += b;
            }
            outer
                .index_of(&origin)
                .map(|i| i as u32)
                .ok_or_else(|| Error::InvalidArgument(format!("cell {origin:?} missing from outer graph")))
        })
        .collect()
}

/// The cell permutation induced by a cube symmetry.
pub fn apply_symmetry_to_graph(graph: &CellGraph, g: &CubeSymmetry) -> Result<Vec<u32>> {
    if g.dim() != graph.d() {
        return Err(Error::InvalidArgument(format!(
            "symmetry of dimension {} on a graph of dimension {}",
            g.dim(),
            graph.d()
        )));
    }
    let mut origin = vec![0u64; graph.d()];
    let mut image = Vec::with_capacity(graph.d());
    (0..graph.len())
        .map(|a| {
            graph.origin_into(a, &mut origin);
            g.apply_into(&origin, graph.side(), &mut image);
            graph
                .index_of(&image)
                .map(|b| b as u32)
                .ok_or_else(|| Error::NotAutomorphism {
                    symmetry: g.to_string(),
                    cell: origin.clone(),
                })
        })
        .collect()
}
