use std::borrow::Cow;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::CellGraph;

/// Fixed reduction block; reductions are reproducible for any thread count.
const CHUNK: usize = 8192;

/// `E(u) = Σ_{(a,b)} (u_a − u_b)²` over the face edges of a graph.
#[derive(Debug, Clone)]
pub struct EnergyForm<'a> {
    cells: usize,
    edges: Cow<'a, [(u32, u32)]>,
    offsets: Cow<'a, [usize]>,
    neighbors: Cow<'a, [u32]>,
}

impl<'a> EnergyForm<'a> {
    pub fn new(graph: &'a CellGraph) -> Self {
        let (offsets, neighbors) = graph.csr();
        Self {
            cells: graph.len(),
            edges: Cow::Borrowed(graph.edges()),
            offsets: Cow::Borrowed(offsets),
            neighbors: Cow::Borrowed(neighbors),
        }
    }

    /// A form over an explicit edge list on `cells` vertices.
    pub fn from_edges(cells: usize, edges: Vec<(u32, u32)>) -> Result<EnergyForm<'static>> {
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a == b || a as usize >= cells || b as usize >= cells)
        {
            return Err(Error::InvalidArgument(format!(
                "edge ({a}, {b}) is a loop or out of range for {cells} cells"
            )));
        }
        let mut offsets = vec![0usize; cells + 1];
        for &(a, b) in &edges {
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        }
        for i in 0..cells {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(a, b) in &edges {
            neighbors[fill[a as usize]] = b;
            fill[a as usize] += 1;
            neighbors[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        Ok(EnergyForm {
            cells,
            edges: Cow::Owned(edges),
            offsets: Cow::Owned(offsets),
            neighbors: Cow::Owned(neighbors),
        })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, cell: usize) -> &[u32] {
        &self.neighbors[self.offsets[cell]..self.offsets[cell + 1]]
    }

    pub fn degree(&self, cell: usize) -> usize {
        self.offsets[cell + 1] - self.offsets[cell]
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        self.bilinear(u, u)
    }

    /// `E(u, v) = Σ (u_a − u_b)(v_a − v_b)`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        assert_eq!(u.len(), self.cells);
        assert_eq!(v.len(), self.cells);
        sum_chunked(&self.edges, |&(a, b)| {
            let (a, b) = (a as usize, b as usize);
            (u[a] - u[b]) * (v[a] - v[b])
        })
    }

    /// Per-edge energies `(u_a − u_b)²`, in edge order.
    pub fn edge_energies(&self, u: &[f64]) -> Vec<f64> {
        self.edges
            .par_iter()
            .map(|&(a, b)| {
                let diff = u[a as usize] - u[b as usize];
                diff * diff
            })
            .collect()
    }

    /// `(Δu)_a = Σ_{b ~ a} (u_a − u_b)`.
    pub fn laplacian(&self, u: &[f64]) -> Vec<f64> {
        (0..self.cells)
            .into_par_iter()
            .map(|a| {
                self.neighbors(a)
                    .iter()
                    .map(|&b| u[a] - u[b as usize])
                    .sum()
            })
            .collect()
    }
}

/// Neumaier-compensated sum of `f` over `items`, in fixed-size blocks.
pub(crate) fn sum_chunked<T: Sync>(items: &[T], f: impl Fn(&T) -> f64 + Sync) -> f64 {
    let partials: Vec<f64> = items
        .par_chunks(CHUNK)
        .map(|chunk| neumaier(chunk.iter().map(&f)))
        .collect();
    neumaier(partials.into_iter())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partials.iter().sum()
}

pub(crate) fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
