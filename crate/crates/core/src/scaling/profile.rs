use serde::Serialize;

use crate::dirichlet::{neumaier, HarmonicSolution};
use crate::error::{Error, Result};
use crate::graph::{build_cell_graph, CellGraph};

/// Energy fractions at which the concentration curve is evaluated.
pub const PROFILE_QUANTILES: [f64; 3] = [0.5, 0.9, 0.99];

#[derive(Debug, Clone, Serialize)]
pub struct CellMass {
    pub origin: Vec<u64>,
    /// Share of the total energy.
    pub nu: f64,
    /// Self-similar measure, `(#S)^{-m}`.
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationPoint {
    pub q: f64,
    /// Fewest level-`m` cells whose energy shares add up to at least `q`.
    pub cells: usize,
    /// Their measure, `cells · (#S)^{-m}`.
    pub mass: f64,
    /// The same with the last cell taken fractionally.
    pub fractional_mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyProfile {
    pub spec_hash: String,
    pub level: u32,
    pub coarsen: u32,
    pub total_energy: f64,
    /// Level-`m` cells in graph order.
    pub masses: Vec<CellMass>,
    pub curve: Vec<ConcentrationPoint>,
}

/// Distributes the energy of `u` over the level-`m` ancestors of the cells of
/// `graph`. An edge inside one ancestor counts toward it in full; an edge
/// between two ancestors is split evenly.
pub fn energy_profile(graph: &CellGraph, u: &[f64], m: u32) -> Result<EnergyProfile> {
    let n = graph.level();
    if m >= n {
        return Err(Error::InvalidArgument(format!(
            "coarsening level {m} must be below the solution level {n}"
        )));
    }
    if u.len() != graph.len() {
        return Err(Error::InvalidArgument(format!(
            "function has {} values for {} cells",
            u.len(),
            graph.len()
        )));
    }
    let spec = graph.spec();
    let coarse = (m > 0).then(|| build_cell_graph(spec, m, u64::MAX)).transpose()?;
    let shrink = (spec.l() as u64).pow(n - m);
    let d = graph.d();
    let mut origin = vec![0u64; d];
    let ancestor: Vec<usize> = (0..graph.len())
        .map(|c| match &coarse {
            None => 0,
            Some(cg) => {
                graph.origin_into(c, &mut origin);
                origin.iter_mut().for_each(|o| *o /= shrink);
                cg.index_of(&origin).expect("ancestor of a cell is a cell")
            }
        })
        .collect();
    let count = coarse.as_ref().map_or(1, CellGraph::len);

    let mut parts: Vec<Vec<f64>> = vec![Vec::new(); count];
    for &(a, b) in graph.edges() {
        let e = (u[a as usize] - u[b as usize]).powi(2);
        let (pa, pb) = (ancestor[a as usize], ancestor[b as usize]);
        if pa == pb {
            parts[pa].push(e);
        } else {
            parts[pa].push(0.5 * e);
            parts[pb].push(0.5 * e);
        }
    }
    let raw: Vec<f64> = parts.into_iter().map(|p| neumaier(p.into_iter())).collect();
    let total = neumaier(raw.iter().copied());
    if total <= 0.0 {
        return Err(Error::EmptyProfile);
    }
    let mu = (spec.len() as f64).powi(-(m as i32));
    let masses: Vec<CellMass> = raw
        .iter()
        .enumerate()
        .map(|(k, &r)| CellMass {
            origin: coarse.as_ref().map_or_else(|| vec![0; d], |cg| cg.origin(k)),
            nu: r / total,
            mu,
        })
        .collect();
    let nus: Vec<f64> = masses.iter().map(|c| c.nu).collect();
    let curve = PROFILE_QUANTILES
        .iter()
        .map(|&q| concentration(&nus, q, mu))
        .collect();
    Ok(EnergyProfile {
        spec_hash: spec.hash(),
        level: n,
        coarsen: m,
        total_energy: total,
        masses,
        curve,
    })
}

/// [`energy_profile`] of a solution on its own graph.
pub fn solution_profile(graph: &CellGraph, solution: &HarmonicSolution, m: u32) -> Result<EnergyProfile> {
    energy_profile(graph, &solution.values, m)
}

/// Smallest number of cells, taken in decreasing share, carrying `q` of the energy.
pub fn concentration(nu: &[f64], q: f64, mu: f64) -> ConcentrationPoint {
    let mut sorted = nu.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        if cum + v >= q {
            let part = if v > 0.0 { (q - cum) / v } else { 0.0 };
            return ConcentrationPoint {
                q,
                cells: k + 1,
                mass: (k + 1) as f64 * mu,
                fractional_mass: (k as f64 + part) * mu,
            };
        }
        cum += v;
    }
    ConcentrationPoint {
        q,
        cells: sorted.len(),
        mass: sorted.len() as f64 * mu,
        fractional_mass: sorted.len() as f64 * mu,
    }
}
