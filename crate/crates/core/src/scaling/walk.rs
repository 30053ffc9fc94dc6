use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dirichlet::neumaier;
use crate::error::{Error, Result};
use crate::graph::{build_cell_graph, face_cells, CellGraph};
use crate::spec::CarpetSpec;

/// Per-walk step guard.
pub const STEP_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct WalkStats {
    pub spec_hash: String,
    pub level: u32,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub max_steps: u64,
}

/// The generator for one trial: stream `trial` of the ChaCha8 key derived
/// from `seed`. Trials are independent of evaluation order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Steps of a simple random walk from `start` until it first enters a cell
/// with `target[c]` set.
pub fn crossing_steps(
    graph: &CellGraph,
    target: &[bool],
    start: usize,
    rng: &mut ChaCha8Rng,
    limit: u64,
) -> Option<u64> {
    let mut cell = start;
    let mut steps = 0u64;
    while !target[cell] {
        if steps == limit {
            return None;
        }
        let nbrs = graph.neighbors(cell);
        cell = nbrs[rng.random_range(0..nbrs.len())] as usize;
        steps += 1;
    }
    Some(steps)
}

/// Mean first-axis crossing time of simple random walks at level `n`: start
/// uniform on `{x_1 = 0}`, absorbed on `{x_1 = 1}`.
pub fn random_walk_crossing(spec: &CarpetSpec, n: u32, trials: u64, seed: u64, budget: u64) -> Result<WalkStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let graph = build_cell_graph(spec, n, budget)?;
    let starts = face_cells(&graph, 0, 0)?.cells;
    let mut target = vec![false; graph.len()];
    for c in face_cells(&graph, 0, 1)?.cells {
        target[c as usize] = true;
    }
    let steps: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let start = starts[rng.random_range(0..starts.len())] as usize;
            crossing_steps(&graph, &target, start, &mut rng, STEP_LIMIT)
                .ok_or(Error::WalkLimit { trial: t, limit: STEP_LIMIT })
        })
        .collect::<Result<_>>()?;

    let count = trials as f64;
    let mean = neumaier(steps.iter().map(|&s| s as f64)) / count;
    let var = if trials > 1 {
        neumaier(steps.iter().map(|&s| (s as f64 - mean).powi(2))) / (count - 1.0)
    } else {
        0.0
    };
    Ok(WalkStats {
        spec_hash: spec.hash(),
        level: n,
        trials,
        seed,
        mean,
        std_dev: var.sqrt(),
        std_error: (var / count).sqrt(),
        max_steps: steps.iter().copied().max().unwrap_or(0),
    })
}

/// `log_l(T_{n+1} / T_n)` with a first-order standard error.
pub fn walk_dimension(coarse: &WalkStats, fine: &WalkStats, l: u32) -> (f64, f64) {
    let ln_l = (l as f64).ln();
    let dw = (fine.mean / coarse.mean).ln() / ln_l;
    let rel = ((coarse.std_error / coarse.mean).powi(2) + (fine.std_error / fine.mean).powi(2)).sqrt();
    (dw, rel / ln_l)
}
