//! Energy minimization with pinned values: Jacobi-preconditioned conjugate
//! gradients on the Laplacian restricted to the free cells.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::energy::{dot, EnergyForm};
use crate::error::{Error, Result};
use crate::graph::{face_cells, CellGraph};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct HarmonicSolution {
    #[serde(skip)]
    pub values: Vec<f64>,
    #[serde(skip)]
    pub boundary0: Vec<u32>,
    #[serde(skip)]
    pub boundary1: Vec<u32>,
    pub energy: f64,
    /// Max norm of the Laplacian on free cells.
    pub residual: f64,
    /// `‖b − Ax‖₂ / ‖b‖₂` of the reduced system.
    pub relative_residual: f64,
    pub iterations: usize,
    pub tolerance: f64,
}

impl HarmonicSolution {
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Iteration cap `⌈50 √free⌉`.
pub fn iteration_cap(free: usize) -> usize {
    (50.0 * (free as f64).sqrt()).ceil() as usize
}

/// Minimizes `E(u)` subject to `u = 0` on `zero` and `u = 1` on `one`.
pub fn solve_harmonic(form: &EnergyForm, zero: &[u32], one: &[u32], tol: f64) -> Result<HarmonicSolution> {
    solve_harmonic_from(form, zero, one, tol, None)
}

/// As [`solve_harmonic`], starting conjugate gradients from `guess`.
pub fn solve_harmonic_from(
    form: &EnergyForm,
    zero: &[u32],
    one: &[u32],
    tol: f64,
    guess: Option<&[f64]>,
) -> Result<HarmonicSolution> {
    let n = form.cells();
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if zero.is_empty() || one.is_empty() {
        return Err(Error::InvalidArgument("both boundary sets must be nonempty".into()));
    }
    if let Some(g) = guess {
        if g.len() != n {
            return Err(Error::InvalidArgument(format!(
                "initial guess has {} values for {n} cells",
                g.len()
            )));
        }
    }

    const FREE: u8 = 0;
    let mut pin = vec![FREE; n];
    for (set, tag) in [(zero, 1u8), (one, 2u8)] {
        for &c in set {
            let slot = pin.get_mut(c as usize).ok_or_else(|| {
                Error::InvalidArgument(format!("boundary cell {c} out of range for {n} cells"))
            })?;
            if *slot != FREE && *slot != tag {
                return Err(Error::InvalidArgument(format!("cell {c} is pinned to both 0 and 1")));
            }
            *slot = tag;
        }
    }
    check_reachable(form, &pin)?;

    let free: Vec<u32> = (0..n as u32).filter(|&c| pin[c as usize] == FREE).collect();
    let mut slot = vec![u32::MAX; n];
    for (k, &c) in free.iter().enumerate() {
        slot[c as usize] = k as u32;
    }

    // Reduced system A x = b with A = (D − W) on free cells.
    let mut offsets = Vec::with_capacity(free.len() + 1);
    offsets.push(0usize);
    let mut cols = Vec::new();
    let mut diag = Vec::with_capacity(free.len());
    let mut b = Vec::with_capacity(free.len());
    for &c in &free {
        let nbrs = form.neighbors(c as usize);
        diag.push(nbrs.len() as f64);
        let mut rhs = 0.0;
        for &nb in nbrs {
            match pin[nb as usize] {
                FREE => cols.push(slot[nb as usize]),
                2 => rhs += 1.0,
                _ => {}
            }
        }
        b.push(rhs);
        offsets.push(cols.len());
    }
    let apply = |x: &[f64], out: &mut [f64]| {
        out.par_iter_mut().enumerate().for_each(|(i, o)| {
            let off: f64 = cols[offsets[i]..offsets[i + 1]]
                .iter()
                .map(|&j| x[j as usize])
                .sum();
            *o = diag[i] * x[i] - off;
        });
    };

    let mut x: Vec<f64> = match guess {
        Some(g) => free.iter().map(|&c| g[c as usize]).collect(),
        None => vec![0.0; free.len()],
    };
    let bnorm = dot(&b, &b).sqrt();
    let mut iterations = 0;
    if !free.is_empty() && bnorm > 0.0 {
        let cap = iteration_cap(free.len());
        let mut r = vec![0.0; free.len()];
        apply(&x, &mut r);
        r.par_iter_mut().zip(&b).for_each(|(r, &bi)| *r = bi - *r);
        let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; free.len()];
        let mut rz = dot(&r, &z);
        let mut rel = dot(&r, &r).sqrt() / bnorm;
        let mut best = rel;
        while rel > tol {
            if iterations >= cap {
                return Err(Error::NoConvergence {
                    iterations,
                    best_residual: best,
                });
            }
            apply(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            x.par_iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
            r.par_iter_mut().zip(&ap).for_each(|(r, ap)| *r -= alpha * ap);
            z.par_iter_mut()
                .zip(&r)
                .zip(&diag)
                .for_each(|((z, r), d)| *z = r / d);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            p.par_iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
            iterations += 1;
            rel = dot(&r, &r).sqrt() / bnorm;
            best = best.min(rel);
        }
    }

    let mut values: Vec<f64> = pin.iter().map(|&t| if t == 2 { 1.0 } else { 0.0 }).collect();
    for (&c, &v) in free.iter().zip(&x) {
        values[c as usize] = v.clamp(0.0, 1.0);
    }
    let clamped: Vec<f64> = free.iter().map(|&c| values[c as usize]).collect();
    let mut ax = vec![0.0; free.len()];
    apply(&clamped, &mut ax);
    let true_r: Vec<f64> = ax.iter().zip(&b).map(|(a, b)| b - a).collect();
    let residual = true_r.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let relative_residual = if bnorm > 0.0 {
        dot(&true_r, &true_r).sqrt() / bnorm
    } else {
        0.0
    };

    let mut boundary0 = zero.to_vec();
    let mut boundary1 = one.to_vec();
    boundary0.sort_unstable();
    boundary0.dedup();
    boundary1.sort_unstable();
    boundary1.dedup();
    Ok(HarmonicSolution {
        energy: form.energy(&values),
        values,
        boundary0,
        boundary1,
        residual,
        relative_residual,
        iterations,
        tolerance: tol,
    })
}

/// Every free cell must reach some pinned cell.
fn check_reachable(form: &EnergyForm, pin: &[u8]) -> Result<()> {
    let mut seen: Vec<bool> = pin.iter().map(|&t| t != 0).collect();
    let mut queue: VecDeque<usize> = (0..pin.len()).filter(|&c| seen[c]).collect();
    while let Some(c) = queue.pop_front() {
        for &nb in form.neighbors(c) {
            if !seen[nb as usize] {
                seen[nb as usize] = true;
                queue.push_back(nb as usize);
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(cell) => Err(Error::IsolatedComponent { cell }),
        None => Ok(()),
    }
}

/// The face problem along `axis`: 0 on `{x_axis = 0}`, 1 on `{x_axis = 1}`.
/// Starts from the linear profile in `x_axis`.
pub fn solve_faces(graph: &CellGraph, axis: usize, tol: f64) -> Result<HarmonicSolution> {
    let zero = face_cells(graph, axis, 0)?;
    let one = face_cells(graph, axis, 1)?;
    let span = (graph.side() - 1) as f64;
    let guess: Vec<f64> = (0..graph.len())
        .map(|c| graph.origin_coord(c, axis) as f64 / span)
        .collect();
    solve_harmonic_from(&EnergyForm::new(graph), &zero.cells, &one.cells, tol, Some(&guess))
}

/// `1 / E(h)` for the harmonic `h`; infinite when the minimal energy is zero.
pub fn effective_resistance(form: &EnergyForm, zero: &[u32], one: &[u32], tol: f64) -> Result<f64> {
    let h = solve_harmonic(form, zero, one, tol)?;
    Ok(if h.energy > 0.0 { 1.0 / h.energy } else { f64::INFINITY })
}
