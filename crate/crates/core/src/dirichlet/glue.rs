//! Orbit averaging and the self-similar assembly of a face solution.

use crate::error::{Error, Result};
use crate::graph::{apply_symmetry_to_graph, face_cells, CellGraph};
use crate::symmetry::{first_axis_reflections, CubeSymmetry};

/// Clamps `u` to `[0, 1]` and averages it over the orbits of `subgroup`.
///
/// Each orbit is summed in increasing cell order, so every member of an orbit
/// receives the same bits and the output is exactly invariant.
pub fn symmetrize(graph: &CellGraph, u: &[f64], subgroup: &[CubeSymmetry]) -> Result<Vec<f64>> {
    if u.len() != graph.len() {
        return Err(Error::InvalidArgument(format!(
            "function has {} values for {} cells",
            u.len(),
            graph.len()
        )));
    }
    let perms = subgroup
        .iter()
        .map(|g| apply_symmetry_to_graph(graph, g))
        .collect::<Result<Vec<_>>>()?;
    let clamped: Vec<f64> = u.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let mut out = vec![0.0; u.len()];
    let mut done = vec![false; u.len()];
    let mut orbit = Vec::new();
    for c in 0..u.len() {
        if done[c] {
            continue;
        }
        orbit.clear();
        orbit.push(c as u32);
        done[c] = true;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k] as usize;
            for p in &perms {
                let y = p[x];
                if !done[y as usize] {
                    done[y as usize] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        let mean = orbit.iter().map(|&x| clamped[x as usize]).sum::<f64>() / orbit.len() as f64;
        for &x in &orbit {
            out[x as usize] = mean;
        }
    }
    Ok(out)
}

/// Largest `|u(g·c) − u(c)|` over the reflections fixing the first axis.
pub fn first_axis_deviation(graph: &CellGraph, u: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for g in first_axis_reflections(graph.d()) {
        let p = apply_symmetry_to_graph(graph, &g)?;
        for (c, &img) in p.iter().enumerate() {
            worst = worst.max((u[img as usize] - u[c]).abs());
        }
    }
    Ok(worst)
}

/// Assembles `h_m` on `outer` from a symmetrized first-axis solution `h0` on
/// `inner`: the cell `w·v` gets `(h0(v) + origin_1(w)) / l^m`.
pub fn glue_hm(h0: &[f64], inner: &CellGraph, outer: &CellGraph) -> Result<Vec<f64>> {
    if inner.spec() != outer.spec() || outer.level() < inner.level() {
        return Err(Error::InvalidArgument(format!(
            "cannot glue level {} into level {}",
            inner.level(),
            outer.level()
        )));
    }
    if h0.len() != inner.len() {
        return Err(Error::InvalidArgument(format!(
            "h0 has {} values for {} cells",
            h0.len(),
            inner.len()
        )));
    }
    for (side, want) in [(0u8, 0.0), (1, 1.0)] {
        let face = face_cells(inner, 0, side)?;
        if let Some(&c) = face.cells.iter().find(|&&c| h0[c as usize] != want) {
            return Err(Error::InvalidArgument(format!(
                "h0 is {} at {:?} on face x_1 = {side}, expected {want}",
                h0[c as usize],
                inner.origin(c as usize)
            )));
        }
    }
    for g in first_axis_reflections(inner.d()) {
        let p = apply_symmetry_to_graph(inner, &g)?;
        if let Some(c) = (0..inner.len()).find(|&c| h0[p[c] as usize] != h0[c]) {
            return Err(Error::InvalidArgument(format!(
                "h0 is not invariant under {g} at {:?}",
                inner.origin(c)
            )));
        }
    }

    let scale = (inner.spec().l() as f64).powi((outer.level() - inner.level()) as i32);
    let side = inner.side();
    let mut origin = vec![0u64; outer.d()];
    let mut local = vec![0u64; outer.d()];
    (0..outer.len())
        .map(|c| {
            outer.origin_into(c, &mut origin);
            for (v, &o) in local.iter_mut().zip(&origin) {
                *v = o % side;
            }
            let v = inner.index_of(&local).ok_or_else(|| {
                Error::InvalidArgument(format!("cell {origin:?} has no inner preimage"))
            })?;
            Ok((h0[v] + (origin[0] / side) as f64) / scale)
        })
        .collect()
}
