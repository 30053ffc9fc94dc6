//! Reference implementations used as oracles. They share no code with the
//! library beyond `CarpetSpec` accessors.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use gsc_core::CarpetSpec;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/v1")
}

pub fn fixture(spec: &CarpetSpec, name: &str) -> serde_json::Value {
    let path = fixture_dir().join(spec.hash()).join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Level-`n` cell origins, by expanding every word letter by letter.
pub fn origins(spec: &CarpetSpec, n: u32) -> Vec<Vec<u64>> {
    let letters: Vec<Vec<u32>> = spec.tuples().collect();
    let l = spec.l() as u64;
    let mut out = vec![vec![0u64; spec.d()]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for o in &out {
            for s in &letters {
                next.push(o.iter().zip(s).map(|(&x, &y)| x * l + y as u64).collect());
            }
        }
        out = next;
    }
    out
}

/// Face-adjacent pairs by scanning all pairs of origins.
pub fn brute_face_edges(cells: &[Vec<u64>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let diff: u64 = cells[a].iter().zip(&cells[b]).map(|(x, y)| x.abs_diff(*y)).sum();
            if diff == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Direct solve of the face problem along `axis`, by banded Cholesky on the
/// Laplacian of the free cells. Cells are ordered with the last coordinate
/// most significant; returns origins with their values and the energy.
pub struct DenseSolution {
    pub cells: Vec<Vec<u64>>,
    pub values: Vec<f64>,
    pub energy: f64,
}

pub fn dense_face_solve(spec: &CarpetSpec, n: u32, axis: usize) -> DenseSolution {
    let mut cells = origins(spec, n);
    cells.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let side = (spec.l() as u64).pow(n);
    let index: HashMap<&[u64], usize> = cells.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (a, c) in cells.iter().enumerate() {
        for k in 0..c.len() {
            let mut nb = c.clone();
            nb[k] += 1;
            if let Some(&b) = index.get(nb.as_slice()) {
                edges.push((a, b));
            }
        }
    }
    let pinned = |c: &Vec<u64>| -> Option<f64> {
        if c[axis] == 0 {
            Some(0.0)
        } else if c[axis] == side - 1 {
            Some(1.0)
        } else {
            None
        }
    };
    let free: Vec<usize> = (0..cells.len()).filter(|&i| pinned(&cells[i]).is_none()).collect();
    let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let m = free.len();
    let mut band = 0;
    for &(a, b) in &edges {
        if let (Some(&x), Some(&y)) = (pos.get(&a), pos.get(&b)) {
            band = band.max(x.abs_diff(y));
        }
    }
    // lower band storage: low[i][j - (i - band)] for i - band <= j <= i
    let w = band + 1;
    let mut low = vec![0.0f64; m * w];
    let at = |i: usize, j: usize| i * w + (j + band - i);
    let mut rhs = vec![0.0f64; m];
    for &(a, b) in &edges {
        for (p, q) in [(a, b), (b, a)] {
            if let Some(&x) = pos.get(&p) {
                low[at(x, x)] += 1.0;
                match pos.get(&q) {
                    Some(&y) if y < x => low[at(x, y)] -= 1.0,
                    Some(_) => {}
                    None => rhs[x] += pinned(&cells[q]).unwrap(),
                }
            }
        }
    }
    for i in 0..m {
        let lo = i.saturating_sub(band);
        for j in lo..=i {
            let mut s = low[at(i, j)];
            for k in lo.max(j.saturating_sub(band))..j {
                s -= low[at(i, k)] * low[at(j, k)];
            }
            low[at(i, j)] = if i == j { s.sqrt() } else { s / low[at(j, j)] };
        }
    }
    let mut y = rhs;
    for i in 0..m {
        let lo = i.saturating_sub(band);
        let s: f64 = (lo..i).map(|k| low[at(i, k)] * y[k]).sum();
        y[i] = (y[i] - s) / low[at(i, i)];
    }
    for i in (0..m).rev() {
        let hi = (i + band).min(m.saturating_sub(1));
        let s: f64 = (i + 1..=hi).map(|k| low[at(k, i)] * y[k]).sum();
        y[i] = (y[i] - s) / low[at(i, i)];
    }
    let mut values: Vec<f64> = cells.iter().map(|c| pinned(c).unwrap_or(0.0)).collect();
    for (k, &i) in free.iter().enumerate() {
        values[i] = y[k];
    }
    let energy = edges.iter().map(|&(a, b)| (values[a] - values[b]).powi(2)).sum();
    DenseSolution { cells, values, energy }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Expected steps of a simple random walk to reach `{x_1 = side − 1}`,
/// averaged over starts on `{x_1 = 0}`, by first-step analysis.
pub fn first_step_crossing(spec: &CarpetSpec, n: u32) -> f64 {
    let cells = origins(spec, n);
    let side = (spec.l() as u64).pow(n);
    let index: HashMap<&[u64], usize> = cells.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let nbrs: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            for k in 0..c.len() {
                for delta in [-1i64, 1] {
                    let mut nb = c.clone();
                    let v = nb[k] as i64 + delta;
                    if v < 0 {
                        continue;
                    }
                    nb[k] = v as u64;
                    if let Some(&b) = index.get(nb.as_slice()) {
                        out.push(b);
                    }
                }
            }
            out
        })
        .collect();
    let transient: Vec<usize> = (0..cells.len()).filter(|&i| cells[i][0] != side - 1).collect();
    let pos: HashMap<usize, usize> = transient.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let m = transient.len();
    let mut a = vec![vec![0.0; m]; m];
    for (k, &i) in transient.iter().enumerate() {
        a[k][k] = 1.0;
        for &j in &nbrs[i] {
            if let Some(&q) = pos.get(&j) {
                a[k][q] -= 1.0 / nbrs[i].len() as f64;
            }
        }
    }
    let t = gauss(a, vec![1.0; m]);
    let starts: Vec<f64> = (0..cells.len())
        .filter(|&i| cells[i][0] == 0)
        .map(|i| t[pos[&i]])
        .collect();
    starts.iter().sum::<f64>() / starts.len() as f64
}

/// Whether every pair of touching cells of `S` is joined by a path of
/// `|i − j|₁` unit steps inside `S`, trying every order of the steps.
pub fn brute_monotone_paths(spec: &CarpetSpec) -> bool {
    let cells: Vec<Vec<u32>> = spec.tuples().collect();
    for i in &cells {
        for j in &cells {
            if i == j || i.iter().zip(j).any(|(a, b)| a.abs_diff(*b) > 1) {
                continue;
            }
            let axes: Vec<usize> = (0..i.len()).filter(|&k| i[k] != j[k]).collect();
            let found = permutations(&axes).into_iter().any(|order| {
                let mut cur = i.clone();
                order.iter().all(|&k| {
                    cur[k] = j[k];
                    spec.contains(&cur)
                })
            });
            if !found {
                return false;
            }
        }
    }
    true
}

pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Block test at resolution `l^level`: for every block index `i` in
/// `{1, …, l^level − 1}^d`, the grid cubes of that resolution inside `Q_1`
/// with origins in `∏{i_k − 1, i_k}` must be facet-connected.
pub fn brute_blocks(spec: &CarpetSpec, level: u32) -> bool {
    let side = (spec.l() as u64).pow(level);
    let sub = side / spec.l() as u64;
    let in_q1 = |c: &[u64]| {
        let parent: Vec<u32> = c.iter().map(|&x| (x / sub) as u32).collect();
        spec.contains(&parent)
    };
    let d = spec.d();
    let mut index = vec![1u64; d];
    loop {
        let mut members = Vec::new();
        for corner in 0..(1u32 << d) {
            let c: Vec<u64> = (0..d).map(|k| index[k] - 1 + ((corner >> k) & 1) as u64).collect();
            if in_q1(&c) {
                members.push(c);
            }
        }
        if !members.is_empty() {
            let mut seen = vec![false; members.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(a) = queue.pop_front() {
                for b in 0..members.len() {
                    let diff: u64 = members[a].iter().zip(&members[b]).map(|(x, y)| x.abs_diff(*y)).sum();
                    if !seen[b] && diff == 1 {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return false;
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return true;
            }
            index[k] += 1;
            if index[k] < side {
                break;
            }
            index[k] = 1;
            k += 1;
        }
    }
}

/// Membership in the counterexample family, straight from the distance sets.
pub fn brute_counterexample_count(d: usize, lp: usize) -> usize {
    let side = 2 * lp * d;
    let targets: Vec<HashSet<i64>> = (1..2 * lp as i64)
        .step_by(2)
        .map(|j| (0..d as i64).map(|t| j + 2 * lp as i64 * t).collect())
        .collect();
    let mut count = 0;
    let total = side.pow(d as u32);
    for mut code in 0..total {
        let mut dist = HashSet::new();
        for _ in 0..d {
            let x = (code % side) as i64;
            code /= side;
            dist.insert((2 * x - side as i64 + 1).abs());
        }
        if !targets.contains(&dist) {
            count += 1;
        }
    }
    count
}
