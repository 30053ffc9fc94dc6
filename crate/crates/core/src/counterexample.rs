//! Carpets that satisfy all four axioms but violate the Barlow–Bass slab
//! condition.

use crate::error::{Error, Result};
use crate::spec::CarpetSpec;

/// `GSC(d, 2ld, S_{d,l})`, defined for `d ≥ 3` and `l ≥ 2`.
///
/// With side `L = 2ld`, the tuple `i` is kept unless, for some odd
/// `j ∈ {1, 3, …, 2l − 1}`, the set `{|2i_k − L + 1| : k}` equals
/// `{j, j + 2l, …, j + 2l(d − 1)}`.
pub fn gen_counterexample(d: usize, l_param: usize) -> Result<CarpetSpec> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "counterexample family needs d >= 3, got d = {d}"
        )));
    }
    if l_param < 2 {
        return Err(Error::InvalidArgument(format!(
            "counterexample family needs l >= 2, got l = {l_param}"
        )));
    }
    let side = 2 * l_param * d;
    let side_u32 = u32::try_from(side)
        .map_err(|_| Error::InvalidArgument(format!("side {side} is too large")))?;

    let excluded: Vec<Vec<u64>> = (1..2 * l_param)
        .step_by(2)
        .map(|j| {
            (0..d)
                .map(|t| (j + 2 * l_param * t) as u64)
                .collect()
        })
        .collect();

    let mut dist = Vec::with_capacity(d);
    CarpetSpec::from_predicate(d, side_u32, |i| {
        dist.clear();
        dist.extend(i.iter().map(|&x| (2 * x as i64 - side as i64 + 1).unsigned_abs()));
        dist.sort_unstable();
        dist.dedup();
        // `excluded` sets are sorted with d distinct entries
        !excluded.contains(&dist)
    })
}
