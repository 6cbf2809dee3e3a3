use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gen::{random_regular_pairs, rng_from_seed};
use crate::graph::Graph;

/// `G(n, d, l)`: a random `d`-regular graph on `n - 2 sqrt(n)` vertices, a disjoint
/// `K_{sqrt n, sqrt n}`, and `l` random edges between the two parts.
///
/// Vertices `0..n - 2 sqrt(n)` form the regular part; the bipartite sides follow.
pub fn planted_instance(n: usize, d: usize, l: usize, seed: u64) -> Result<Graph> {
    let s = (n as f64).sqrt().round() as usize;
    if s == 0 || s * s != n {
        return Err(Error::InvalidParameter(format!("n = {n} is not a perfect square")));
    }
    if n < 2 * s + d + 1 {
        return Err(Error::InvalidParameter(format!(
            "regular part has {} vertices, need at least d + 1 = {}",
            n.saturating_sub(2 * s),
            d + 1
        )));
    }
    let n1 = n - 2 * s;
    if !(n1 * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("(n - 2 sqrt n) * d = {} must be even", n1 * d)));
    }
    if l > n1 * 2 * s {
        return Err(Error::InvalidParameter(format!("at most {} cross edges exist", n1 * 2 * s)));
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs = random_regular_pairs(n1, d, &mut rng)?;
    for a in 0..s {
        for b in 0..s {
            pairs.push((n1 + a, n1 + s + b));
        }
    }
    let mut cross = HashSet::new();
    while cross.len() < l {
        let u = rng.random_range(0..n1);
        let v = n1 + rng.random_range(0..2 * s);
        if cross.insert((u, v)) {
            pairs.push((u, v));
        }
    }
    Graph::unweighted(n, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_counts() {
        let g = planted_instance(64, 4, 0, 1).unwrap();
        assert_eq!(g.num_edges(), 160);
        assert_eq!(g.components().len(), 2);
        let g = planted_instance(64, 4, 5, 1).unwrap();
        assert_eq!(g.m_total(), 165.0);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(planted_instance(63, 4, 0, 1).is_err());
        assert!(planted_instance(9, 4, 0, 1).is_err());
        assert!(planted_instance(16, 4, 0, 1).is_ok());
        assert!(planted_instance(16, 3, 0, 1).is_ok());
    }

    #[test]
    fn seed_deterministic() {
        assert_eq!(planted_instance(100, 4, 5, 3).unwrap(), planted_instance(100, 4, 5, 3).unwrap());
    }
}
