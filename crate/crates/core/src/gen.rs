//! Seeded random graph generators.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Identifier of the random number generator, recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Restarts of the pairing model before giving up.
pub const REGULAR_RETRY_CAP: usize = 1000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)`: each pair independently with probability `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("edge probability {p} must lie in (0, 1)")));
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    Graph::unweighted(n, pairs)
}

/// Uniform-ish random `d`-regular graph from the pairing model.
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    let mut rng = rng_from_seed(seed);
    let pairs = random_regular_pairs(n, d, &mut rng)?;
    Graph::unweighted(n, pairs)
}

/// Pairs up `d` copies of every vertex, rejecting any pair that would create a
/// loop or a repeated edge; restarts when no admissible pair can be found.
pub(crate) fn random_regular_pairs(n: usize, d: usize, rng: &mut impl Rng) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if d >= n {
        return Err(Error::InvalidParameter(format!("degree {d} must be below n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n * d = {} must be even", n * d)));
    }
    'restart: for _ in 0..REGULAR_RETRY_CAP {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen = HashSet::new();
        let mut pairs = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let len = points.len();
            let tries = 50 * len + 100;
            let mut accepted = false;
            for _ in 0..tries {
                let i = rng.random_range(0..len);
                let j = rng.random_range(0..len);
                let (u, v) = (points[i], points[j]);
                if i == j || u == v {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                if seen.contains(&key) {
                    continue;
                }
                seen.insert(key);
                pairs.push(key);
                points.swap_remove(i.max(j));
                points.swap_remove(i.min(j));
                accepted = true;
                break;
            }
            if !accepted {
                continue 'restart;
            }
        }
        return Ok(pairs);
    }
    Err(Error::Generator(format!(
        "no simple {d}-regular graph on {n} vertices after {REGULAR_RETRY_CAP} restarts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_graph_has_exact_degrees() {
        for seed in 0..5 {
            let g = gen_regular(50, 6, seed).unwrap();
            assert!(g.degrees().iter().all(|&d| d == 6.0));
            assert_eq!(g.num_edges(), 150);
        }
    }

    #[test]
    fn regular_rejects_bad_parameters() {
        assert!(gen_regular(5, 3, 0).is_err());
        assert!(gen_regular(4, 4, 0).is_err());
        assert_eq!(gen_regular(4, 0, 0).unwrap().num_edges(), 0);
    }

    #[test]
    fn er_is_seed_deterministic() {
        assert_eq!(gen_er(30, 0.3, 9).unwrap(), gen_er(30, 0.3, 9).unwrap());
        assert_ne!(gen_er(30, 0.3, 9).unwrap(), gen_er(30, 0.3, 10).unwrap());
        assert!(gen_er(10, 1.0, 0).is_err());
        assert!(gen_er(10, 0.0, 0).is_err());
    }

    #[test]
    fn near_complete_er_is_dense() {
        let g = gen_er(10, 0.999, 3).unwrap();
        assert!(g.num_edges() >= 43);
    }
}
