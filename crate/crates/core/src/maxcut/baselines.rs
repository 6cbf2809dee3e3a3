use super::{CutMethod, CutResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::eig_decompose;

/// Largest graph accepted by [`brute_force_cut`].
pub const BRUTE_FORCE_MAX_N: usize = 22;

/// Total weight of edges whose endpoints lie on different sides.
pub fn cut_value(g: &Graph, side: &[i8]) -> Result<f64> {
    if side.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: side.len(),
        });
    }
    if side.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidParameter("side entries must be +1 or -1".into()));
    }
    Ok(g.edges().iter().filter(|e| side[e.u] != side[e.v]).map(|e| e.w).sum())
}

/// Places vertices by descending weighted degree, each on the side that cuts
/// more weight towards the vertices already placed.
pub fn greedy_cut(g: &Graph) -> CutResult {
    let adj = g.neighbors();
    let deg = g.degrees();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| deg[b].total_cmp(&deg[a]).then(a.cmp(&b)));
    let mut side = vec![0i8; g.n()];
    for v in order {
        let (mut to_plus, mut to_minus) = (0.0, 0.0);
        for &(u, w) in &adj[v] {
            match side[u] {
                1 => to_plus += w,
                -1 => to_minus += w,
                _ => {}
            }
        }
        side[v] = if to_minus >= to_plus { 1 } else { -1 };
    }
    finish(g, side, CutMethod::Greedy)
}

/// Signs of the eigenvector of `lambda_n(W)`, then single-vertex moves while
/// any move strictly increases the cut.
pub fn sweep_cut(g: &Graph) -> CutResult {
    let eig = eig_decompose(&g.adjacency()).expect("adjacency matrices are finite");
    let v = eig.vector(eig.len() - 1);
    let mut side: Vec<i8> = v.iter().map(|&x| if x >= 0.0 { 1 } else { -1 }).collect();
    local_search(g, &mut side);
    finish(g, side, CutMethod::Sweep)
}

/// Best-improvement 1-opt; returns the number of moves made.
pub(crate) fn local_search(g: &Graph, side: &mut [i8]) -> usize {
    let adj = g.neighbors();
    let scale = g.m_total().max(1.0);
    let mut moves = 0;
    loop {
        let mut best = (0.0, usize::MAX);
        for v in 0..g.n() {
            // flipping v cuts its same-side edges and uncuts the others
            let gain: f64 = adj[v]
                .iter()
                .map(|&(u, w)| if side[u] == side[v] { w } else { -w })
                .sum();
            if gain > best.0 {
                best = (gain, v);
            }
        }
        if best.1 == usize::MAX || best.0 <= 1e-12 * scale {
            return moves;
        }
        side[best.1] = -side[best.1];
        moves += 1;
    }
}

/// Exact maximum cut by enumerating all `2^(n-1)` partitions in Gray-code order.
pub fn brute_force_cut(g: &Graph) -> Result<CutResult> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let adj = g.neighbors();
    let mut side = vec![1i8; n];
    let mut value = 0.0;
    let mut best = (0.0, side.clone());
    if n > 1 {
        // vertex n-1 stays on the +1 side
        for k in 1u64..(1u64 << (n - 1)) {
            let v = k.trailing_zeros() as usize;
            let delta: f64 = adj[v]
                .iter()
                .map(|&(u, w)| if side[u] == side[v] { w } else { -w })
                .sum();
            side[v] = -side[v];
            value += delta;
            if value > best.0 + 1e-12 {
                best = (value, side.clone());
            }
        }
    }
    Ok(finish(g, best.1, CutMethod::BruteForce))
}

fn finish(g: &Graph, side: Vec<i8>, method: CutMethod) -> CutResult {
    let value = cut_value(g, &side).expect("side vector has the graph's length");
    CutResult { side, value, method }
}
