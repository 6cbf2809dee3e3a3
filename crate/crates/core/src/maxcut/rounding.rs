use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use super::{cut_value, solve_sd, CutMethod, CutResult};
use crate::engine::{CutSet, Provenance, SolveReport, SolverOptions};
use crate::error::{Error, Result};
use crate::gen::rng_from_seed;
use crate::graph::Graph;
use crate::linalg::{eig_decompose, psd_factor, SymMatrix};

/// Tolerance on PSD-ness and the unit diagonal accepted by [`gw_round`].
pub const ROUNDING_TOL: f64 = 1e-7;

/// GW-feasible matrix from an `SP_S` optimum: solve `SD` over the positive
/// eigenvectors of `X` and the standard basis, then raise the diagonal to one
/// with `e_i e_i^T` terms.
pub fn rounding_matrix(g: &Graph, sp_report: &SolveReport, opts: &SolverOptions) -> Result<SymMatrix> {
    let x = sp_report
        .primal_x
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("report carries no primal matrix".into()))?;
    if x.dim() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: x.dim(),
        });
    }
    let eig = eig_decompose(x)?;
    let cutoff = 1e-9 * eig.max_value().abs().max(1.0);
    let mut s = CutSet::new();
    for i in 0..eig.len() {
        if eig.values[i] > cutoff {
            s.insert(eig.vector(i), Provenance::Eigen)?;
        }
    }
    s.extend_from(&CutSet::standard_basis(g.n()))?;
    let sd = solve_sd(g, &s, opts)?;
    Ok(unit_diagonal(sd.y))
}

/// Adds `(1 - Y_ii) e_i e_i^T` where the diagonal falls short, then rescales
/// so every diagonal entry is exactly one. Both steps keep `Y` PSD.
pub fn unit_diagonal(mut y: SymMatrix) -> SymMatrix {
    let n = y.dim();
    for i in 0..n {
        if y.get(i, i) < 1.0 {
            y.set(i, i, 1.0);
        }
    }
    let d: Vec<f64> = (0..n).map(|i| y.get(i, i).sqrt()).collect();
    SymMatrix::from_upper_fn(n, |i, j| if i == j { 1.0 } else { y.get(i, j) / (d[i] * d[j]) })
}

/// Hyperplane rounding: factor `Y = B^T B`, draw `trials` Gaussian directions
/// and keep the best cut. Deterministic for a fixed seed.
pub fn gw_round(g: &Graph, y: &SymMatrix, trials: usize, seed: u64) -> Result<CutResult> {
    let n = g.n();
    if y.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.dim() });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one rounding trial is required".into()));
    }
    if let Some(i) = (0..n).find(|&i| (y.get(i, i) - 1.0).abs() > ROUNDING_TOL) {
        return Err(Error::InvalidMatrix(format!(
            "rounding matrix has diagonal entry {} at {i}",
            y.get(i, i)
        )));
    }
    let lam = eig_decompose(y)?.min_value();
    if lam < -ROUNDING_TOL {
        return Err(Error::InvalidMatrix(format!("rounding matrix is not PSD (lambda_min = {lam:e})")));
    }
    let b = psd_factor(y)?;
    let mut rng = rng_from_seed(seed);
    let mut best: Option<CutResult> = None;
    for _ in 0..trials {
        let r = DVector::from_iterator(b.nrows(), (0..b.nrows()).map(|_| StandardNormal.sample(&mut rng)));
        let proj = b.tr_mul(&r);
        let side: Vec<i8> = proj.iter().map(|&p: &f64| if p >= 0.0 { 1 } else { -1 }).collect();
        let value = cut_value(g, &side)?;
        if best.as_ref().is_none_or(|c| value > c.value) {
            best = Some(CutResult {
                side,
                value,
                method: CutMethod::GwRound,
            });
        }
    }
    Ok(best.expect("trials >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_embedding_cuts_k2() {
        let g = Graph::complete(2);
        let y = SymMatrix::from_row_slice(2, &[1.0, -1.0, -1.0, 1.0]).unwrap();
        for seed in 0..20 {
            assert_eq!(gw_round(&g, &y, 1, seed).unwrap().value, 1.0);
        }
    }

    #[test]
    fn rejects_non_gw_matrices() {
        let g = Graph::complete(2);
        let bad_diag = SymMatrix::from_row_slice(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(gw_round(&g, &bad_diag, 1, 0).is_err());
        let indefinite = SymMatrix::from_row_slice(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(gw_round(&g, &indefinite, 1, 0).is_err());
    }

    #[test]
    fn rounding_is_seed_deterministic() {
        let g = Graph::petersen();
        let y = SymMatrix::identity(10);
        assert_eq!(gw_round(&g, &y, 5, 11).unwrap(), gw_round(&g, &y, 5, 11).unwrap());
    }

    #[test]
    fn unit_diagonal_lifts_and_keeps_psd() {
        let y = SymMatrix::from_row_slice(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let z = unit_diagonal(y);
        assert_eq!(z.diagonal(), vec![1.0, 1.0]);
        assert!((z.get(0, 1) - 0.5).abs() < 1e-15);
        assert!(eig_decompose(&z).unwrap().min_value() > -1e-12);
    }
}
