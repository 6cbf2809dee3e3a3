//! The linear relaxation `L_S` of an SDP, its solver backend and the cutting-plane loop.

mod cutset;
mod cutting;
mod instance;
mod model;
mod reference;
mod solver;

pub use cutset::{CutSet, Provenance, DUPLICATE_TOL};
pub use cutting::{cutting_plane, cutting_plane_with, CuttingPlaneOptions, CuttingPlaneOutcome, TracePoint};
pub use instance::{Bound, EntryTerm, LinearExpr, LinearRow, SdpInstance, Sense, SocRow};
pub use model::{build_ls, cut_tag, entry_index, num_entries, ConeRow, ModelRow, RelaxationModel};
pub use reference::{
    build_sdp_model, dual_slack_from_duals, optimal_cutset_check, reference_sdp, reference_sdp_with,
    ReferenceMethod, ReferenceOptions,
};
pub use solver::{
    solve, ClarabelBackend, KktMethod, LinearOnly, LpBackend, SolveReport, SolveStatus, SolverOptions, FEAS_TOL,
    OPT_TOL, PSD_TOL,
};

#[cfg(test)]
mod tests {
    use nalgebra::DVector;

    use super::*;
    use crate::graph::Graph;
    use crate::maxcut::{gw_instance, gw_value};

    const C5_VALUE: f64 = 4.522542485937369;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn empty_cut_set_gives_constraint_and_box_rows() {
        let m = build_ls(&gw_instance(&Graph::complete(2)), &CutSet::new()).unwrap();
        let tags: Vec<_> = m.rows().iter().map(|r| r.tag.as_str()).collect();
        assert_eq!(tags, vec!["diag:1", "diag:2", "box:(1,2)"]);
    }

    #[test]
    fn cut_row_expands_quadratic_form() {
        let mut s = CutSet::new();
        s.insert(DVector::from_vec(vec![1.0, 1.0]), Provenance::User).unwrap();
        let m = build_ls(&gw_instance(&Graph::complete(2)), &s).unwrap();
        let row = m.row("cut:v1").unwrap();
        assert_eq!(row.bound, Bound::Ge(0.0));
        let want = [(m.entry_var(0, 0), 0.5), (m.entry_var(0, 1), 1.0), (m.entry_var(1, 1), 0.5)];
        assert_eq!(row.coeffs.len(), 3);
        for ((v, c), (wv, wc)) in row.coeffs.iter().zip(want) {
            assert_eq!(*v, wv);
            assert!((c - wc).abs() < 1e-15);
        }
    }

    #[test]
    fn solves_trivial_lp() {
        let mut m = RelaxationModel::new(1, vec![], Sense::Maximize);
        m.set_objective_coef(0, 1.0);
        m.add_row("ub", vec![(0, 1.0)], Bound::Le(1.0)).unwrap();
        let r = solve(&m, &opts()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 1.0).abs() < 1e-8);
        assert!((r.dual("ub").unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn reports_unbounded_and_infeasible() {
        let mut m = RelaxationModel::new(1, vec![], Sense::Maximize);
        m.set_objective_coef(0, 1.0);
        m.add_row("lb", vec![(0, 1.0)], Bound::Ge(0.0)).unwrap();
        assert_eq!(solve(&m, &opts()).unwrap().status, SolveStatus::Unbounded);
        m.add_row("ub", vec![(0, 1.0)], Bound::Le(-1.0)).unwrap();
        assert_eq!(solve(&m, &opts()).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn minimization_duals_have_minimization_sign() {
        let mut m = RelaxationModel::new(1, vec![], Sense::Minimize);
        m.set_objective_coef(0, 2.0);
        m.add_row("lb", vec![(0, 1.0)], Bound::Ge(3.0)).unwrap();
        let r = solve(&m, &opts()).unwrap();
        assert!((r.objective - 6.0).abs() < 1e-7);
        assert!((r.dual("lb").unwrap() - 2.0).abs() < 1e-7);
    }

    #[test]
    fn large_costs_scale_objective_and_duals() {
        let mut m = RelaxationModel::new(2, vec![], Sense::Maximize);
        m.set_objective_coef(0, 3e4);
        m.set_objective_coef(1, 1e4);
        m.add_row("sum", vec![(0, 1.0), (1, 1.0)], Bound::Le(1.0)).unwrap();
        m.add_row("lb", vec![(1, 1.0)], Bound::Ge(0.0)).unwrap();
        let r = solve(&m, &opts()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 3e4).abs() < 1e-3);
        assert!((r.dual("sum").unwrap() - 3e4).abs() < 1e-3);
        assert!((r.dual("lb").unwrap() + 2e4).abs() < 1e-3);
    }

    #[test]
    fn k2_and_c5_with_eigen_cuts() {
        let k2 = Graph::complete(2);
        let s = CutSet::eigenbasis(&k2.adjacency()).unwrap();
        let r = solve(&build_ls(&gw_instance(&k2), &s).unwrap(), &opts()).unwrap();
        assert!((r.objective - 2.0).abs() < 1e-7);
        assert!((gw_value(&k2, r.objective) - 1.0).abs() < 1e-7);

        let c5 = Graph::cycle(5).unwrap();
        let s = CutSet::eigenbasis(&c5.adjacency()).unwrap();
        let r = solve(&build_ls(&gw_instance(&c5), &s).unwrap(), &opts()).unwrap();
        assert!(r.objective <= 5.0 * 2.0 * (std::f64::consts::PI / 5.0).cos() + 1e-6);
        assert!((gw_value(&c5, r.objective) - C5_VALUE).abs() < 1e-5);
    }

    #[test]
    fn cut_rows_hold_and_duals_are_complementary() {
        let g = Graph::petersen();
        let s = CutSet::eigenbasis(&g.adjacency()).unwrap();
        let m = build_ls(&gw_instance(&g), &s).unwrap();
        let r = solve(&m, &opts()).unwrap();
        let x = r.primal_x.as_ref().unwrap();
        for k in 0..s.len() {
            let slack = x.quad_form(s.vector(k));
            let y = r.dual(&cut_tag(k)).unwrap();
            assert!(slack >= -FEAS_TOL);
            assert!(y <= 1e-7, "a >= row of a max problem has a nonpositive dual");
            assert!((slack * y).abs() < 1e-6);
        }
    }

    #[test]
    fn cutting_plane_stops_when_already_psd() {
        let k2 = Graph::complete(2);
        let s = CutSet::eigenbasis(&k2.adjacency()).unwrap();
        let out = cutting_plane(&gw_instance(&k2), &s, &CuttingPlaneOptions::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.trace.len(), 1);
    }

    #[test]
    fn cutting_plane_solves_k2_from_scratch() {
        let k2 = Graph::complete(2);
        let out = cutting_plane(&gw_instance(&k2), &CutSet::new(), &CuttingPlaneOptions::default()).unwrap();
        assert!(out.converged);
        assert!((out.report.objective - 2.0).abs() < 1e-6);
        for w in out.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-7);
        }
    }

    #[test]
    fn cutting_plane_budget_exhaustion_is_iteration_limit() {
        let g = Graph::petersen();
        let cp = CuttingPlaneOptions {
            budget: 1,
            ..Default::default()
        };
        let out = cutting_plane(&gw_instance(&g), &CutSet::new(), &cp).unwrap();
        assert_eq!(out.report.status, SolveStatus::IterationLimit);
        assert_eq!(out.cuts.len(), 1);
        assert_eq!(out.trace.len(), 2);
    }

    #[test]
    fn reference_values_of_petersen_and_c5() {
        let p = Graph::petersen();
        let r = reference_sdp(&gw_instance(&p), &ReferenceOptions::default()).unwrap();
        assert!(r.is_optimal());
        assert!((gw_value(&p, r.objective) - 12.5).abs() < 1e-4);
        let c5 = Graph::cycle(5).unwrap();
        let r = reference_sdp(&gw_instance(&c5), &ReferenceOptions::default()).unwrap();
        assert!((gw_value(&c5, r.objective) - C5_VALUE).abs() < 1e-4);
    }

    #[test]
    fn cutting_plane_reference_agrees_with_conic() {
        let c5 = Graph::cycle(5).unwrap();
        let cp = ReferenceOptions {
            method: ReferenceMethod::CuttingPlane,
            ..Default::default()
        };
        let r = reference_sdp(&gw_instance(&c5), &cp).unwrap();
        assert!(r.is_optimal());
        assert!((gw_value(&c5, r.objective) - C5_VALUE).abs() < 1e-4);
    }

    #[test]
    fn row_duals_reproduce_cone_dual() {
        let g = Graph::cycle(7).unwrap();
        let inst = gw_instance(&g);
        let r = reference_sdp(&inst, &ReferenceOptions::default()).unwrap();
        let from_rows = dual_slack_from_duals(&inst, &r).unwrap();
        let cone = r.dual_slack.as_ref().unwrap();
        assert!(from_rows.sub(cone).max_abs() < 1e-6);
    }

    #[test]
    fn optimal_cut_set_matches_reference() {
        for g in [Graph::complete(2), Graph::cycle(5).unwrap()] {
            let inst = gw_instance(&g);
            let r = reference_sdp(&inst, &ReferenceOptions::default()).unwrap();
            let gap = optimal_cutset_check(&inst, &r, &opts()).unwrap();
            assert!(gap <= 1e-4 * r.objective.abs().max(1.0), "gap {gap}");
        }
    }

    #[test]
    fn cones_need_a_cone_capable_backend() {
        let mut m = RelaxationModel::new(2, vec![], Sense::Maximize);
        m.add_cone("soc", vec![(0, 1.0)], vec![vec![(1, 1.0)]]).unwrap();
        let err = LinearOnly(ClarabelBackend).solve(&m, &opts()).unwrap_err();
        assert!(matches!(err, crate::Error::ConeUnsupported(_)));
    }
}
