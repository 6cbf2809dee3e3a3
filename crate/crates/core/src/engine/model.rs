use std::collections::HashMap;

use super::cutset::CutSet;
use super::instance::{Bound, LinearExpr, SdpInstance, Sense};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Number of distinct entries of a symmetric `n x n` matrix.
pub fn num_entries(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Variable index of entry `(i, j)` in the row-major upper-triangle layout.
pub fn entry_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * n + 1 - i) / 2 + (j - i)
}

/// A linear row of the model over variable indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelRow {
    pub tag: String,
    pub coeffs: Vec<(usize, f64)>,
    pub bound: Bound,
}

/// `|| (c_1.x, ..., c_k.x) ||_2 <= t.x`
#[derive(Clone, Debug, PartialEq)]
pub struct ConeRow {
    pub tag: String,
    pub bound: Vec<(usize, f64)>,
    pub components: Vec<Vec<(usize, f64)>>,
}

/// A solver-agnostic LP/SOCP.
///
/// Variables are the `n(n+1)/2` distinct entries of a symmetric matrix (possibly
/// `n = 0`) followed by named auxiliary variables. Rows carry unique tags.
#[derive(Clone, Debug)]
pub struct RelaxationModel {
    matrix_dim: usize,
    aux_names: Vec<String>,
    sense: Sense,
    objective: Vec<f64>,
    rows: Vec<ModelRow>,
    cones: Vec<ConeRow>,
    index: HashMap<String, usize>,
    psd: bool,
}

impl RelaxationModel {
    pub fn new(matrix_dim: usize, aux_names: Vec<String>, sense: Sense) -> Self {
        let nv = num_entries(matrix_dim) + aux_names.len();
        Self {
            matrix_dim,
            aux_names,
            sense,
            objective: vec![0.0; nv],
            rows: Vec::new(),
            cones: Vec::new(),
            index: HashMap::new(),
            psd: false,
        }
    }

    /// Whether the matrix variables are additionally constrained to the PSD cone.
    pub fn psd(&self) -> bool {
        self.psd
    }

    /// Puts the matrix variables in the PSD cone, turning the model into an exact SDP.
    pub fn set_psd(&mut self, on: bool) {
        self.psd = on;
    }

    pub fn matrix_dim(&self) -> usize {
        self.matrix_dim
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_entry_vars(&self) -> usize {
        num_entries(self.matrix_dim)
    }

    pub fn aux_names(&self) -> &[String] {
        &self.aux_names
    }

    pub fn entry_var(&self, i: usize, j: usize) -> usize {
        entry_index(self.matrix_dim, i, j)
    }

    pub fn aux_var(&self, k: usize) -> usize {
        self.num_entry_vars() + k
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn set_objective_coef(&mut self, var: usize, coef: f64) {
        self.objective[var] = coef;
    }

    pub fn rows(&self) -> &[ModelRow] {
        &self.rows
    }

    pub fn cones(&self) -> &[ConeRow] {
        &self.cones
    }

    pub fn row(&self, tag: &str) -> Option<&ModelRow> {
        self.index.get(tag).map(|&k| &self.rows[k])
    }

    /// Translates an expression over entries/auxiliaries into merged variable coefficients.
    pub fn lower(&self, expr: &LinearExpr) -> Vec<(usize, f64)> {
        let mut c: Vec<(usize, f64)> = expr
            .entries
            .iter()
            .map(|t| (self.entry_var(t.i, t.j), t.coef))
            .chain(expr.aux.iter().map(|&(k, v)| (self.aux_var(k), v)))
            .collect();
        merge(&mut c);
        c
    }

    pub fn add_row(&mut self, tag: impl Into<String>, mut coeffs: Vec<(usize, f64)>, bound: Bound) -> Result<usize> {
        let tag = tag.into();
        if self.index.contains_key(&tag) || self.cones.iter().any(|c| c.tag == tag) {
            return Err(Error::InvalidParameter(format!("duplicate row tag `{tag}`")));
        }
        if let Some(&(v, _)) = coeffs.iter().find(|(v, _)| *v >= self.num_vars()) {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: v + 1,
            });
        }
        merge(&mut coeffs);
        self.index.insert(tag.clone(), self.rows.len());
        self.rows.push(ModelRow { tag, coeffs, bound });
        Ok(self.rows.len() - 1)
    }

    pub fn add_cone(&mut self, tag: impl Into<String>, bound: Vec<(usize, f64)>, components: Vec<Vec<(usize, f64)>>) -> Result<()> {
        let tag = tag.into();
        if self.index.contains_key(&tag) || self.cones.iter().any(|c| c.tag == tag) {
            return Err(Error::InvalidParameter(format!("duplicate row tag `{tag}`")));
        }
        let nv = self.num_vars();
        for &(v, _) in bound.iter().chain(components.iter().flatten()) {
            if v >= nv {
                return Err(Error::DimensionMismatch { expected: nv, found: v + 1 });
            }
        }
        self.cones.push(ConeRow { tag, bound, components });
        Ok(())
    }

    pub fn evaluate_objective(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest bound or cone violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .rows
            .iter()
            .map(|r| r.bound.violation(dot_sparse(&r.coeffs, x)));
        let cones = self.cones.iter().map(|c| {
            let t = dot_sparse(&c.bound, x);
            let norm = c
                .components
                .iter()
                .map(|k| dot_sparse(k, x).powi(2))
                .sum::<f64>()
                .sqrt();
            (norm - t).max(0.0)
        });
        rows.chain(cones).fold(0.0, f64::max)
    }

    /// The symmetric matrix stored in the entry variables of `x`.
    pub fn unpack_matrix(&self, x: &[f64]) -> Option<SymMatrix> {
        let n = self.matrix_dim;
        if n == 0 {
            return None;
        }
        Some(SymMatrix::from_upper_fn(n, |i, j| x[entry_index(n, i, j)]))
    }

    pub fn unpack_aux(&self, x: &[f64]) -> Vec<f64> {
        x[self.num_entry_vars()..].to_vec()
    }
}

/// Tag of the cut row for the `k`-th vector of a cut set (1-based in the tag).
pub fn cut_tag(k: usize) -> String {
    format!("cut:v{}", k + 1)
}

/// Builds the linear relaxation `L_S`: every row of `inst`, PSD-ness replaced by
/// `v^T X v >= 0` for each `v` in `cuts`.
pub fn build_ls(inst: &SdpInstance, cuts: &CutSet) -> Result<RelaxationModel> {
    inst.validate()?;
    let n = inst.dim();
    if let Some(d) = cuts.dim() {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, found: d });
        }
    }
    let mut model = RelaxationModel::new(n, inst.aux_names.clone(), inst.sense);
    let obj = LinearExpr::from_matrix(&inst.objective);
    for (v, c) in model.lower(&obj) {
        model.objective[v] = c;
    }
    for (k, &c) in inst.aux_objective.iter().enumerate() {
        let v = model.aux_var(k);
        model.objective[v] = c;
    }
    for row in inst.constraints.iter().chain(&inst.extra_linear) {
        let coeffs = model.lower(&row.expr);
        model.add_row(row.tag.clone(), coeffs, row.bound)?;
    }
    for k in 0..inst.aux_names.len() {
        let v = model.aux_var(k);
        model.add_row(format!("nonneg:{}", inst.aux_names[k]), vec![(v, 1.0)], Bound::Ge(0.0))?;
    }
    for (k, (v, _)) in cuts.iter().enumerate() {
        let coeffs = model.lower(&LinearExpr::quadratic_form(v.as_slice()));
        model.add_row(cut_tag(k), coeffs, Bound::Ge(0.0))?;
    }
    for cone in &inst.extra_socp {
        let bound = model.lower(&cone.bound);
        let comps = cone.components.iter().map(|c| model.lower(c)).collect();
        model.add_cone(cone.tag.clone(), bound, comps)?;
    }
    Ok(model)
}

fn merge(c: &mut Vec<(usize, f64)>) {
    c.sort_by_key(|&(v, _)| v);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(c.len());
    for &(v, a) in c.iter() {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += a,
            _ => out.push((v, a)),
        }
    }
    out.retain(|&(_, a)| a != 0.0);
    *c = out;
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_sparse(c: &[(usize, f64)], x: &[f64]) -> f64 {
    c.iter().map(|&(v, a)| a * x[v]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_layout_is_dense_upper_triangle() {
        let n = 5;
        let mut seen = vec![false; num_entries(n)];
        let mut next = 0;
        for i in 0..n {
            for j in i..n {
                let k = entry_index(n, i, j);
                assert_eq!(k, next);
                assert_eq!(k, entry_index(n, j, i));
                seen[k] = true;
                next += 1;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn duplicate_tags_rejected() {
        let mut m = RelaxationModel::new(2, vec![], Sense::Maximize);
        m.add_row("a", vec![(0, 1.0)], Bound::Le(1.0)).unwrap();
        assert!(m.add_row("a", vec![(1, 1.0)], Bound::Le(1.0)).is_err());
        assert!(m.add_row("b", vec![(3, 1.0)], Bound::Le(1.0)).is_err());
    }

    #[test]
    fn coefficients_are_merged() {
        let mut m = RelaxationModel::new(2, vec![], Sense::Maximize);
        m.add_row("a", vec![(1, 1.0), (0, 2.0), (1, 0.5), (2, 1.0), (2, -1.0)], Bound::Le(1.0))
            .unwrap();
        assert_eq!(m.row("a").unwrap().coeffs, vec![(0, 2.0), (1, 1.5)]);
    }
}
