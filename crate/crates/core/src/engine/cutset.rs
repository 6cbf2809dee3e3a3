use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_decompose, SymMatrix};

/// Two cut vectors closer than this (up to sign, max-norm) are the same cut.
pub const DUPLICATE_TOL: f64 = 1e-9;

/// Where a cut vector came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Eigen,
    StandardBasis,
    Oracle,
    User,
}

/// Ordered set of unit vectors `v`, each standing for the constraint `v^T X v >= 0`.
#[derive(Clone, Debug, Default)]
pub struct CutSet {
    vectors: Vec<DVector<f64>>,
    provenance: Vec<Provenance>,
}

impl CutSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// An orthonormal eigenbasis of `a`, ordered by descending eigenvalue.
    pub fn eigenbasis(a: &SymMatrix) -> Result<Self> {
        let eig = eig_decompose(a)?;
        let mut set = Self::new();
        for i in 0..eig.len() {
            set.insert(eig.vector(i), Provenance::Eigen)?;
        }
        Ok(set)
    }

    pub fn standard_basis(n: usize) -> Self {
        let mut set = Self::new();
        for i in 0..n {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            set.vectors.push(e);
            set.provenance.push(Provenance::StandardBasis);
        }
        set
    }

    /// Normalizes and appends `v`. Returns `false` when `v` duplicates an existing cut.
    pub fn insert(&mut self, v: DVector<f64>, provenance: Provenance) -> Result<bool> {
        if let Some(first) = self.vectors.first() {
            if first.len() != v.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    found: v.len(),
                });
            }
        }
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter("cut vector must be finite and non-zero".into()));
        }
        let v = v / norm;
        if self.contains(&v) {
            return Ok(false);
        }
        self.vectors.push(v);
        self.provenance.push(provenance);
        Ok(true)
    }

    /// Appends every cut of `other` not already present; returns the number added.
    pub fn extend_from(&mut self, other: &CutSet) -> Result<usize> {
        let mut added = 0;
        for (v, p) in other.iter() {
            if self.insert(v.clone(), p)? {
                added += 1;
            }
        }
        Ok(added)
    }

    pub fn contains(&self, v: &DVector<f64>) -> bool {
        self.vectors.iter().any(|w| {
            let same = w.iter().zip(v.iter()).all(|(a, b)| (a - b).abs() <= DUPLICATE_TOL);
            let flipped = w.iter().zip(v.iter()).all(|(a, b)| (a + b).abs() <= DUPLICATE_TOL);
            same || flipped
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Dimension of the vectors, if any are present.
    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(|v| v.len())
    }

    pub fn vector(&self, i: usize) -> &DVector<f64> {
        &self.vectors[i]
    }

    pub fn provenance(&self, i: usize) -> Provenance {
        self.provenance[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DVector<f64>, Provenance)> {
        self.vectors.iter().zip(self.provenance.iter().copied())
    }

    /// Keeps only the first `len` cuts.
    pub fn truncate(&mut self, len: usize) {
        self.vectors.truncate(len);
        self.provenance.truncate(len);
    }
}
