use std::fmt;

use serde::{Deserialize, Serialize};

use super::spectral;
use crate::error::{Error, Result};
use crate::kernel::KernelBasis;

/// Identifier of a cluster (topic). Ids are allocated in increasing order
/// and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClusterId(pub u64);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Triggering weights `α[target][source][l]` between clusters.
///
/// Because every basis component has unit mass, the branching matrix is
/// `B[target][source] = Σ_l α[target][source][l]`: the expected number of
/// `target` events directly triggered by one `source` event.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceTensor {
    cluster_ids: Vec<ClusterId>,
    n_basis: usize,
    weights: Vec<f64>,
}

impl InfluenceTensor {
    /// All-zero tensor over `cluster_ids`.
    pub fn zeros(cluster_ids: Vec<ClusterId>, n_basis: usize) -> Self {
        let k = cluster_ids.len();
        Self {
            cluster_ids,
            n_basis,
            weights: vec![0.0; k * k * n_basis],
        }
    }

    /// Builds a tensor from `weights[target][source][l]`.
    pub fn from_nested(cluster_ids: Vec<ClusterId>, weights: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let k = cluster_ids.len();
        if weights.len() != k {
            return Err(Error::input(format!(
                "tensor has {} target rows for {k} clusters",
                weights.len()
            )));
        }
        let n_basis = weights
            .first()
            .and_then(|r| r.first())
            .map(Vec::len)
            .unwrap_or(0);
        let mut flat = Vec::with_capacity(k * k * n_basis);
        for row in &weights {
            if row.len() != k {
                return Err(Error::input("tensor rows must be square in clusters"));
            }
            for w in row {
                if w.len() != n_basis {
                    return Err(Error::input("every tensor entry needs the same basis size"));
                }
                if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                    return Err(Error::input("tensor weights must be finite and non-negative"));
                }
                flat.extend_from_slice(w);
            }
        }
        let mut ids = cluster_ids.clone();
        ids.sort();
        ids.dedup();
        if ids.len() != k {
            return Err(Error::input("duplicate cluster ids in tensor"));
        }
        Ok(Self {
            cluster_ids,
            n_basis,
            weights: flat,
        })
    }

    pub fn cluster_ids(&self) -> &[ClusterId] {
        &self.cluster_ids
    }

    pub fn n_clusters(&self) -> usize {
        self.cluster_ids.len()
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn index_of(&self, id: ClusterId) -> Result<usize> {
        self.cluster_ids
            .iter()
            .position(|c| *c == id)
            .ok_or(Error::UnknownCluster(id.0))
    }

    #[inline]
    pub fn row(&self, target: usize, source: usize) -> &[f64] {
        let k = self.cluster_ids.len();
        let start = (target * k + source) * self.n_basis;
        &self.weights[start..start + self.n_basis]
    }

    #[inline]
    pub fn row_mut(&mut self, target: usize, source: usize) -> &mut [f64] {
        let k = self.cluster_ids.len();
        let start = (target * k + source) * self.n_basis;
        &mut self.weights[start..start + self.n_basis]
    }

    /// Sets one row, rejecting negative or non-finite weights.
    pub fn set_row(&mut self, target: usize, source: usize, values: &[f64]) -> Result<()> {
        if values.len() != self.n_basis {
            return Err(Error::input("row length must equal the basis size"));
        }
        if values.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::input("tensor weights must be finite and non-negative"));
        }
        self.row_mut(target, source).copy_from_slice(values);
        Ok(())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        let k = self.n_clusters();
        (0..k)
            .map(|t| (0..k).map(|s| self.row(t, s).to_vec()).collect())
            .collect()
    }

    /// Row-major `K×K` branching matrix.
    pub fn branching_matrix(&self) -> Vec<f64> {
        let k = self.n_clusters();
        let mut b = vec![0.0; k * k];
        for t in 0..k {
            for s in 0..k {
                b[t * k + s] = self.row(t, s).iter().sum();
            }
        }
        b
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral::spectral_radius(&self.branching_matrix(), self.n_clusters())
    }

    /// Multiplies every weight by `factor >= 0`.
    pub fn scale(&mut self, factor: f64) {
        debug_assert!(factor >= 0.0);
        self.weights.iter_mut().for_each(|w| *w *= factor);
    }

    /// Copy with every cross-cluster row set to zero.
    pub fn self_only(&self) -> Self {
        let mut out = self.clone();
        let k = self.n_clusters();
        for t in 0..k {
            for s in 0..k {
                if t != s {
                    out.row_mut(t, s).iter_mut().for_each(|w| *w = 0.0);
                }
            }
        }
        out
    }

    pub fn to_record(&self, basis: &KernelBasis) -> TensorRecord {
        TensorRecord {
            cluster_ids: self.cluster_ids.clone(),
            kernel_means: basis.means().to_vec(),
            kernel_sigmas: basis.sigmas().to_vec(),
            weights: self.to_nested(),
        }
    }
}

/// JSON form of an influence tensor together with its basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub cluster_ids: Vec<ClusterId>,
    pub kernel_means: Vec<f64>,
    pub kernel_sigmas: Vec<f64>,
    pub weights: Vec<Vec<Vec<f64>>>,
}

impl TensorRecord {
    pub fn into_parts(self) -> Result<(InfluenceTensor, KernelBasis)> {
        let basis = KernelBasis::new(self.kernel_means, self.kernel_sigmas)?;
        let tensor = InfluenceTensor::from_nested(self.cluster_ids, self.weights)?;
        if tensor.n_clusters() > 0 && tensor.n_basis() != basis.len() {
            return Err(Error::input("tensor basis size does not match kernel arrays"));
        }
        Ok((tensor, basis))
    }
}
