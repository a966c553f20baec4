//! JSON snapshots of decomposed states.
//!
//! Floats are written in shortest round-trip form, so `read(write(s))`
//! reproduces every finite value bit for bit.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::operator::PointInteraction;
use crate::state::DecomposedState;

pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub version: u32,
    pub alpha: f64,
    pub lambda: f64,
    /// Power of the run that produced the state; absent for linear data.
    pub p: Option<f64>,
    pub n_points: usize,
    pub r_max: f64,
    pub q_re: f64,
    pub q_im: f64,
    pub phi: Vec<(f64, f64)>,
}

impl Snapshot {
    pub fn from_state(state: &DecomposedState, p: Option<f64>) -> Result<Self> {
        let lambda = state.workspace().real_shift().ok_or_else(|| {
            Error::Snapshot(format!(
                "snapshots need a real decomposition shift, got {}",
                state.lambda()
            ))
        })?;
        if !state.is_finite() {
            return Err(Error::Snapshot("the state has non-finite entries".into()));
        }
        let grid = state.grid();
        Ok(Self {
            version: SNAPSHOT_VERSION,
            alpha: state.alpha(),
            lambda,
            p,
            n_points: grid.n_points(),
            r_max: grid.r_max(),
            q_re: state.q.re,
            q_im: state.q.im,
            phi: state.phi.iter().map(|v| (v.re, v.im)).collect(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Snapshot(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let snap: Self = serde_json::from_str(text).map_err(|e| Error::Snapshot(e.to_string()))?;
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported snapshot version {}",
                snap.version
            )));
        }
        if snap.phi.len() != snap.n_points {
            return Err(Error::Snapshot(format!(
                "phi has {} entries but n_points = {}",
                snap.phi.len(),
                snap.n_points
            )));
        }
        Ok(snap)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Builds the grid and operator recorded in the snapshot.
    pub fn model(&self) -> Result<Arc<PointInteraction>> {
        let grid = Arc::new(RadialGrid::new(self.n_points, self.r_max)?);
        PointInteraction::new(grid, self.alpha)
    }

    /// The state on `model`, which must match the recorded grid and `α`.
    pub fn to_state(&self, model: &Arc<PointInteraction>) -> Result<DecomposedState> {
        let grid = model.grid();
        if grid.n_points() != self.n_points || grid.r_max() != self.r_max || model.alpha() != self.alpha {
            return Err(Error::Snapshot(
                "the snapshot was taken on a different grid or alpha".into(),
            ));
        }
        let ws = model.workspace_real(self.lambda)?;
        let phi = self.phi.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        DecomposedState::new(phi, Complex64::new(self.q_re, self.q_im), ws)
    }
}
