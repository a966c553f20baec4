//! The decomposed state `u = φ + q G^λ` and its norms.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::operator::{PointInteraction, ResolventWorkspace};

#[derive(Debug, Clone)]
pub struct DecomposedState {
    /// Regular part at the grid nodes.
    pub phi: Vec<Complex64>,
    /// Charge of the singular part.
    pub q: Complex64,
    ws: Arc<ResolventWorkspace>,
}

/// Discrete norms of a state, see [`DecomposedState::norms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub mass: f64,
    pub l2_phi: f64,
    pub grad_phi: f64,
    pub h1_phi: f64,
    pub h1_alpha: f64,
}

impl DecomposedState {
    pub fn new(phi: Vec<Complex64>, q: Complex64, ws: Arc<ResolventWorkspace>) -> Result<Self> {
        ws.grid().check_len(phi.len())?;
        Ok(Self { phi, q, ws })
    }

    pub fn zero(ws: Arc<ResolventWorkspace>) -> Self {
        let n = ws.grid().n_points();
        Self {
            phi: vec![Complex64::default(); n],
            q: Complex64::default(),
            ws,
        }
    }

    /// Domain element with regular part `phi`: `q = φ(0) / Γ`.
    pub fn from_regular(phi: Vec<Complex64>, ws: Arc<ResolventWorkspace>) -> Result<Self> {
        if ws.is_singular() {
            return Err(Error::SingularResolvent(ws.shift()));
        }
        let q = ws.model().point_value(&phi) / ws.gamma();
        Self::new(phi, q, ws)
    }

    /// The unique domain decomposition of a grid field at the workspace shift.
    pub fn from_total_field(u: &[Complex64], ws: Arc<ResolventWorkspace>) -> Result<Self> {
        ws.grid().check_len(u.len())?;
        let q = ws.model().point_value(u) / ws.model().coupling();
        let phi = u.iter().zip(ws.green()).map(|(v, g)| v - q * g).collect();
        Self::new(phi, q, ws)
    }

    pub fn workspace(&self) -> &Arc<ResolventWorkspace> {
        &self.ws
    }

    pub fn model(&self) -> &Arc<PointInteraction> {
        self.ws.model()
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.ws.grid()
    }

    pub fn alpha(&self) -> f64 {
        self.ws.model().alpha()
    }

    pub fn lambda(&self) -> Complex64 {
        self.ws.shift()
    }

    /// `u_j = φ_j + q G^λ_j`.
    pub fn total_field(&self) -> Vec<Complex64> {
        self.phi
            .iter()
            .zip(self.ws.green())
            .map(|(p, g)| p + self.q * g)
            .collect()
    }

    /// Same function, decomposed at the shift of `target`:
    /// `φ' = φ + q (G^λ - G^λ')`, `q' = q`.
    pub fn change_lambda(&self, target: &Arc<ResolventWorkspace>) -> Result<Self> {
        if !Arc::ptr_eq(self.model(), target.model()) {
            return Err(Error::Parameter(
                "change_lambda needs both shifts on the same operator".into(),
            ));
        }
        if Arc::ptr_eq(&self.ws, target) {
            return Ok(self.clone());
        }
        let phi = self
            .phi
            .iter()
            .zip(self.ws.green())
            .zip(target.green())
            .map(|((p, g), g_new)| p + self.q * (g - g_new))
            .collect();
        Self::new(phi, self.q, Arc::clone(target))
    }

    /// Convenience wrapper building the target workspace.
    pub fn change_lambda_to(&self, shift: Complex64) -> Result<Self> {
        if shift == self.lambda() {
            return Ok(self.clone());
        }
        let ws = self.model().workspace(shift)?;
        self.change_lambda(&ws)
    }

    /// `|q Γ - φ(0)| / (max(|Γ|, 1e-8) (|q| + 1))`, i.e. `|q - φ(0)/Γ| / (|q|+1)`
    /// away from the eigenvalue shift. At the eigenvalue shift `Γ` counts as
    /// zero and the constraint reads `φ(0) = 0`.
    pub fn constraint_defect(&self) -> f64 {
        let gamma = if self.ws.is_singular() {
            Complex64::default()
        } else {
            self.ws.gamma()
        };
        let origin = self.model().point_value(&self.phi);
        (self.q * gamma - origin).norm() / (gamma.norm().max(1e-8) * (self.q.norm() + 1.0))
    }

    pub fn is_in_domain(&self, tol: f64) -> bool {
        self.constraint_defect() <= tol
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            phi: self.phi.iter().map(|p| p * c).collect(),
            q: self.q * c,
            ws: Arc::clone(&self.ws),
        }
    }

    /// `a·self + b·other`, both decomposed at the same shift.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if !Arc::ptr_eq(&self.ws, &other.ws) && self.lambda() != other.lambda() {
            return Err(Error::Parameter(
                "linear combination needs a common decomposition shift".into(),
            ));
        }
        if !Arc::ptr_eq(self.model(), other.model()) {
            return Err(Error::Parameter(
                "linear combination needs a common operator".into(),
            ));
        }
        let phi = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            phi,
            q: a * self.q + b * other.q,
            ws: Arc::clone(&self.ws),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.q.re.is_finite()
            && self.q.im.is_finite()
            && self.phi.iter().all(|p| p.re.is_finite() && p.im.is_finite())
    }

    pub fn mass(&self) -> f64 {
        self.grid().norm_sq(&self.total_field())
    }

    /// Mass of the total field, discrete `L²`/`H¹` norms of `φ` and
    /// `‖u‖_{H¹_α} = ‖φ‖_{H¹} + |q|`.
    pub fn norms(&self) -> Norms {
        let grid = self.grid();
        let mass = grid.norm_sq(&self.total_field());
        let l2_sq = grid.norm_sq(&self.phi);
        let grad_sq = grid.dirichlet_energy(&self.phi);
        let h1_phi = (l2_sq + grad_sq).sqrt();
        Norms {
            mass,
            l2_phi: l2_sq.sqrt(),
            grad_phi: grad_sq.sqrt(),
            h1_phi,
            h1_alpha: h1_phi + self.q.norm(),
        }
    }

    /// `‖u‖_{L^p}` of the total field.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.grid().lp_norm(&self.total_field(), p)
    }

    /// Supremum of `|u|` over the nodes.
    pub fn sup_field(&self) -> f64 {
        self.total_field().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
