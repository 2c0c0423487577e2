//! Time evolution under a time-independent Hermitian Hamiltonian.
//!
//! [`Propagator`] diagonalizes `H` once and applies `V e^{−iλτ} V†` exactly;
//! it is the reference against which the adaptive Runge–Kutta integrator in
//! [`rk5_propagate`] is checked.

mod jacobi;
mod rk;

use std::str::FromStr;
use std::sync::Arc;

use ndarray::{Array1, Array2};

pub use jacobi::{eigh, HermitianEigen};
pub use rk::{rk5_propagate, rk5_series, IntegratorConfig, IntegrationStats};

use crate::hilbert::{HilbertBasis, StateVector};
use crate::model::Hamiltonian;
use crate::{Error, Result, C64};

/// Spectral factorization of a Hamiltonian, shareable across threads.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: Arc<HilbertBasis>,
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<C64>,
}

impl Propagator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        let HermitianEigen { values, vectors } = eigh(h.matrix())?;
        Ok(Self {
            basis: h.basis().clone(),
            eigenvalues: values,
            eigenvectors: vectors,
        })
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Array2<C64> {
        &self.eigenvectors
    }

    /// Coordinates of `psi` in the eigenbasis, `V†c`.
    pub fn project(&self, psi: &StateVector) -> Result<Array1<C64>> {
        if psi.basis().len() != self.basis.len() || **psi.basis() != *self.basis {
            return Err(Error::BasisMismatch);
        }
        let v = &self.eigenvectors;
        let c = psi.amplitudes();
        let n = c.len();
        Ok(Array1::from_iter((0..n).map(|k| {
            (0..n).fold(C64::new(0.0, 0.0), |acc, i| acc + v[[i, k]].conj() * c[i])
        })))
    }

    /// Amplitudes at `tau` from eigenbasis coordinates produced by [`project`](Self::project).
    pub fn evaluate(&self, coords: &Array1<C64>, tau: f64) -> StateVector {
        let v = &self.eigenvectors;
        let n = coords.len();
        let phased: Vec<C64> = (0..n)
            .map(|k| coords[k] * C64::from_polar(1.0, -self.eigenvalues[k] * tau))
            .collect();
        let amps = Array1::from_iter((0..n).map(|i| {
            phased
                .iter()
                .enumerate()
                .fold(C64::new(0.0, 0.0), |acc, (k, w)| acc + v[[i, k]] * w)
        }));
        StateVector::new(self.basis.clone(), amps).expect("dimension matches basis")
    }

    pub fn propagate(&self, psi0: &StateVector, tau: f64) -> Result<StateVector> {
        Ok(self.evaluate(&self.project(psi0)?, tau))
    }
}

/// `e^{−iHτ}ψ₀` by eigendecomposition.
pub fn spectral_propagate(h: &Hamiltonian, psi0: &StateVector, tau: f64) -> Result<StateVector> {
    Propagator::new(h)?.propagate(psi0, tau)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum Method {
    #[default]
    Spectral,
    Rk5(IntegratorConfig),
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "rk5" => Ok(Method::Rk5(IntegratorConfig::default())),
            other => Err(Error::Config(format!("unknown method `{other}` (spectral | rk5)"))),
        }
    }
}

pub(crate) fn check_grid(taus: &[f64]) -> Result<()> {
    for (i, w) in taus.windows(2).enumerate() {
        if !(w[0] <= w[1]) {
            return Err(Error::UnsortedGrid(i + 1));
        }
    }
    if let Some(&t) = taus.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter { name: "tau", value: t });
    }
    Ok(())
}

/// One state per grid point. The spectral method evaluates every point from
/// `psi0`; the integrator carries its running state from point to point.
pub fn evolve_series(h: &Hamiltonian, psi0: &StateVector, taus: &[f64], method: Method) -> Result<Vec<StateVector>> {
    check_grid(taus)?;
    match method {
        Method::Spectral => {
            let prop = Propagator::new(h)?;
            let coords = prop.project(psi0)?;
            Ok(taus.iter().map(|&t| prop.evaluate(&coords, t)).collect())
        }
        Method::Rk5(cfg) => rk5_series(h, psi0, taus, &cfg).map(|(states, _)| states),
    }
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy(h: &Hamiltonian, psi: &StateVector) -> f64 {
    let c = psi.amplitudes();
    let hm = h.matrix();
    let n = c.len();
    let mut e = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            e += c[i].conj() * hm[[i, j]] * c[j];
        }
    }
    e.re
}
