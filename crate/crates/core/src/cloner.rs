//! End-to-end runs of the cloning machine: basis, Hamiltonian, evolution over
//! a time grid, phase averaging and, optionally, averaging over input qubits.

use std::sync::Arc;

use crate::dynamics::{check_grid, evolve_series, Method, Propagator};
use crate::exec::Exec;
use crate::hilbert::{enumerate_basis, initial_state, initial_state_with_field, HilbertBasis};
use crate::model::{build_hamiltonian, BiasMode, Hamiltonian, QubitState};
use crate::observables::{
    bloch_average, fidelity, photon_probabilities, photon_probabilities_in_modes, phase_average, PhotonStats,
    ProbabilityTable,
};
use crate::{Error, Result};

pub const DEFAULT_PHASE_GRID: usize = 4;
pub const DEFAULT_BLOCH_GRID: (usize, usize) = (16, 16);

/// A configured cloner: atom count, cycling field and numerical settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cloner {
    pub n_atoms: usize,
    pub bias: BiasMode,
    pub method: Method,
    pub phase_grid: usize,
    pub exec: Exec,
}

impl Cloner {
    pub fn new(n_atoms: usize, bias: BiasMode) -> Self {
        Self {
            n_atoms,
            bias,
            method: Method::Spectral,
            phase_grid: DEFAULT_PHASE_GRID,
            exec: Exec::default(),
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_phase_grid(mut self, m: usize) -> Self {
        self.phase_grid = m;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// One-excitation-above-atoms sector; the metastable level is included
    /// only when a cycling field is present.
    pub fn basis(&self) -> Result<Arc<HilbertBasis>> {
        if self.n_atoms == 0 {
            return Err(Error::Config("at least one atom is required".into()));
        }
        Ok(Arc::new(enumerate_basis(
            self.n_atoms,
            self.n_atoms as u32 + 1,
            !self.bias.is_none(),
        )?))
    }

    /// Hamiltonian in the rotated frame defined by `q`.
    pub fn hamiltonian(&self, q: &QubitState) -> Result<Hamiltonian> {
        build_hamiltonian(&self.basis()?, self.bias.primed(q))
    }

    fn series<F>(&self, h: &Hamiltonian, taus: &[f64], prepare: F) -> Result<Vec<ProbabilityTable>>
    where
        F: Fn(&[f64]) -> Result<crate::hilbert::StateVector> + Sync + Send,
    {
        self.series_with(h, taus, prepare, |psi| Ok(photon_probabilities(psi)))
    }

    fn series_with<F, R>(&self, h: &Hamiltonian, taus: &[f64], prepare: F, readout: R) -> Result<Vec<ProbabilityTable>>
    where
        F: Fn(&[f64]) -> Result<crate::hilbert::StateVector> + Sync + Send,
        R: Fn(&crate::hilbert::StateVector) -> Result<ProbabilityTable> + Sync + Send,
    {
        check_grid(taus)?;
        match self.method {
            Method::Spectral => {
                let prop = Propagator::new(h)?;
                phase_average(self.n_atoms, self.phase_grid, self.exec, |phases| {
                    let coords = prop.project(&prepare(phases)?)?;
                    self.exec.try_map(taus, |&t| readout(&prop.evaluate(&coords, t)))
                })
            }
            Method::Rk5(_) => phase_average(self.n_atoms, self.phase_grid, self.exec, |phases| {
                evolve_series(h, &prepare(phases)?, taus, self.method)?
                    .iter()
                    .map(&readout)
                    .collect()
            }),
        }
    }

    /// Phase-averaged clone-mode statistics at every grid point, simulated in
    /// the rotated frame of `q`.
    pub fn tables(&self, q: &QubitState, taus: &[f64]) -> Result<Vec<ProbabilityTable>> {
        let h = self.hamiltonian(q)?;
        let basis = h.basis().clone();
        self.series(&h, taus, |phases| initial_state(&basis, phases))
    }

    /// Same statistics obtained in the unrotated frame: laboratory field
    /// multipliers, the photon prepared as `α|1,0⟩ + β|0,1⟩` in `a₁, a₂` and the
    /// clone-mode readout taken through the mode transformation.
    pub fn tables_unrotated(&self, q: &QubitState, taus: &[f64]) -> Result<Vec<ProbabilityTable>> {
        let h = build_hamiltonian(&self.basis()?, self.bias.lab(q))?;
        let basis = h.basis().clone();
        let field = [((1, 0), q.alpha()), ((0, 1), q.beta())];
        self.series_with(
            &h,
            taus,
            |phases| initial_state_with_field(&basis, phases, &field),
            |psi| photon_probabilities_in_modes(psi, q),
        )
    }

    /// Statistics averaged uniformly over the Bloch sphere of input qubits.
    pub fn averaged_tables(&self, taus: &[f64], bloch_grid: (usize, usize)) -> Result<Vec<ProbabilityTable>> {
        check_grid(taus)?;
        bloch_average(bloch_grid.0, bloch_grid.1, self.exec, |q| self.tables(q, taus))
    }

    pub fn fidelity_curve(&self, q: &QubitState, taus: &[f64]) -> Result<Vec<f64>> {
        self.tables(q, taus)?.iter().map(fidelity).collect()
    }

    pub fn photon_curve(&self, q: &QubitState, taus: &[f64]) -> Result<Vec<PhotonStats>> {
        Ok(self.tables(q, taus)?.into_iter().map(PhotonStats::from_table).collect())
    }
}

/// `n` evenly spaced points on `[0, tau_max]`.
pub fn tau_grid(tau_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| tau_max * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{fidelity_biased, fidelity_unbiased};
    use crate::dynamics::IntegratorConfig;
    use crate::C64;

    #[test]
    fn single_atom_curves_match_closed_forms() {
        let taus = tau_grid(12.0, 121);
        let q = QubitState::from_bloch(0.9, 1.3);
        let f0 = Cloner::new(1, BiasMode::None).fidelity_curve(&q, &taus).unwrap();
        let f3 = Cloner::new(1, BiasMode::Matched(3.0)).fidelity_curve(&q, &taus).unwrap();
        for (i, &t) in taus.iter().enumerate() {
            assert!((f0[i] - fidelity_unbiased(t)).abs() < 1e-10);
            assert!((f3[i] - fidelity_biased(3.0, t)).abs() < 1e-10);
        }
    }

    #[test]
    fn rk5_and_spectral_runs_agree() {
        let taus = tau_grid(5.0, 26);
        let q = QubitState::horizontal();
        let base = Cloner::new(2, BiasMode::Matched(3.0));
        let a = base.fidelity_curve(&q, &taus).unwrap();
        let b = base
            .with_method(Method::Rk5(IntegratorConfig::default()))
            .fidelity_curve(&q, &taus)
            .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-7);
        }
    }

    #[test]
    fn sequential_and_parallel_are_bitwise_equal() {
        let taus = tau_grid(4.0, 41);
        let c = Cloner::new(1, BiasMode::Lab(C64::new(0.0, 0.0), C64::new(8.0, 0.0)));
        let a = c.with_exec(Exec::Sequential).averaged_tables(&taus, (4, 4)).unwrap();
        let b = c.with_exec(Exec::Parallel).averaged_tables(&taus, (4, 4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unrotated_frame_agrees_for_fixed_laboratory_field() {
        let taus = tau_grid(6.0, 31);
        let c = Cloner::new(1, BiasMode::Lab(C64::new(0.0, 0.0), C64::new(8.0, 0.0)));
        let q = QubitState::from_bloch(1.1, 0.6);
        let a = c.tables(&q, &taus).unwrap();
        let b = c.tables_unrotated(&q, &taus).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for ((k, l), p) in x.iter() {
                assert!((p - y.get(k, l)).abs() < 1e-10);
            }
            assert!((x.total() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_helpers() {
        assert_eq!(tau_grid(2.0, 3), vec![0.0, 1.0, 2.0]);
        assert_eq!(tau_grid(2.0, 1), vec![0.0]);
        assert!(Cloner::new(0, BiasMode::None).basis().is_err());
    }
}
