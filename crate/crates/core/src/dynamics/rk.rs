//! Adaptive Dormand–Prince 5(4) integration of `dc/dτ = −iHc`.
//!
//! The fifth-order solution is propagated (local extrapolation) and the
//! embedded fourth-order solution only drives the step-size controller. The
//! state is never renormalized; norm drift is reported in [`IntegrationStats`].

use ndarray::{Array1, Array2};

use super::check_grid;
use crate::hilbert::StateVector;
use crate::model::Hamiltonian;
use crate::{Error, Result, C64};

const MIN_STEP: f64 = 1e-12;
const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

// Butcher tableau; the nodes only enter through the time-independent rhs
#[cfg(test)]
const C2: f64 = 1.0 / 5.0;
#[cfg(test)]
const C3: f64 = 3.0 / 10.0;
#[cfg(test)]
const C4: f64 = 4.0 / 5.0;
#[cfg(test)]
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth- minus fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            initial_step: 1e-3,
            max_step: 0.1,
        }
    }
}

impl IntegratorConfig {
    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("initial_step", self.initial_step),
            ("max_step", self.max_step),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Largest `|‖c‖ − 1|` seen at any grid point.
    pub max_norm_drift: f64,
}

/// `out = −i H c`
fn rhs(h: &Array2<C64>, c: &[C64], out: &mut [C64]) {
    let n = c.len();
    for i in 0..n {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..n {
            s += h[[i, j]] * c[j];
        }
        out[i] = C64::new(s.im, -s.re);
    }
}

struct Stepper<'a> {
    h: &'a Array2<C64>,
    cfg: IntegratorConfig,
    k: [Vec<C64>; 7],
    tmp: Vec<C64>,
    next: Vec<C64>,
    step: f64,
    stats: IntegrationStats,
}

impl<'a> Stepper<'a> {
    fn new(h: &'a Array2<C64>, cfg: IntegratorConfig, dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        Self {
            h,
            cfg,
            k: std::array::from_fn(|_| z.clone()),
            tmp: z.clone(),
            next: z,
            step: cfg.initial_step.min(cfg.max_step),
            stats: IntegrationStats::default(),
        }
    }

    fn stage(&mut self, y: &[C64], dt: f64, coeffs: &[f64], into: usize) {
        for i in 0..y.len() {
            let mut acc = y[i];
            for (s, &a) in coeffs.iter().enumerate() {
                acc += self.k[s][i] * (a * dt);
            }
            self.tmp[i] = acc;
        }
        let (tmp, k) = (&self.tmp, &mut self.k);
        rhs(self.h, tmp, &mut k[into]);
    }

    /// Advances `y` from `t` to `t_end`.
    fn advance(&mut self, y: &mut [C64], mut t: f64, t_end: f64) -> Result<()> {
        if t_end <= t {
            return Ok(());
        }
        rhs(self.h, y, &mut self.k[0]);
        while t < t_end {
            let remaining = t_end - t;
            let dt = self.step.min(self.cfg.max_step).min(remaining);
            if dt < MIN_STEP && dt < remaining {
                return Err(Error::StepUnderflow { tau: t, step: dt });
            }

            self.stage(y, dt, &[A21], 1);
            self.stage(y, dt, &[A31, A32], 2);
            self.stage(y, dt, &[A41, A42, A43], 3);
            self.stage(y, dt, &[A51, A52, A53, A54], 4);
            self.stage(y, dt, &[A61, A62, A63, A64, A65], 5);
            for i in 0..y.len() {
                let k = &self.k;
                self.next[i] = y[i] + (k[0][i] * B1 + k[2][i] * B3 + k[3][i] * B4 + k[4][i] * B5 + k[5][i] * B6) * dt;
            }
            {
                let (next, k) = (&self.next, &mut self.k);
                rhs(self.h, next, &mut k[6]);
            }

            let mut err: f64 = 0.0;
            for i in 0..y.len() {
                let k = &self.k;
                let e = (k[0][i] * E1 + k[2][i] * E3 + k[3][i] * E4 + k[4][i] * E5 + k[5][i] * E6 + k[6][i] * E7) * dt;
                let sc = self.cfg.abs_tol + self.cfg.rel_tol * y[i].norm().max(self.next[i].norm());
                err = err.max(e.norm() / sc);
            }
            // error per unit step keeps the accumulated drift proportional to the tolerance
            let err = err / dt;

            let scale = if err == 0.0 {
                MAX_SCALE
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE)
            };
            if err <= 1.0 {
                t = if dt == remaining { t_end } else { t + dt };
                y.copy_from_slice(&self.next);
                self.k.swap(0, 6);
                self.stats.accepted += 1;
                // do not let a short final step shrink the next interval's step
                if dt < remaining || dt >= self.step {
                    self.step = dt * scale;
                }
            } else {
                self.stats.rejected += 1;
                self.step = dt * scale.min(1.0);
                if self.step < MIN_STEP {
                    return Err(Error::StepUnderflow { tau: t, step: self.step });
                }
            }
        }
        Ok(())
    }
}

fn norm(y: &[C64]) -> f64 {
    y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Integrates from `τ = 0` to `tau`.
pub fn rk5_propagate(h: &Hamiltonian, psi0: &StateVector, tau: f64, cfg: &IntegratorConfig) -> Result<StateVector> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter { name: "tau", value: tau });
    }
    rk5_series(h, psi0, &[tau], cfg).map(|(mut s, _)| s.pop().expect("one grid point"))
}

/// Integrates through an ascending grid starting at `τ = 0`, recording the
/// state at every grid point.
pub fn rk5_series(
    h: &Hamiltonian,
    psi0: &StateVector,
    taus: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(Vec<StateVector>, IntegrationStats)> {
    cfg.validate()?;
    check_grid(taus)?;
    if let Some(&first) = taus.first() {
        if first < 0.0 {
            return Err(Error::InvalidParameter { name: "tau", value: first });
        }
    }
    if psi0.basis().len() != h.dim() || **psi0.basis() != **h.basis() {
        return Err(Error::BasisMismatch);
    }

    let n0 = psi0.norm();
    let mut y: Vec<C64> = psi0.amplitudes().to_vec();
    let mut stepper = Stepper::new(h.matrix(), *cfg, y.len());
    let mut t = 0.0;
    let mut out = Vec::with_capacity(taus.len());
    for &target in taus {
        stepper.advance(&mut y, t, target)?;
        t = target.max(t);
        stepper.stats.max_norm_drift = stepper.stats.max_norm_drift.max((norm(&y) - n0).abs());
        out.push(StateVector::new(h.basis().clone(), Array1::from_vec(y.clone()))?);
    }
    Ok((out, stepper.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::spectral_propagate;
    use crate::hilbert::{enumerate_basis, initial_state};
    use crate::model::build_hamiltonian;
    use std::sync::Arc;

    fn two_atom(g2p: f64) -> (Hamiltonian, StateVector) {
        let b = Arc::new(enumerate_basis(2, 3, true).unwrap());
        let h = build_hamiltonian(&b, (C64::new(0.0, 0.0), C64::new(g2p, 0.0))).unwrap();
        let psi = initial_state(&b, &[0.4, 1.9]).unwrap();
        (h, psi)
    }

    #[test]
    fn tableau_is_consistent() {
        let rows: [&[f64]; 5] = [&[A21], &[A31, A32], &[A41, A42, A43], &[A51, A52, A53, A54], &[A61, A62, A63, A64, A65]];
        for (row, c) in rows.iter().zip([C2, C3, C4, C5, 1.0]) {
            assert!((row.iter().sum::<f64>() - c).abs() < 1e-14);
        }
        assert!((B1 + B3 + B4 + B5 + B6 - 1.0).abs() < 1e-14);
        assert!((E1 + E3 + E4 + E5 + E6 + E7).abs() < 1e-14);
    }

    #[test]
    fn zero_time_returns_initial_state() {
        let (h, psi) = two_atom(3.0);
        let out = rk5_propagate(&h, &psi, 0.0, &IntegratorConfig::default()).unwrap();
        assert!(out.max_abs_diff(&psi).unwrap() == 0.0);
    }

    #[test]
    fn two_atom_matches_spectral_at_unit_time() {
        let (h, psi) = two_atom(3.0);
        let a = rk5_propagate(&h, &psi, 1.0, &IntegratorConfig::default()).unwrap();
        let b = spectral_propagate(&h, &psi, 1.0).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-6);
    }

    #[test]
    fn norm_drift_is_small_over_long_runs() {
        for g in [0.0, 3.0, 8.0] {
            let (h, psi) = two_atom(g);
            let taus: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
            let (_, stats) = rk5_series(&h, &psi, &taus, &IntegratorConfig::default()).unwrap();
            assert!(stats.max_norm_drift < 1e-9, "G'2 = {g}: drift {}", stats.max_norm_drift);
        }
    }

    #[test]
    fn negative_time_and_bad_config_rejected() {
        let (h, psi) = two_atom(3.0);
        assert!(rk5_propagate(&h, &psi, -1.0, &IntegratorConfig::default()).is_err());
        let cfg = IntegratorConfig { abs_tol: 0.0, ..Default::default() };
        assert!(matches!(
            rk5_propagate(&h, &psi, 1.0, &cfg),
            Err(Error::InvalidParameter { name: "abs_tol", .. })
        ));
    }

    #[test]
    fn impossible_tolerance_underflows() {
        let (h, psi) = two_atom(8.0);
        let cfg = IntegratorConfig { abs_tol: 1e-300, rel_tol: 1e-300, ..Default::default() };
        assert!(matches!(rk5_propagate(&h, &psi, 1.0, &cfg), Err(Error::StepUnderflow { .. })));
    }
}
