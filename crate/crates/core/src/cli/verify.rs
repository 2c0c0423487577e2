//! Built-in consistency checks run by `cloner verify`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::analytic::{
    amplitudes_from_pair, amplitudes_unbiased, rabi_pair, theta_avg_probs_unbiased, RabiPair,
};
use crate::cloner::{tau_grid, Cloner};
use crate::dynamics::{energy, rk5_series, IntegratorConfig, Propagator};
use crate::hilbert::{enumerate_basis, initial_state, initial_state_with_field, HilbertBasis};
use crate::model::{build_hamiltonian, BiasMode, QubitState};
use crate::observables::{fidelity, fidelity_two_atom, photon_probabilities};
use crate::{Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn bound(name: &'static str, value: f64, tol: f64) -> Self {
        Self {
            name,
            passed: value <= tol,
            detail: format!("max deviation {value:.3e} (tolerance {tol:.0e})"),
        }
    }

    fn from_result(name: &'static str, r: Result<Check>) -> Self {
        r.unwrap_or_else(|e| Self {
            name,
            passed: false,
            detail: format!("error: {e}"),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag}  {:<28} {}", c.name, c.detail);
        }
        let n_ok = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{n_ok}/{} checks passed", self.checks.len());
        out
    }
}

const QUBITS: [(f64, f64); 3] = [(0.0, 0.0), (0.9, 1.3), (2.4, -0.7)];
const THETAS: [f64; 4] = [0.0, 0.7, 2.1, -2.9];

fn qubits() -> impl Iterator<Item = QubitState> {
    QUBITS.iter().map(|&(c, p)| QubitState::from_bloch(c, p))
}

fn single_atom(metastable: bool) -> Result<Arc<HilbertBasis>> {
    Ok(Arc::new(enumerate_basis(1, 2, metastable)?))
}

fn unbiased_closed_form() -> Result<Check> {
    let basis = single_atom(false)?;
    let prop = Propagator::new(&build_hamiltonian(&basis, (C64::new(0.0, 0.0), C64::new(0.0, 0.0)))?)?;
    let taus = tau_grid(12.0, 241);
    let mut worst: f64 = 0.0;
    for q in qubits() {
        let field = [((1, 0), q.alpha()), ((0, 1), q.beta())];
        for &theta in &THETAS {
            let coords = prop.project(&initial_state_with_field(&basis, &[theta], &field)?)?;
            for &t in &taus {
                let exact = amplitudes_unbiased(&q, theta, t).to_state(&basis)?;
                worst = worst.max(prop.evaluate(&coords, t).max_abs_diff(&exact)?);
            }
        }
    }
    Ok(Check::bound("unbiased closed form", worst, 1e-8))
}

/// Compares the biased closed form built from `pair` against the spectral
/// propagator with `G′₁ = 0`, `G′₂ = 3`.
pub fn biased_closed_form_with<P>(pair: P) -> Check
where
    P: Fn(f64, f64) -> Result<RabiPair>,
{
    let name = "biased closed form";
    Check::from_result(name, (|| {
        let g2p = 3.0;
        let basis = single_atom(true)?;
        let prop = Propagator::new(&build_hamiltonian(&basis, (C64::new(0.0, 0.0), C64::new(g2p, 0.0)))?)?;
        let taus = tau_grid(12.0, 241);
        let mut worst: f64 = 0.0;
        for &theta in &THETAS {
            let coords = prop.project(&initial_state(&basis, &[theta])?)?;
            let rp = pair(g2p, theta)?;
            for &t in &taus {
                let exact = amplitudes_from_pair(&rp, t).to_state(&basis)?;
                worst = worst.max(prop.evaluate(&coords, t).max_abs_diff(&exact)?);
            }
        }
        Ok(Check::bound(name, worst, 1e-8))
    })())
}

fn theta_averaged_table() -> Result<Check> {
    let taus = tau_grid(12.0, 241);
    let mut worst: f64 = 0.0;
    for q in qubits() {
        let tables = Cloner::new(1, BiasMode::None).tables(&q, &taus)?;
        for (t, table) in taus.iter().zip(&tables) {
            let exact = theta_avg_probs_unbiased(*t);
            for k in 0..=2 {
                for l in 0..=2 - k {
                    worst = worst.max((table.get(k, l) - exact.get(k, l)).abs());
                }
            }
        }
    }
    Ok(Check::bound("phase-averaged table", worst, 1e-8))
}

fn rk5_against_spectral() -> Result<Vec<Check>> {
    let taus = tau_grid(20.0, 81);
    let cfg = IntegratorConfig::default();
    let (mut diff, mut drift): (f64, f64) = (0.0, 0.0);
    for n in [1usize, 2] {
        for g in [0.0, 3.0, 8.0] {
            let bias = if g == 0.0 { BiasMode::None } else { BiasMode::Matched(g) };
            let h = Cloner::new(n, bias).hamiltonian(&QubitState::horizontal())?;
            let prop = Propagator::new(&h)?;
            let phases: Vec<f64> = (0..n).map(|m| 0.4 + 1.3 * m as f64).collect();
            let psi0 = initial_state(h.basis(), &phases)?;
            let (states, stats) = rk5_series(&h, &psi0, &taus, &cfg)?;
            drift = drift.max(stats.max_norm_drift);
            for (t, s) in taus.iter().zip(&states) {
                diff = diff.max(prop.propagate(&psi0, *t)?.max_abs_diff(s)?);
            }
        }
    }
    Ok(vec![
        Check::bound("rk5 vs spectral", diff, 1e-6),
        Check::bound("rk5 norm drift", drift, 1e-9),
    ])
}

fn conservation() -> Result<Check> {
    let taus = tau_grid(20.0, 81);
    let mut worst: f64 = 0.0;
    for n in [1usize, 2] {
        let h = Cloner::new(n, BiasMode::Matched(3.0)).hamiltonian(&QubitState::horizontal())?;
        let prop = Propagator::new(&h)?;
        let psi0 = initial_state(h.basis(), &vec![0.3; n])?;
        let e0 = energy(&h, &psi0);
        for &t in &taus {
            let psi = prop.propagate(&psi0, t)?;
            worst = worst
                .max((psi.norm_sqr() - 1.0).abs())
                .max((photon_probabilities(&psi).total() - 1.0).abs())
                .max((energy(&h, &psi) - e0).abs());
        }
    }
    Ok(Check::bound("norm and energy", worst, 1e-9))
}

fn zero_probabilities() -> Result<Check> {
    let taus = tau_grid(20.0, 201);
    let q = QubitState::horizontal();
    let one = Cloner::new(1, BiasMode::Matched(3.0)).tables(&q, &taus)?;
    let two = Cloner::new(2, BiasMode::Matched(3.0)).tables(&q, &taus)?;
    let worst = one
        .iter()
        .map(|t| t.get(0, 2))
        .chain(two.iter().map(|t| t.get(0, 3)))
        .fold(0.0, f64::max);
    Ok(Check::bound("forbidden photon counts", worst, 1e-10))
}

fn universality() -> Result<Check> {
    let taus = tau_grid(12.0, 121);
    let mut worst: f64 = 0.0;
    for bias in [BiasMode::None, BiasMode::Matched(3.0)] {
        let c = Cloner::new(1, bias);
        let reference = c.fidelity_curve(&QubitState::horizontal(), &taus)?;
        for q in qubits() {
            for (table, f) in c.tables_unrotated(&q, &taus)?.iter().zip(&reference) {
                worst = worst.max((fidelity(table)? - f).abs());
            }
        }
    }
    Ok(Check::bound("universality", worst, 1e-9))
}

fn rabi_identities() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let g = 0.01 + 19.99 * (i as f64 + 0.5) / 100.0;
        let p = rabi_pair(g, 0.0)?;
        worst = worst
            .max((p.omega1 * p.omega2 - 2.0 * g).abs())
            .max((p.omega1.powi(2) + p.omega2.powi(2) - 2.0 * g * g - 4.0).abs());
    }
    Ok(Check::bound("rabi identities", worst, 1e-10))
}

fn two_atom_shortcut() -> Result<Check> {
    let taus = tau_grid(20.0, 201);
    let tables = Cloner::new(2, BiasMode::Matched(3.0)).tables(&QubitState::horizontal(), &taus)?;
    let mut worst: f64 = 0.0;
    for t in &tables {
        worst = worst.max((fidelity(t)? - fidelity_two_atom(t)).abs());
    }
    Ok(Check::bound("two-atom fidelity shortcut", worst, 1e-10))
}

/// Runs every check with the given Rabi-pair provider.
pub fn run_with<P>(pair: P) -> Report
where
    P: Fn(f64, f64) -> Result<RabiPair>,
{
    let mut checks = vec![
        Check::from_result("unbiased closed form", unbiased_closed_form()),
        biased_closed_form_with(pair),
        Check::from_result("phase-averaged table", theta_averaged_table()),
    ];
    match rk5_against_spectral() {
        Ok(cs) => checks.extend(cs),
        Err(e) => checks.push(Check::from_result("rk5 vs spectral", Err(e))),
    }
    checks.extend([
        Check::from_result("norm and energy", conservation()),
        Check::from_result("forbidden photon counts", zero_probabilities()),
        Check::from_result("universality", universality()),
        Check::from_result("rabi identities", rabi_identities()),
        Check::from_result("two-atom fidelity shortcut", two_atom_shortcut()),
    ]);
    Report { checks }
}

pub fn run_all() -> Report {
    run_with(rabi_pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biased_check_passes_with_true_coefficients() {
        let c = biased_closed_form_with(rabi_pair);
        assert!(c.passed, "{}", c.detail);
    }

    #[test]
    fn sign_flip_in_first_coefficient_is_caught() {
        let c = biased_closed_form_with(|g, th| {
            let mut p = rabi_pair(g, th)?;
            p.big_a = -p.big_a;
            Ok(p)
        });
        assert!(!c.passed);
    }

    #[test]
    fn failing_provider_reports_failure() {
        let c = biased_closed_form_with(|g, _| Err(crate::Error::DegenerateBias(g)));
        assert!(!c.passed);
        assert!(c.detail.starts_with("error"));
    }

    #[test]
    fn report_rendering() {
        let r = Report {
            checks: vec![
                Check::bound("a", 1e-12, 1e-10),
                Check::bound("b", 1.0, 1e-10),
            ],
        };
        assert!(!r.passed());
        let text = r.render();
        assert!(text.contains("PASS  a"));
        assert!(text.contains("FAIL  b"));
        assert!(text.ends_with("1/2 checks passed\n"));
    }
}
