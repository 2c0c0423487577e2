//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::{PI, SQRT_2};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cloning_core::analytic::{amplitudes_biased, rabi_pair, theta_avg_probs_unbiased};
use cloning_core::cloner::{tau_grid, Cloner};
use cloning_core::dynamics::{rk5_series, IntegratorConfig, Propagator};
use cloning_core::hilbert::{enumerate_basis, initial_state};
use cloning_core::model::{build_hamiltonian, BiasMode, QubitState};
use cloning_core::observables::{fidelity, fidelity_two_atom, ProbabilityTable};
use cloning_core::{Result, C64};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn random_qubits(rng: &mut ChaCha8Rng, n: usize) -> Vec<QubitState> {
    (0..n)
        .map(|_| {
            let cos_chi: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            QubitState::from_bloch(cos_chi.acos(), phi)
        })
        .collect()
}

fn lab_field(g1: f64, g2: f64) -> BiasMode {
    BiasMode::Lab(C64::new(g1, 0.0), C64::new(g2, 0.0))
}

fn fidelities(tables: &[ProbabilityTable]) -> Result<Vec<f64>> {
    tables.iter().map(fidelity).collect()
}

fn trapezoid_mean(ys: &[f64]) -> f64 {
    let n = ys.len() - 1;
    let inner: f64 = ys[1..n].iter().sum();
    (inner + 0.5 * (ys[0] + ys[n])) / n as f64
}

fn c1_closed_form_fidelity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let taus = tau_grid(12.0, 1000);
    let start = Instant::now();
    let c = Cloner::new(1, BiasMode::None);
    let mut worst: f64 = 0.0;
    for q in random_qubits(&mut rng, 5) {
        let f = fidelities(&c.tables_unrotated(&q, &taus)?)?;
        for (t, x) in taus.iter().zip(&f) {
            worst = worst.max((x - (0.75 + 0.25 * (SQRT_2 * t).cos())).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-8 && secs < 5.0,
        format!("max |F − F_exact| = {worst:.2e} over 5 qubits, runtime {secs:.2} s"),
    )
}

fn c2_probability_table() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let taus = tau_grid(12.0, 1000);
    let c = Cloner::new(1, BiasMode::None);
    let keys = [(2, 0), (1, 1), (0, 1), (1, 0)];
    let (mut formula, mut sum, mut other): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for q in random_qubits(&mut rng, 5) {
        for (t, table) in taus.iter().zip(c.tables_unrotated(&q, &taus)?) {
            let exact = theta_avg_probs_unbiased(*t);
            let mut s = 0.0;
            for &(k, l) in &keys {
                formula = formula.max((table.get(k, l) - exact.get(k, l)).abs());
                s += table.get(k, l);
            }
            sum = sum.max((s - 1.0).abs());
            for ((k, l), p) in table.iter() {
                if !keys.contains(&(k, l)) {
                    other = other.max(p.abs());
                }
            }
        }
    }
    outcome(
        formula < 1e-8 && sum < 1e-10 && other < 1e-10,
        format!("formulas {formula:.2e}, sum defect {sum:.2e}, other entries {other:.2e}"),
    )
}

fn c3_biased_closed_form() -> Result<Outcome> {
    let g2p = 3.0;
    let basis = Arc::new(enumerate_basis(1, 2, true)?);
    let prop = Propagator::new(&build_hamiltonian(&basis, (C64::new(0.0, 0.0), C64::new(g2p, 0.0)))?)?;
    let taus = tau_grid(12.0, 1000);
    let mut worst: f64 = 0.0;
    for j in 0..8 {
        let theta = 2.0 * PI * j as f64 / 8.0 + 0.1;
        let coords = prop.project(&initial_state(&basis, &[theta])?)?;
        for &t in &taus {
            let exact = amplitudes_biased(g2p, theta, t)?.to_state(&basis)?;
            worst = worst.max(prop.evaluate(&coords, t).max_abs_diff(&exact)?);
        }
    }
    outcome(worst < 1e-8, format!("max amplitude difference {worst:.2e}"))
}

fn c4_rabi_identities() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g: f64 = rng.gen_range(0.01..20.0);
        let p = rabi_pair(g, 0.0)?;
        worst = worst
            .max((p.omega1 * p.omega2 - 2.0 * g).abs())
            .max((p.omega1.powi(2) + p.omega2.powi(2) - 2.0 * g * g - 4.0).abs());
    }
    outcome(worst < 1e-10, format!("max identity defect {worst:.2e}"))
}

fn c5_improvement() -> Result<Outcome> {
    let taus = tau_grid(5.0, 1001);
    let q = QubitState::horizontal();
    let mut passed = true;
    let mut detail = Vec::new();
    for n in [1usize, 2] {
        let biased = trapezoid_mean(&Cloner::new(n, BiasMode::Matched(3.0)).fidelity_curve(&q, &taus)?);
        let plain = trapezoid_mean(&Cloner::new(n, BiasMode::None).fidelity_curve(&q, &taus)?);
        passed &= biased > plain;
        detail.push(format!("N={n}: {biased:.6} vs {plain:.6}"));
    }
    outcome(passed, format!("time-averaged F with vs without field, {}", detail.join("; ")))
}

fn c6_zero_probabilities() -> Result<Outcome> {
    let taus = tau_grid(20.0, 2001);
    let q = QubitState::horizontal();
    let one = Cloner::new(1, BiasMode::Matched(3.0)).tables(&q, &taus)?;
    let two = Cloner::new(2, BiasMode::Matched(3.0)).tables(&q, &taus)?;
    let p02 = one.iter().map(|t| t.get(0, 2)).fold(0.0, f64::max);
    let p03 = two.iter().map(|t| t.get(0, 3)).fold(0.0, f64::max);
    outcome(
        p02 <= 1e-10 && p03 <= 1e-10,
        format!("max p(0,2) N=1: {p02:.2e}, max p(0,3) N=2: {p03:.2e}"),
    )
}

fn c7_two_atom_formula() -> Result<Outcome> {
    let taus = tau_grid(20.0, 2001);
    let q = QubitState::horizontal();
    let mut worst: f64 = 0.0;
    for bias in [BiasMode::None, BiasMode::Matched(3.0), BiasMode::Matched(8.0)] {
        for t in Cloner::new(2, bias).tables(&q, &taus)? {
            worst = worst.max((fidelity(&t)? - fidelity_two_atom(&t)).abs());
        }
    }
    outcome(worst < 1e-10, format!("max difference {worst:.2e}"))
}

fn c8_method_cross_check() -> Result<Outcome> {
    let taus = tau_grid(20.0, 401);
    let cfg = IntegratorConfig::default();
    let (mut diff, mut drift): (f64, f64) = (0.0, 0.0);
    for n in [1usize, 2] {
        for g in [0.0, 3.0, 8.0] {
            let bias = if g == 0.0 { BiasMode::None } else { BiasMode::Matched(g) };
            let h = Cloner::new(n, bias).hamiltonian(&QubitState::horizontal())?;
            let prop = Propagator::new(&h)?;
            for phases in [vec![0.0; n], (0..n).map(|m| 0.9 + 2.2 * m as f64).collect()] {
                let psi0 = initial_state(h.basis(), &phases)?;
                let (states, stats) = rk5_series(&h, &psi0, &taus, &cfg)?;
                drift = drift.max(stats.max_norm_drift);
                for (t, s) in taus.iter().zip(&states) {
                    diff = diff.max(prop.propagate(&psi0, *t)?.max_abs_diff(s)?);
                }
            }
        }
    }
    outcome(
        diff < 1e-6 && drift < 1e-9,
        format!("max amplitude discrepancy {diff:.2e}, max norm drift {drift:.2e}"),
    )
}

/// Lower bound on `max_τ |F(τ+T) − F(τ)|` for every shift in `[lo, hi]`,
/// from samples of `F` on a uniform grid of spacing `h`.
fn min_shift_defect(f: &[f64], h: f64, lo: f64, hi: f64, window: usize) -> (f64, f64) {
    let slope = f.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max);
    // grid shifts cover every T to within h/2; allow 50% slack on the slope
    let slack = 1.5 * slope * h / 2.0;
    let mut best = (f64::INFINITY, 0.0);
    let (m_lo, m_hi) = ((lo / h).floor() as usize, (hi / h).ceil() as usize);
    for m in m_lo..=m_hi {
        let d = (0..window).map(|k| (f[k + m] - f[k]).abs()).fold(0.0, f64::max) - slack;
        if d < best.0 {
            best = (d, m as f64 * h);
        }
    }
    best
}

fn c9_fixed_field_average() -> Result<Outcome> {
    let biased = Cloner::new(1, lab_field(0.0, 8.0));
    let plain = Cloner::new(1, BiasMode::None);

    let early = tau_grid(2.0, 201);
    let fb = fidelities(&biased.averaged_tables(&early, (16, 16))?)?;
    let f0 = fidelities(&plain.averaged_tables(&early, (16, 16))?)?;
    let margin = (1..early.len()).map(|i| fb[i] - f0[i]).fold(f64::INFINITY, f64::min);

    let taus = tau_grid(6.0, 601);
    let coarse = fidelities(&biased.averaged_tables(&taus, (16, 16))?)?;
    let fine = fidelities(&biased.averaged_tables(&taus, (32, 32))?)?;
    let quad = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    // unbiased average repeats after √2π
    let shifted: Vec<f64> = taus.iter().map(|t| t + SQRT_2 * PI).collect();
    let p0 = fidelities(&plain.averaged_tables(&taus, (16, 16))?)?;
    let p1 = fidelities(&plain.averaged_tables(&shifted, (16, 16))?)?;
    let period = p0.iter().zip(&p1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    // biased average: no shift in [0.1, 20] reproduces the curve over τ ∈ [0, 20]
    let h = 0.005;
    let long = tau_grid(40.0, 8001);
    let fl = fidelities(&biased.averaged_tables(&long, (16, 16))?)?;
    let (defect, at) = min_shift_defect(&fl, h, 0.1, 20.0, 4001);

    let passed = margin >= 0.0 && quad < 1e-8 && period < 1e-10 && defect > 1e-6;
    outcome(
        passed,
        format!(
            "min F_bias − F_nobias on (0,2] {margin:.2e}; 16² vs 32² {quad:.2e}; \
             √2π-shift defect {period:.2e}; smallest biased shift defect {defect:.2e} at T≈{at:.3}"
        ),
    )
}

fn c10_determinism() -> Result<Outcome> {
    let exe = env!("CARGO_BIN_EXE_cloner");
    let dir = tempfile::tempdir().map_err(|e| cloning_core::Error::Config(e.to_string()))?;
    let mut mismatched = Vec::new();
    let presets = ["fig2", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6a", "fig6b"];
    for name in presets {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{name}-{run}.csv"));
            let status = Command::new(exe)
                .args(["preset", name, "--out"])
                .arg(&path)
                .status()
                .map_err(|e| cloning_core::Error::Config(e.to_string()))?;
            if !status.success() {
                return outcome(false, format!("preset {name} exited with {status}"));
            }
            outputs.push(std::fs::read(&path).map_err(|e| cloning_core::Error::Config(e.to_string()))?);
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            mismatched.push(name);
        }
    }
    outcome(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("{} presets byte-identical across two runs", presets.len())
        } else {
            format!("differing output: {}", mismatched.join(", "))
        },
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("closed-form fidelity and universality", c1_closed_form_fidelity),
        ("phase-averaged probability table", c2_probability_table),
        ("biased closed form vs propagator", c3_biased_closed_form),
        ("rabi identities", c4_rabi_identities),
        ("improvement from the cycling field", c5_improvement),
        ("zero-probability structure", c6_zero_probabilities),
        ("two-atom fidelity formula", c7_two_atom_formula),
        ("rk5 vs spectral", c8_method_cross_check),
        ("fixed laboratory field, qubit average", c9_fixed_field_average),
        ("determinism of presets", c10_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        failures += usize::from(!o.passed);
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}  {name}: {}", i + 1, o.detail);
    }
    println!("{}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
