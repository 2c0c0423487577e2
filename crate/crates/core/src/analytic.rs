//! Closed-form single-atom solutions.
//!
//! The unbiased amplitudes are expressed in the unrotated frame (atomic
//! `|e₁⟩, |e₂⟩`, photon modes `a₁, a₂`) for an arbitrary input qubit; the biased
//! ones in the rotated frame with `G′₁ = 0`. Both serve as ground truth for
//! [`crate::dynamics`].

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::sync::Arc;

use crate::hilbert::{AtomLevel, BasisState, HilbertBasis, StateVector};
use crate::model::QubitState;
use crate::observables::ProbabilityTable;
use crate::{Error, Result, C64};

/// Below this cycling strength the biased closed form is singular and the
/// unbiased solution is used instead.
pub const DEGENERATE_BIAS: f64 = 1e-8;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

/// Amplitudes of the seven states reachable without a cycling field.
/// Superscripts `mn` are the photon numbers in `a₁, a₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnbiasedAmplitudes {
    pub e1_10: C64,
    pub g_20: C64,
    pub e2_10: C64,
    pub e1_01: C64,
    pub g_11: C64,
    pub g_02: C64,
    pub e2_01: C64,
}

impl UnbiasedAmplitudes {
    pub fn entries(&self) -> [(BasisState, C64); 7] {
        use AtomLevel::*;
        [
            (BasisState::new(vec![ExcitedOne], 1, 0), self.e1_10),
            (BasisState::new(vec![Ground], 2, 0), self.g_20),
            (BasisState::new(vec![ExcitedTwo], 1, 0), self.e2_10),
            (BasisState::new(vec![ExcitedOne], 0, 1), self.e1_01),
            (BasisState::new(vec![Ground], 1, 1), self.g_11),
            (BasisState::new(vec![Ground], 0, 2), self.g_02),
            (BasisState::new(vec![ExcitedTwo], 0, 1), self.e2_01),
        ]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Places the amplitudes on a one-atom, two-excitation basis.
    pub fn to_state(&self, basis: &Arc<HilbertBasis>) -> Result<StateVector> {
        scatter(basis, &self.entries())
    }
}

fn scatter(basis: &Arc<HilbertBasis>, entries: &[(BasisState, C64)]) -> Result<StateVector> {
    let mut psi = StateVector::zeros(basis.clone());
    for (s, c) in entries {
        let idx = basis.index_of(s).ok_or(Error::BasisMismatch)?;
        psi.amplitudes_mut()[idx] = *c;
    }
    Ok(psi)
}

/// Unrotated-frame amplitudes at time `tau` for the atom prepared in
/// `(|e₁⟩ + e^{iθ}|e₂⟩)/√2` and the photon in `α|1,0⟩ + β|0,1⟩`.
pub fn amplitudes_unbiased(q: &QubitState, theta: f64, tau: f64) -> UnbiasedAmplitudes {
    let (alpha, beta) = (q.alpha(), q.beta());
    let ph = C64::from_polar(1.0, theta);
    let (s, c) = (SQRT_2 * tau).sin_cos();
    let r = FRAC_1_SQRT_2;
    let sum = beta + alpha * ph;
    UnbiasedAmplitudes {
        e1_10: alpha * r * c,
        g_20: -i() * alpha * r * s,
        e2_10: ((alpha * ph - beta) + sum * c) * (r / 2.0),
        e1_01: ((beta - alpha * ph) + sum * c) * (r / 2.0),
        g_11: -i() * sum * (s / 2.0),
        g_02: -i() * beta * ph * r * s,
        e2_01: beta * ph * r * c,
    }
}

/// Phase-averaged clone-mode statistics without a cycling field.
pub fn theta_avg_probs_unbiased(tau: f64) -> ProbabilityTable {
    let (s, c) = (SQRT_2 * tau).sin_cos();
    ProbabilityTable::from_entries([
        ((2, 0), 0.5 * s * s),
        ((1, 1), 0.25 * s * s),
        ((0, 1), 0.125 * c * c - 0.25 * c + 0.125),
        ((1, 0), 0.625 * c * c + 0.25 * c + 0.125),
    ])
}

/// `3/4 + cos(√2τ)/4`.
pub fn fidelity_unbiased(tau: f64) -> f64 {
    0.75 + 0.25 * (SQRT_2 * tau).cos()
}

/// Normal-mode frequencies and mixing coefficients of the biased single atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiPair {
    pub g2p: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub big_a: C64,
    pub big_b: C64,
}

/// `Ω₁,₂ = (G′₂² + 2 ± √(G′₂⁴ + 4))^{1/2}` and the coefficients `A`, `B`.
pub fn rabi_pair(g2p: f64, theta: f64) -> Result<RabiPair> {
    if !(g2p > DEGENERATE_BIAS) || !g2p.is_finite() {
        return Err(Error::DegenerateBias(g2p));
    }
    let g2 = g2p * g2p;
    let root = (g2 * g2 + 4.0).sqrt();
    let big = g2 + 2.0 + root;
    let omega1 = big.sqrt();
    // (G′₂² + 2 − root) rewritten without cancellation
    let omega2 = (4.0 * g2 / big).sqrt();
    let ph = C64::from_polar(1.0, theta);
    let big_a = 0.5 * i() * ph * (omega2 * omega2 - 2.0 * g2 - 4.0) / (omega1 * root);
    let big_b = -0.5 * i() * ph * (omega1 * omega1 - 2.0 * g2 - 4.0) / (omega2 * root);
    Ok(RabiPair {
        g2p,
        omega1,
        omega2,
        big_a,
        big_b,
    })
}

/// Rotated-frame amplitudes of the six states reachable with `G′₁ = 0`.
/// Superscripts are photon numbers in `b₁, b₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedAmplitudes {
    pub g_11: C64,
    pub f_10: C64,
    pub e2_10: C64,
    pub e1_01: C64,
    pub e1_10: C64,
    pub g_20: C64,
}

impl BiasedAmplitudes {
    pub fn entries(&self) -> [(BasisState, C64); 6] {
        use AtomLevel::*;
        [
            (BasisState::new(vec![Ground], 1, 1), self.g_11),
            (BasisState::new(vec![Metastable], 1, 0), self.f_10),
            (BasisState::new(vec![ExcitedTwo], 1, 0), self.e2_10),
            (BasisState::new(vec![ExcitedOne], 0, 1), self.e1_01),
            (BasisState::new(vec![ExcitedOne], 1, 0), self.e1_10),
            (BasisState::new(vec![Ground], 2, 0), self.g_20),
        ]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Places the amplitudes on a one-atom, two-excitation basis with the
    /// metastable level.
    pub fn to_state(&self, basis: &Arc<HilbertBasis>) -> Result<StateVector> {
        scatter(basis, &self.entries())
    }

    /// Clone-mode statistics. The moduli do not depend on the preparation
    /// phase, so this is also the phase-averaged table.
    pub fn probabilities(&self) -> ProbabilityTable {
        ProbabilityTable::from_entries([
            ((2, 0), self.g_20.norm_sqr()),
            ((1, 1), self.g_11.norm_sqr()),
            ((1, 0), self.f_10.norm_sqr() + self.e2_10.norm_sqr() + self.e1_10.norm_sqr()),
            ((0, 1), self.e1_01.norm_sqr()),
        ])
    }
}

/// Evaluates the biased closed form for a given [`RabiPair`].
pub fn amplitudes_from_pair(pair: &RabiPair, tau: f64) -> BiasedAmplitudes {
    let RabiPair {
        g2p,
        omega1: w1,
        omega2: w2,
        big_a: a,
        big_b: b,
    } = *pair;
    let g2 = g2p * g2p;
    let (s1, c1) = (w1 / SQRT_2 * tau).sin_cos();
    let (s2, c2) = (w2 / SQRT_2 * tau).sin_cos();
    let (s0, c0) = (SQRT_2 * tau).sin_cos();
    let pre = 1.0 / (2.0 * SQRT_2 * g2);
    BiasedAmplitudes {
        g_11: a * s1 + b * s2,
        f_10: ((w1 * w1 - 4.0) * a * s1 + (w2 * w2 - 4.0) * b * s2) / (2.0 * g2p),
        e2_10: i() * pre * (w1 * (w1 * w1 - 4.0) * a * c1 + w2 * (w2 * w2 - 4.0) * b * c2),
        e1_01: -i() * pre * (w1 * (w1 * w1 - 2.0 * g2 - 4.0) * a * c1 + w2 * (w2 * w2 - 2.0 * g2 - 4.0) * b * c2),
        e1_10: C64::new(FRAC_1_SQRT_2 * c0, 0.0),
        g_20: C64::new(0.0, -FRAC_1_SQRT_2 * s0),
    }
}

/// Rotated-frame amplitudes with `G′₁ = 0`, `G′₂ = g2p`, atom prepared in
/// `(|e′₁⟩ + e^{iθ}|e′₂⟩)/√2` and the photon in the clone mode.
pub fn amplitudes_biased(g2p: f64, theta: f64, tau: f64) -> Result<BiasedAmplitudes> {
    Ok(amplitudes_from_pair(&rabi_pair(g2p, theta)?, tau))
}

/// Phase-averaged clone-mode statistics with the matched cycling field. Falls
/// back to the unbiased formulas when `|g2p|` is degenerate.
pub fn theta_avg_probs_biased(g2p: f64, tau: f64) -> ProbabilityTable {
    let g = g2p.abs();
    if g <= DEGENERATE_BIAS {
        return theta_avg_probs_unbiased(tau);
    }
    // every chain amplitude carries one factor e^{iθ}; the moduli are θ-free
    amplitudes_biased(g, 0.0, tau)
        .expect("non-degenerate bias")
        .probabilities()
}

/// `F = 1 − [p̃ₐ(0,1) + p̃ₐ(1,1)/2]` for the matched cycling field.
pub fn fidelity_biased(g2p: f64, tau: f64) -> f64 {
    let p = theta_avg_probs_biased(g2p, tau);
    1.0 - (p.get(0, 1) + 0.5 * p.get(1, 1))
}
