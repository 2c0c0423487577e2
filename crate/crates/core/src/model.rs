//! Qubit-dependent mode and bias transforms and the interaction Hamiltonian.

use std::sync::Arc;

use ndarray::Array2;

use crate::hilbert::{AtomLevel, BasisState, HilbertBasis};
use crate::{Error, Result, C64};

const QUBIT_NORM_TOL: f64 = 1e-12;

/// Input photonic qubit `α a₁† + β a₂†` acting on the vacuum. Its image is the
/// clone mode `b₁†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    alpha: C64,
    beta: C64,
}

impl QubitState {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > QUBIT_NORM_TOL {
            return Err(Error::UnnormalizedQubit { norm_sq });
        }
        Ok(Self { alpha, beta })
    }

    /// Bloch-sphere parametrization `α = cos(χ/2)`, `β = sin(χ/2)e^{iφ}`.
    pub fn from_bloch(chi: f64, phi: f64) -> Self {
        Self {
            alpha: C64::new((chi / 2.0).cos(), 0.0),
            beta: C64::from_polar((chi / 2.0).sin(), phi),
        }
    }

    /// The qubit `|1,0⟩`, for which the rotated and unrotated frames coincide.
    pub fn horizontal() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }
}

/// Unrotated-mode coefficients of `b₂†`: `(−β*, α*)`.
pub fn orthogonal_mode(q: &QubitState) -> (C64, C64) {
    (-q.beta.conj(), q.alpha.conj())
}

/// Maps laboratory field multipliers `(G₁, G₂)` to their images in the rotated
/// atomic basis: `G′₁ = α*G₁ + β*G₂`, `G′₂ = −βG₁ + αG₂`.
pub fn primed_bias(q: &QubitState, lab: (C64, C64)) -> (C64, C64) {
    let (g1, g2) = lab;
    (
        q.alpha.conj() * g1 + q.beta.conj() * g2,
        -q.beta * g1 + q.alpha * g2,
    )
}

/// Inverse of [`primed_bias`].
pub fn lab_bias(q: &QubitState, primed: (C64, C64)) -> (C64, C64) {
    let (p1, p2) = primed;
    (q.alpha * p1 - q.beta.conj() * p2, q.beta * p1 + q.alpha.conj() * p2)
}

/// Laboratory multipliers for which the rotated field only drives
/// `|e′₂⟩ ↔ |f⟩` with strength `strength`, i.e. `G′₁ = 0`, `G′₂ = strength`.
pub fn universal_bias(q: &QubitState, strength: f64) -> (C64, C64) {
    let (c1, c2) = orthogonal_mode(q);
    (c1 * strength, c2 * strength)
}

/// Classical cycling field as laboratory multipliers plus their rotated images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasField {
    pub g1: C64,
    pub g2: C64,
    pub primed: (C64, C64),
}

impl BiasField {
    pub fn from_lab(q: &QubitState, g1: C64, g2: C64) -> Self {
        Self {
            g1,
            g2,
            primed: primed_bias(q, (g1, g2)),
        }
    }

    pub fn matched(q: &QubitState, strength: f64) -> Self {
        let (g1, g2) = universal_bias(q, strength);
        Self::from_lab(q, g1, g2)
    }
}

/// How the cycling field is chosen for a given input qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BiasMode {
    /// No cycling field: the pure V-system.
    None,
    /// Field tuned to the qubit so that `G′₁ = 0`, `G′₂ = strength`.
    Matched(f64),
    /// Field fixed in the laboratory frame; the rotated couplings depend on the qubit.
    Lab(C64, C64),
    /// Rotated couplings `(G′₁, G′₂)` prescribed directly, independent of the qubit.
    Primed(C64, C64),
}

impl BiasMode {
    pub fn primed(&self, q: &QubitState) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        match *self {
            BiasMode::None => (zero, zero),
            BiasMode::Matched(s) => (zero, C64::new(s, 0.0)),
            BiasMode::Lab(g1, g2) => primed_bias(q, (g1, g2)),
            BiasMode::Primed(g1p, g2p) => (g1p, g2p),
        }
    }

    /// Laboratory multipliers `(G₁, G₂)` realizing this mode for `q`.
    pub fn lab(&self, q: &QubitState) -> (C64, C64) {
        lab_bias(q, self.primed(q))
    }

    pub fn is_none(&self) -> bool {
        match *self {
            BiasMode::None => true,
            BiasMode::Matched(s) => s == 0.0,
            BiasMode::Lab(a, b) | BiasMode::Primed(a, b) => a.norm() == 0.0 && b.norm() == 0.0,
        }
    }

    /// Whether the fidelity is the same for every input qubit.
    pub fn is_universal(&self) -> bool {
        !matches!(self, BiasMode::Lab(..)) || self.is_none()
    }
}

/// Dense interaction Hamiltonian on one excitation sector, in units of `ħg`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    basis: Arc<HilbertBasis>,
    matrix: Array2<C64>,
}

impl Hamiltonian {
    pub fn basis(&self) -> &Arc<HilbertBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `max |H − H†|` over all elements.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm());
            }
        }
        worst
    }
}

/// Builds `Σ_μ [ |e′₁⟩⟨g| b₁ + |e′₂⟩⟨g| b₂ + G′₁|e′₁⟩⟨f| + G′₂|e′₂⟩⟨f| ] + h.c.`
///
/// Read in the unrotated frame (`e₁, e₂`, `a₁, a₂`) the same matrix with
/// laboratory multipliers `(G₁, G₂)` is the laboratory Hamiltonian.
pub fn build_hamiltonian(basis: &Arc<HilbertBasis>, bias_primed: (C64, C64)) -> Result<Hamiltonian> {
    let (g1p, g2p) = bias_primed;
    let biased = g1p.norm() > 0.0 || g2p.norm() > 0.0;
    if biased && !basis.has_metastable() {
        return Err(Error::BiasWithoutMetastable);
    }

    let n = basis.len();
    let mut h = Array2::<C64>::zeros((n, n));
    let mut set = |from: &BasisState, to: BasisState, value: C64| {
        if value == C64::new(0.0, 0.0) {
            return;
        }
        if let Some(j) = basis.index_of(&to) {
            let i = basis.index_of(from).expect("source state belongs to the basis");
            // ⟨to|H|from⟩ = value, plus the conjugate element
            h[[j, i]] += value;
            h[[i, j]] += value.conj();
        }
    };

    for from in basis.states() {
        let (n1, n2) = from.photons;
        for (mu, level) in from.atoms.iter().enumerate() {
            let with = |l: AtomLevel, p1: u32, p2: u32| {
                let mut atoms = from.atoms.clone();
                atoms[mu] = l;
                BasisState::new(atoms, p1, p2)
            };
            match level {
                AtomLevel::Ground => {
                    if n1 > 0 {
                        set(from, with(AtomLevel::ExcitedOne, n1 - 1, n2), C64::new((n1 as f64).sqrt(), 0.0));
                    }
                    if n2 > 0 {
                        set(from, with(AtomLevel::ExcitedTwo, n1, n2 - 1), C64::new((n2 as f64).sqrt(), 0.0));
                    }
                }
                AtomLevel::Metastable => {
                    set(from, with(AtomLevel::ExcitedOne, n1, n2), g1p);
                    set(from, with(AtomLevel::ExcitedTwo, n1, n2), g2p);
                }
                _ => {}
            }
        }
    }

    Ok(Hamiltonian {
        basis: basis.clone(),
        matrix: h,
    })
}
