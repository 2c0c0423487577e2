//! Excitation-conserving composite Hilbert space of `N` atoms and two modes.
//!
//! Atomic levels are labelled in the working (primed) basis and the photon
//! numbers count quanta in the rotated modes `b₁` (clone mode) and `b₂`
//! (orthogonal mode). The same enumeration is reused for the unrotated frame,
//! where the labels are read as `|e₁⟩, |e₂⟩` and `a₁, a₂`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use ndarray::Array1;

use crate::{Error, Result, C64};

/// One atomic level. `Ground` carries no excitation, the other three carry one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLevel {
    Ground,
    ExcitedOne,
    ExcitedTwo,
    Metastable,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 4] = [
        AtomLevel::Ground,
        AtomLevel::ExcitedOne,
        AtomLevel::ExcitedTwo,
        AtomLevel::Metastable,
    ];

    pub fn excitation(self) -> u32 {
        match self {
            AtomLevel::Ground => 0,
            _ => 1,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn symbol(self) -> &'static str {
        match self {
            AtomLevel::Ground => "g",
            AtomLevel::ExcitedOne => "e1",
            AtomLevel::ExcitedTwo => "e2",
            AtomLevel::Metastable => "f",
        }
    }
}

/// A product configuration: one level per atom plus `(n₁, n₂)` photons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub atoms: Vec<AtomLevel>,
    pub photons: (u32, u32),
}

impl BasisState {
    pub fn new(atoms: Vec<AtomLevel>, n1: u32, n2: u32) -> Self {
        Self {
            atoms,
            photons: (n1, n2),
        }
    }

    pub fn excitation(&self) -> u32 {
        self.photons.0 + self.photons.1 + self.atoms.iter().map(|a| a.excitation()).sum::<u32>()
    }
}

// Atom levels major, then n₁ descending.
impl Ord for BasisState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.atoms
            .cmp(&other.atoms)
            .then_with(|| other.photons.0.cmp(&self.photons.0))
            .then_with(|| other.photons.1.cmp(&self.photons.1))
    }
}

impl PartialOrd for BasisState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a.symbol())?;
        }
        write!(f, "; {},{}>", self.photons.0, self.photons.1)
    }
}

/// Ordered basis of one excitation sector.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertBasis {
    n_atoms: usize,
    excitation: u32,
    include_metastable: bool,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl HilbertBasis {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn excitation(&self) -> u32 {
        self.excitation
    }

    pub fn has_metastable(&self) -> bool {
        self.include_metastable
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &BasisState {
        &self.states[i]
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

/// Enumerates every configuration of `n_atoms` atoms and two modes carrying
/// exactly `excitation` quanta. With `include_metastable = false` the basis is
/// the pure three-level V-system.
pub fn enumerate_basis(n_atoms: usize, excitation: u32, include_metastable: bool) -> Result<HilbertBasis> {
    if n_atoms == 0 {
        return Err(Error::Config("at least one atom is required".into()));
    }
    let levels: &[AtomLevel] = if include_metastable {
        &AtomLevel::ALL
    } else {
        &AtomLevel::ALL[..3]
    };

    let mut states = Vec::new();
    let mut atoms = vec![AtomLevel::Ground; n_atoms];
    let total = levels.len().pow(n_atoms as u32);
    for code in 0..total {
        let mut c = code;
        for slot in atoms.iter_mut().rev() {
            *slot = levels[c % levels.len()];
            c /= levels.len();
        }
        let atomic: u32 = atoms.iter().map(|a| a.excitation()).sum();
        if atomic > excitation {
            continue;
        }
        let photons = excitation - atomic;
        for n1 in (0..=photons).rev() {
            states.push(BasisState::new(atoms.clone(), n1, photons - n1));
        }
    }
    states.sort();

    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(HilbertBasis {
        n_atoms,
        excitation,
        include_metastable,
        states,
        index,
    })
}

/// Complex amplitudes over a shared basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<HilbertBasis>,
    amplitudes: Array1<C64>,
}

impl StateVector {
    pub fn new(basis: Arc<HilbertBasis>, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::BasisMismatch);
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn zeros(basis: Arc<HilbertBasis>) -> Self {
        let n = basis.len();
        Self {
            basis,
            amplitudes: Array1::zeros(n),
        }
    }

    pub fn basis(&self) -> &Arc<HilbertBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut Array1<C64> {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, state: &BasisState) -> C64 {
        self.basis
            .index_of(state)
            .map_or(C64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest componentwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if !Arc::ptr_eq(&self.basis, &other.basis) && self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Single-atom amplitudes over `[g, e1, e2, f]`.
pub type AtomAmplitudes = [C64; 4];

/// Builds the product state `⊗_μ |atom_μ⟩ ⊗ |field⟩`. `field` lists
/// `((n₁, n₂), amplitude)` pairs; every term must land in the basis sector.
pub fn product_state(
    basis: &Arc<HilbertBasis>,
    atoms: &[AtomAmplitudes],
    field: &[((u32, u32), C64)],
) -> Result<StateVector> {
    if atoms.len() != basis.n_atoms() {
        return Err(Error::PhaseCount {
            expected: basis.n_atoms(),
            got: atoms.len(),
        });
    }
    let mut psi = StateVector::zeros(basis.clone());
    let mut levels = vec![AtomLevel::Ground; atoms.len()];
    let n_configs = 4usize.pow(atoms.len() as u32);
    for code in 0..n_configs {
        let mut c = code;
        let mut weight = C64::new(1.0, 0.0);
        for (slot, amps) in levels.iter_mut().zip(atoms).rev() {
            let level = AtomLevel::ALL[c % 4];
            c /= 4;
            *slot = level;
            weight *= amps[level.index()];
        }
        if weight == C64::new(0.0, 0.0) {
            continue;
        }
        for &((n1, n2), amp) in field {
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            let state = BasisState::new(levels.clone(), n1, n2);
            let i = basis.index_of(&state).ok_or(Error::ExcitationMismatch {
                basis: basis.excitation(),
                requested: state.excitation(),
            })?;
            psi.amplitudes[i] += weight * amp;
        }
    }
    Ok(psi)
}

/// The cloner's initial state: each atom in `(|e₁⟩ + e^{iθ_μ}|e₂⟩)/√2` and a
/// single photon in the clone mode.
pub fn initial_state(basis: &Arc<HilbertBasis>, phases: &[f64]) -> Result<StateVector> {
    initial_state_with_field(basis, phases, &[((1, 0), C64::new(1.0, 0.0))])
}

/// Same atomic preparation as [`initial_state`] with an arbitrary one-photon
/// field, e.g. `α|1,0⟩ + β|0,1⟩` in the unrotated frame.
pub fn initial_state_with_field(
    basis: &Arc<HilbertBasis>,
    phases: &[f64],
    field: &[((u32, u32), C64)],
) -> Result<StateVector> {
    if phases.len() != basis.n_atoms() {
        return Err(Error::PhaseCount {
            expected: basis.n_atoms(),
            got: phases.len(),
        });
    }
    let requested = basis.n_atoms() as u32 + 1;
    if basis.excitation() != requested {
        return Err(Error::ExcitationMismatch {
            basis: basis.excitation(),
            requested,
        });
    }
    let zero = C64::new(0.0, 0.0);
    let atoms: Vec<AtomAmplitudes> = phases
        .iter()
        .map(|&theta| {
            [
                zero,
                C64::new(FRAC_1_SQRT_2, 0.0),
                C64::from_polar(FRAC_1_SQRT_2, theta),
                zero,
            ]
        })
        .collect();
    product_state(basis, &atoms, field)
}
