//! Photon statistics, fidelity and the averages over preparation phases and
//! input qubits.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::exec::Exec;
use crate::hilbert::{AtomLevel, StateVector};
use crate::model::QubitState;
use crate::{Error, Result, C64};

/// Largest photon number [`convert_fock_basis`] accepts.
pub const FOCK_CAP: u32 = 16;

const VACUUM_TOL: f64 = 1e-10;

/// `p(k, l)`: probability of `k` photons in the clone mode and `l` in the
/// orthogonal mode. Missing entries are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbabilityTable {
    entries: BTreeMap<(u32, u32), f64>,
}

impl ProbabilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((u32, u32), f64)>) -> Self {
        let mut t = Self::new();
        for (kl, p) in entries {
            t.add(kl.0, kl.1, p);
        }
        t
    }

    pub fn get(&self, k: u32, l: u32) -> f64 {
        self.entries.get(&(k, l)).copied().unwrap_or(0.0)
    }

    pub fn add(&mut self, k: u32, l: u32, p: f64) {
        *self.entries.entry((k, l)).or_insert(0.0) += p;
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.entries.iter().map(|(&kl, &p)| (kl, p))
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Largest photon number with a stored entry.
    pub fn max_photons(&self) -> u32 {
        self.entries.keys().map(|(k, l)| k + l).max().unwrap_or(0)
    }
}

/// Weighted accumulation used by the averaging routines.
pub trait Accumulate: Sized {
    fn scaled(&self, w: f64) -> Self;
    fn add_scaled(&mut self, other: &Self, w: f64);
}

impl Accumulate for f64 {
    fn scaled(&self, w: f64) -> Self {
        self * w
    }

    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += other * w;
    }
}

impl Accumulate for ProbabilityTable {
    fn scaled(&self, w: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|(&kl, &p)| (kl, p * w)).collect(),
        }
    }

    fn add_scaled(&mut self, other: &Self, w: f64) {
        for (&(k, l), &p) in &other.entries {
            self.add(k, l, p * w);
        }
    }
}

impl<T: Accumulate> Accumulate for Vec<T> {
    fn scaled(&self, w: f64) -> Self {
        self.iter().map(|x| x.scaled(w)).collect()
    }

    fn add_scaled(&mut self, other: &Self, w: f64) {
        assert_eq!(self.len(), other.len(), "accumulating series of different length");
        for (a, b) in self.iter_mut().zip(other) {
            a.add_scaled(b, w);
        }
    }
}

/// Weighted sum in input order.
fn weighted_sum<T: Accumulate>(values: &[T], weights: &[f64]) -> Option<T> {
    let mut it = values.iter().zip(weights);
    let (first, &w0) = it.next()?;
    let mut acc = first.scaled(w0);
    for (v, &w) in it {
        acc.add_scaled(v, w);
    }
    Some(acc)
}

/// Mean photon numbers in the clone mode and in both modes.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonStats {
    pub table: ProbabilityTable,
    pub n_right: f64,
    pub n_all: f64,
}

impl PhotonStats {
    pub fn from_table(table: ProbabilityTable) -> Self {
        let (n_right, n_all) = mean_photons(&table);
        Self { table, n_right, n_all }
    }
}

/// Diagonal of the reduced field density matrix in the state's own mode
/// frame: `p(k,l) = Σ_atoms |c(atoms; k,l)|²`.
pub fn photon_probabilities(psi: &StateVector) -> ProbabilityTable {
    let mut t = ProbabilityTable::new();
    for (s, c) in psi.basis().states().iter().zip(psi.amplitudes()) {
        t.add(s.photons.0, s.photons.1, c.norm_sqr());
    }
    t
}

/// Clone-mode statistics of a state written in the unrotated `a₁, a₂` modes:
/// the field part of each atomic configuration is re-expanded in the `b`
/// modes defined by `q` before taking moduli.
pub fn photon_probabilities_in_modes(psi: &StateVector, q: &QubitState) -> Result<ProbabilityTable> {
    type Field = Vec<((u32, u32), C64)>;
    let mut fields: BTreeMap<Vec<AtomLevel>, Field> = BTreeMap::new();
    for (s, &c) in psi.basis().states().iter().zip(psi.amplitudes()) {
        fields.entry(s.atoms.clone()).or_default().push((s.photons, c));
    }
    let mut t = ProbabilityTable::new();
    for field in fields.values() {
        for ((k, l), c) in convert_fock_basis(field, q)? {
            t.add(k, l, c.norm_sqr());
        }
    }
    Ok(t)
}

/// `F = Σ_{k+l≥1} p(k,l)·k/(k+l)`.
pub fn fidelity(table: &ProbabilityTable) -> Result<f64> {
    let vacuum = table.get(0, 0);
    if vacuum.abs() > VACUUM_TOL {
        return Err(Error::VacuumProbability(vacuum));
    }
    Ok(table
        .iter()
        .filter(|((k, l), _)| k + l > 0)
        .map(|((k, l), p)| p * k as f64 / (k + l) as f64)
        .sum())
}

/// Two-atom shortcut `1 − [p(2,1)/3 + 2p(1,2)/3 + p(1,1)/2 + p(0,1) + p(0,2)]`,
/// complete only when `p(0,3)` vanishes.
pub fn fidelity_two_atom(table: &ProbabilityTable) -> f64 {
    1.0 - (table.get(2, 1) / 3.0
        + 2.0 * table.get(1, 2) / 3.0
        + 0.5 * table.get(1, 1)
        + table.get(0, 1)
        + table.get(0, 2))
}

/// `(Σ k·p(k,l), Σ (k+l)·p(k,l))`.
pub fn mean_photons(table: &ProbabilityTable) -> (f64, f64) {
    table.iter().fold((0.0, 0.0), |(r, a), ((k, l), p)| {
        (r + k as f64 * p, a + (k + l) as f64 * p)
    })
}

/// Every phase tuple of the uniform grid `θ ∈ {2πj/M}` for `n_angles` angles,
/// in lexicographic order.
pub fn phase_grid(n_angles: usize, grid_m: usize) -> Vec<Vec<f64>> {
    let total = grid_m.pow(n_angles as u32);
    (0..total)
        .map(|code| {
            let mut c = code;
            let mut phases = vec![0.0; n_angles];
            for slot in phases.iter_mut().rev() {
                *slot = TAU * (c % grid_m) as f64 / grid_m as f64;
                c /= grid_m;
            }
            phases
        })
        .collect()
}

/// Uniform average of `f` over the product phase grid. Exact for functions
/// that are trigonometric polynomials of degree below `grid_m` in each angle;
/// the photon probabilities have degree one.
pub fn phase_average<T, F>(n_angles: usize, grid_m: usize, exec: Exec, f: F) -> Result<T>
where
    T: Accumulate + Send,
    F: Fn(&[f64]) -> Result<T> + Sync + Send,
{
    if grid_m < 2 {
        return Err(Error::Config(format!("phase grid must have at least 2 points, got {grid_m}")));
    }
    let grid = phase_grid(n_angles, grid_m);
    let values = exec.try_map(&grid, |phases| f(phases))?;
    let w = vec![1.0 / grid.len() as f64; grid.len()];
    Ok(weighted_sum(&values, &w).expect("phase grid is never empty"))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature nodes for the uniform average over the Bloch sphere: Gauss–
/// Legendre in `cos χ` times a uniform `φ` grid. Weights sum to one.
pub fn bloch_nodes(quad_chi: usize, quad_phi: usize) -> Result<Vec<(QubitState, f64)>> {
    for n in [quad_chi, quad_phi] {
        if n < 4 {
            return Err(Error::QuadratureOrder { got: n, min: 4 });
        }
    }
    let (u, wu) = gauss_legendre(quad_chi);
    let mut out = Vec::with_capacity(quad_chi * quad_phi);
    for (&ui, &wi) in u.iter().zip(&wu) {
        let chi = ui.clamp(-1.0, 1.0).acos();
        for j in 0..quad_phi {
            let phi = TAU * j as f64 / quad_phi as f64;
            out.push((QubitState::from_bloch(chi, phi), wi / (2.0 * quad_phi as f64)));
        }
    }
    Ok(out)
}

/// `(1/4π)∮ f(q) dΩ` over input qubits.
pub fn bloch_average<T, F>(quad_chi: usize, quad_phi: usize, exec: Exec, f: F) -> Result<T>
where
    T: Accumulate + Send,
    F: Fn(&QubitState) -> Result<T> + Sync + Send,
{
    let nodes = bloch_nodes(quad_chi, quad_phi)?;
    let values = exec.try_map(&nodes, |(q, _)| f(q))?;
    let w: Vec<f64> = nodes.iter().map(|(_, w)| *w).collect();
    Ok(weighted_sum(&values, &w).expect("at least 16 nodes"))
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `⟨m, n−m|_a |k, n−k⟩_b` for `m, k ∈ 0..=n`, row index `m`.
fn overlap_matrix(q: &QubitState, n: u32) -> Vec<Vec<C64>> {
    let (a, b) = (q.alpha(), q.beta());
    let (c, d) = (-b.conj(), a.conj());
    let mut m = vec![vec![C64::new(0.0, 0.0); n as usize + 1]; n as usize + 1];
    for k in 0..=n {
        let l = n - k;
        let norm = 1.0 / (factorial(k) * factorial(l)).sqrt();
        // (a x + b y)^k (c x + d y)^l, coefficient of x^m y^{n−m}
        for i in 0..=k {
            let t1 = a.powu(i) * b.powu(k - i) * binomial(k, i);
            for j in 0..=l {
                let t2 = c.powu(j) * d.powu(l - j) * binomial(l, j);
                let mm = i + j;
                let fock = (factorial(mm) * factorial(n - mm)).sqrt();
                m[mm as usize][k as usize] += t1 * t2 * (fock * norm);
            }
        }
    }
    m
}

/// Re-expresses two-mode Fock amplitudes given in the `a₁, a₂` modes in the
/// `b₁, b₂` modes, `b₁† = αa₁† + βa₂†`, `b₂† = −β*a₁† + α*a₂†`. The output lists
/// every `(k, l)` of each photon-number sector present in the input.
pub fn convert_fock_basis(amps: &[((u32, u32), C64)], q: &QubitState) -> Result<Vec<((u32, u32), C64)>> {
    let mut sectors: BTreeMap<u32, Vec<C64>> = BTreeMap::new();
    for &((n1, n2), c) in amps {
        let n = n1 + n2;
        if n > FOCK_CAP {
            return Err(Error::PhotonCapExceeded { cap: FOCK_CAP, got: n });
        }
        sectors.entry(n).or_insert_with(|| vec![C64::new(0.0, 0.0); n as usize + 1])[n1 as usize] += c;
    }
    let mut out = Vec::new();
    for (n, a_amps) in sectors {
        let m = overlap_matrix(q, n);
        for k in (0..=n).rev() {
            let c: C64 = (0..=n as usize).map(|mm| m[mm][k as usize].conj() * a_amps[mm]).sum();
            out.push(((k, n - k), c));
        }
    }
    Ok(out)
}
