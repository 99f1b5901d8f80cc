//! Gibbs states, thermal energies, and the entanglement temperature bound
//! T_E: the temperature below which the thermal energy drops under the
//! separable bound.
//!
//! All Boltzmann weights are computed relative to the ground energy, so
//! nothing overflows at any temperature down to 0, which is itself handled
//! as the (possibly degenerate) ground-space projector.  Temperatures are in
//! units of the coupling with the Boltzmann constant set to 1.

use crate::classical;
use crate::models::{build_bh_hardcore, ModelError, SectorBasis};
use crate::numkit::{eigenvalues, eigh, ComplexMatrix, NumError};
use thiserror::Error;

/// Absolute temperature tolerance of the T_E bisection.
pub const BISECTION_TOL: f64 = 1e-5;
/// Lower end of the bisection bracket.
pub const MIN_TEMPERATURE: f64 = 1e-6;
/// Eigenvalues within this relative window of the minimum count as ground
/// states at T = 0.
pub const GROUND_WINDOW: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ThermalError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("temperature must be nonnegative, got {t}")]
    BadTemperature { t: f64 },
    #[error("collective model needs an even spin count, got {n}")]
    OddN { n: usize },
    #[error("{n} sites exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("particle count {n_b} invalid for {n} sites")]
    BadFilling { n: usize, n_b: usize },
    #[error(
        "separable bound {e_sep} is not below the infinite-temperature energy {mean_energy}; \
         no finite detection temperature exists"
    )]
    UnreachableBound { e_sep: f64, mean_energy: f64 },
    #[error("level energies must be strictly increasing")]
    UnsortedLevels,
    #[error("degeneracies sum to {got}, expected {want}")]
    BadDegeneracyTotal { got: u64, want: u64 },
}

/// One point of a thermal scan: energy and witness gap at a temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    pub temperature: f64,
    pub energy: f64,
    pub bound: f64,
    pub delta_e: f64,
}

impl ThermalPoint {
    pub fn new(temperature: f64, energy: f64, bound: f64) -> Self {
        ThermalPoint {
            temperature,
            energy,
            bound,
            delta_e: energy - bound,
        }
    }

    pub fn detected(&self) -> bool {
        self.delta_e < 0.0
    }
}

/// An exact spectrum given as (energy, degeneracy) pairs, strictly
/// increasing in energy, with degeneracies summing to the full dimension.
#[derive(Debug, Clone)]
pub struct LevelSet {
    n: usize,
    levels: Vec<(f64, u64)>,
}

impl LevelSet {
    /// `n` is the spin count; degeneracies must sum to 2^n.
    pub fn new(n: usize, levels: Vec<(f64, u64)>) -> Result<Self, ThermalError> {
        if levels.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(ThermalError::UnsortedLevels);
        }
        let total: u64 = levels.iter().map(|&(_, d)| d).sum();
        let want = 1u64 << n;
        if total != want {
            return Err(ThermalError::BadDegeneracyTotal { got: total, want });
        }
        Ok(LevelSet { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[(f64, u64)] {
        &self.levels
    }

    /// Degeneracy-weighted thermal energy at temperature `t`.
    pub fn thermal_energy(&self, t: f64) -> Result<f64, ThermalError> {
        if t < 0.0 || t.is_nan() {
            return Err(ThermalError::BadTemperature { t });
        }
        let e0 = self.levels[0].0;
        if t == 0.0 {
            return Ok(e0);
        }
        let mut weight_sum = 0.0;
        let mut energy_sum = 0.0;
        for &(e, d) in &self.levels {
            let w = d as f64 * (-(e - e0) / t).exp();
            weight_sum += w;
            energy_sum += w * e;
        }
        Ok(energy_sum / weight_sum)
    }

    /// Mean energy of the flat (infinite-temperature) ensemble.
    pub fn mean_energy(&self) -> f64 {
        let dim = (1u64 << self.n) as f64;
        self.levels.iter().map(|&(e, d)| e * d as f64).sum::<f64>() / dim
    }
}

fn ground_window(e0: f64) -> f64 {
    GROUND_WINDOW * (1.0 + e0.abs())
}

/// Gibbs state exp(-H/T)/Z.  Weights are shifted by the ground energy; at
/// T = 0 the state is the equal mixture over the ground eigenspace.
pub fn thermal_state(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, ThermalError> {
    if t < 0.0 || t.is_nan() {
        return Err(ThermalError::BadTemperature { t });
    }
    let dec = eigh(h)?;
    let e0 = dec.eigenvalues[0];
    let weights: Vec<f64> = dec
        .eigenvalues
        .iter()
        .map(|&e| {
            if t == 0.0 {
                if e - e0 <= ground_window(e0) {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-(e - e0) / t).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let dim = h.rows();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for (k, &w) in weights.iter().enumerate() {
        if w < 1e-300 {
            continue;
        }
        let v = dec.vector(k);
        let scale = w / z;
        for i in 0..dim {
            let vi = v[i] * scale;
            for (j, vj) in v.iter().enumerate() {
                rho.add_to(i, j, vi * vj.conj());
            }
        }
    }
    Ok(rho)
}

/// Thermal energy from an already-computed spectrum; never materializes the
/// density matrix.  At T = 0 this is the mean over the ground window.
pub fn thermal_energy_from_spectrum(spectrum: &[f64], t: f64) -> Result<f64, ThermalError> {
    if t < 0.0 || t.is_nan() {
        return Err(ThermalError::BadTemperature { t });
    }
    let e0 = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
    let mut weight_sum = 0.0;
    let mut energy_sum = 0.0;
    for &e in spectrum {
        let w = if t == 0.0 {
            if e - e0 <= ground_window(e0) {
                1.0
            } else {
                0.0
            }
        } else {
            (-(e - e0) / t).exp()
        };
        weight_sum += w;
        energy_sum += w * e;
    }
    Ok(energy_sum / weight_sum)
}

/// Thermal energy Tr(H rho_T) via the spectral sum.
pub fn thermal_energy(h: &ComplexMatrix, t: f64) -> Result<f64, ThermalError> {
    let spectrum = eigenvalues(h)?;
    thermal_energy_from_spectrum(&spectrum, t)
}

/// Shared bisection on g(T) = thermal_energy(T) - e_sep, which is monotone
/// increasing in T.  Assumes g(MIN_TEMPERATURE) < 0 (checked by callers via
/// the ground energy) and g(infinity) > 0 (checked via the mean energy).
fn bisect_te(energy_at: impl Fn(f64) -> f64, e_sep: f64) -> f64 {
    let mut hi = 1.0;
    while energy_at(hi) - e_sep <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = MIN_TEMPERATURE;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if energy_at(mid) - e_sep < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Detection temperature from a precomputed spectrum: the T below which the
/// thermal energy lies under `e_sep`.  Returns 0 when even the ground state
/// is not detected.
pub fn temperature_bound_from_spectrum(spectrum: &[f64], e_sep: f64) -> Result<f64, ThermalError> {
    let e0 = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
    if e0 >= e_sep {
        return Ok(0.0);
    }
    let mean = spectrum.iter().sum::<f64>() / spectrum.len() as f64;
    if e_sep >= mean {
        return Err(ThermalError::UnreachableBound {
            e_sep,
            mean_energy: mean,
        });
    }
    Ok(bisect_te(
        |t| thermal_energy_from_spectrum(spectrum, t).expect("t > 0 in bisection"),
        e_sep,
    ))
}

/// Detection temperature T_E of a Hamiltonian against a separable bound.
pub fn temperature_bound(h: &ComplexMatrix, e_sep: f64) -> Result<f64, ThermalError> {
    let spectrum = eigenvalues(h)?;
    temperature_bound_from_spectrum(&spectrum, e_sep)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (n - k + i) as u128 / i as u128;
    }
    c
}

/// Largest spin count for the collective level formula (combinatorics only).
pub const MAX_LEVEL_SPINS: usize = 40;

/// Exact spectrum of the collective model by total-spin sectors: energies
/// E_j = 4j(j+1) with degeneracy (2j+1)^2 / (n/2+j+1) * binomial(n, n/2+j)
/// for j = 0..n/2.  The division is exact in integers and asserted so.
pub fn collective_levels(n: usize) -> Result<LevelSet, ThermalError> {
    if n % 2 == 1 {
        return Err(ThermalError::OddN { n });
    }
    if n == 0 || n > MAX_LEVEL_SPINS {
        return Err(ThermalError::TooLarge {
            n,
            max: MAX_LEVEL_SPINS,
        });
    }
    let half = n / 2;
    let mut levels = Vec::with_capacity(half + 1);
    for j in 0..=half {
        let numer = (2 * j + 1).pow(2) as u128 * binomial(n, half + j);
        let denom = (half + j + 1) as u128;
        assert_eq!(numer % denom, 0, "degeneracy formula must divide exactly");
        let degeneracy = (numer / denom) as u64;
        let energy = (4 * j * (j + 1)) as f64;
        levels.push((energy, degeneracy));
    }
    LevelSet::new(n, levels)
}

/// Thermal energy of the collective model from its exact level structure.
pub fn collective_thermal_energy(n: usize, t: f64) -> Result<f64, ThermalError> {
    collective_levels(n)?.thermal_energy(t)
}

/// Detection temperature of the collective model against its separable
/// bound 2n, computed from the exact levels (no diagonalization).
pub fn collective_temperature_bound(n: usize) -> Result<f64, ThermalError> {
    let levels = collective_levels(n)?;
    let e_sep = 2.0 * n as f64;
    if levels.levels()[0].0 >= e_sep {
        return Ok(0.0);
    }
    let mean = levels.mean_energy();
    if e_sep >= mean {
        return Err(ThermalError::UnreachableBound {
            e_sep,
            mean_energy: mean,
        });
    }
    Ok(bisect_te(
        |t| levels.thermal_energy(t).expect("t > 0 in bisection"),
        e_sep,
    ))
}

/// Large-n closed forms at fixed t/n: energy 3nt/(t+2n) and T_E = 4n.
pub fn collective_asymptotics(n: usize, t: f64) -> (f64, f64) {
    let nf = n as f64;
    (3.0 * nf * t / (t + 2.0 * nf), 4.0 * nf)
}

/// Detection temperature for the hard-core boson ring: the Gibbs state of
/// the full hard-core space (every particle-number sector, zero chemical
/// potential) against the fixed-filling separable bound.  At half filling
/// the grand ensemble's mean particle number matches n_b by particle-hole
/// symmetry, which is the physically calibrated case.
pub fn bh_temperature_bound(
    n_sites: usize,
    n_b: usize,
    hop: f64,
    periodic: bool,
) -> Result<f64, ThermalError> {
    let e_sep = classical::bh_bound(n_sites, n_b, hop)
        .map_err(|_| ThermalError::BadFilling { n: n_sites, n_b })?;
    let mut spectrum = Vec::with_capacity(1 << n_sites);
    for sector in 0..=n_sites {
        let basis = SectorBasis::new(n_sites, sector)?;
        let h = build_bh_hardcore(&basis, hop, periodic)?;
        spectrum.extend(eigenvalues(&h)?);
    }
    temperature_bound_from_spectrum(&spectrum, e_sep)
}
