//! Quantum Hamiltonians for the four model families: Heisenberg, XY,
//! collective (total-spin squared), and the hard-core Bose-Hubbard chain.
//!
//! All builders use the computational basis with site 0 on the *most
//! significant* bit and bit value 0 meaning sigma_z = +1.  Matrix elements
//! are assembled by bit manipulation rather than Kronecker products, so an
//! n-spin Hamiltonian costs O(4^n * n) time and one dense allocation; the
//! Kronecker route survives in `pauli_at` (useful for building arbitrary
//! observables) and in the tests as an independent cross-check.
//!
//! Field convention: the magnetic field enters as m*B*sum(sigma_z) where m
//! is `InteractionGraph::field_multiplicity` — the number of lattice
//! directions (d) on a periodic cubic lattice and 1 elsewhere.  The closed
//! forms in module `classical` assume exactly this reading.

use crate::lattice::InteractionGraph;
use crate::numkit::{kron, ComplexMatrix, C64};
use thiserror::Error;

/// Largest spin count for dense 2^n construction (16384 x 16384 complex).
pub const MAX_SPINS: usize = 14;
/// Largest site count for the hard-core boson chain (sector dim <= 12870).
pub const MAX_BOSON_SITES: usize = 16;
/// Largest spin count for the collective model.
pub const MAX_COLLECTIVE_SPINS: usize = 12;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("site index {site} out of range for {n} sites")]
    IndexOutOfRange { site: usize, n: usize },
    #[error("{n} sites exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("collective model needs an even spin count, got {n}")]
    OddN { n: usize },
    #[error("particle count {n_particles} invalid for {n_sites} sites")]
    BadParticleCount { n_sites: usize, n_particles: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A model instance: which Hamiltonian family, on what topology, with what
/// couplings.  Parameter completeness is enforced by the variant shapes.
/// The Heisenberg exchange is fixed at J = 1 (antiferromagnetic).
#[derive(Debug, Clone)]
pub enum SpinModel {
    Heisenberg {
        graph: InteractionGraph,
        field: f64,
    },
    Xy {
        graph: InteractionGraph,
        jx: f64,
        jy: f64,
        field: f64,
    },
    Collective {
        n: usize,
    },
    BoseHubbardHardcore {
        n_sites: usize,
        n_particles: usize,
        hop: f64,
        periodic: bool,
    },
}

impl SpinModel {
    pub fn site_count(&self) -> usize {
        match self {
            SpinModel::Heisenberg { graph, .. } => graph.n(),
            SpinModel::Xy { graph, .. } => graph.n(),
            SpinModel::Collective { n } => *n,
            SpinModel::BoseHubbardHardcore { n_sites, .. } => *n_sites,
        }
    }

    pub fn graph(&self) -> Option<&InteractionGraph> {
        match self {
            SpinModel::Heisenberg { graph, .. } | SpinModel::Xy { graph, .. } => Some(graph),
            _ => None,
        }
    }

    /// Dominant XY coupling magnitude M = max(|J_x|, |J_y|).
    pub fn dominant_coupling(&self) -> Option<f64> {
        match self {
            SpinModel::Xy { jx, jy, .. } => Some(jx.abs().max(jy.abs())),
            _ => None,
        }
    }

    /// Reduced field b = |B| / M for the XY model, when M > 0.
    pub fn reduced_field(&self) -> Option<f64> {
        match self {
            SpinModel::Xy { field, .. } => {
                let m = self.dominant_coupling().unwrap();
                (m > 0.0).then(|| field.abs() / m)
            }
            _ => None,
        }
    }

    /// Builds the Hamiltonian matrix for this model.
    pub fn build(&self) -> Result<ComplexMatrix, ModelError> {
        match self {
            SpinModel::Heisenberg { graph, field } => build_heisenberg(graph, *field),
            SpinModel::Xy {
                graph,
                jx,
                jy,
                field,
            } => build_xy(graph, *jx, *jy, *field),
            SpinModel::Collective { n } => build_collective(*n),
            SpinModel::BoseHubbardHardcore {
                n_sites,
                n_particles,
                hop,
                periodic,
            } => {
                let basis = SectorBasis::new(*n_sites, *n_particles)?;
                build_bh_hardcore(&basis, *hop, *periodic)
            }
        }
    }
}

/// sigma_z eigenvalue of `site` in basis state `state` (+1 for bit 0).
#[inline]
fn z_of(state: usize, site: usize, n: usize) -> f64 {
    1.0 - 2.0 * ((state >> (n - 1 - site)) & 1) as f64
}

#[inline]
fn site_mask(site: usize, n: usize) -> usize {
    1 << (n - 1 - site)
}

/// I (x) ... (x) sigma_axis (x) ... (x) I with the Pauli factor at `site`.
pub fn pauli_at(site: usize, axis: Axis, n: usize) -> Result<ComplexMatrix, ModelError> {
    if n > MAX_SPINS {
        return Err(ModelError::TooLarge { n, max: MAX_SPINS });
    }
    if site >= n {
        return Err(ModelError::IndexOutOfRange { site, n });
    }
    let factor = match axis {
        Axis::X => ComplexMatrix::pauli_x(),
        Axis::Y => ComplexMatrix::pauli_y(),
        Axis::Z => ComplexMatrix::pauli_z(),
    };
    let mut out = ComplexMatrix::identity(1);
    for k in 0..n {
        let next = if k == site {
            &factor
        } else {
            &ComplexMatrix::identity2()
        };
        out = kron(&out, next);
    }
    Ok(out)
}

fn check_spin_count(n: usize) -> Result<(), ModelError> {
    if n > MAX_SPINS {
        return Err(ModelError::TooLarge { n, max: MAX_SPINS });
    }
    Ok(())
}

/// Antiferromagnetic Heisenberg model, J = 1:
/// sum over edges of (xx + yy + zz) plus m*B*sum(sigma_z).
pub fn build_heisenberg(graph: &InteractionGraph, field: f64) -> Result<ComplexMatrix, ModelError> {
    let n = graph.n();
    check_spin_count(n)?;
    let dim = 1usize << n;
    let eff_field = field * graph.field_multiplicity();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for state in 0..dim {
        let mut diag = 0.0;
        for site in 0..n {
            diag += eff_field * z_of(state, site, n);
        }
        for &(k, l) in graph.edges() {
            let zz = z_of(state, k, n) * z_of(state, l, n);
            diag += zz;
            if zz < 0.0 {
                // bits differ: xx + yy exchanges the pair with amplitude 2
                let flipped = state ^ site_mask(k, n) ^ site_mask(l, n);
                h.add_to(state, flipped, C64::new(2.0, 0.0));
            }
        }
        h.add_to(state, state, C64::new(diag, 0.0));
    }
    Ok(h)
}

/// XY model: sum over edges of (J_x xx + J_y yy) plus m*B*sum(sigma_z).
pub fn build_xy(
    graph: &InteractionGraph,
    jx: f64,
    jy: f64,
    field: f64,
) -> Result<ComplexMatrix, ModelError> {
    let n = graph.n();
    check_spin_count(n)?;
    let dim = 1usize << n;
    let eff_field = field * graph.field_multiplicity();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for state in 0..dim {
        let mut diag = 0.0;
        for site in 0..n {
            diag += eff_field * z_of(state, site, n);
        }
        for &(k, l) in graph.edges() {
            // xx contributes +J_x at the double flip; yy contributes
            // -J_y * z_k * z_l there (the i^2 from the two sigma_y factors)
            let zz = z_of(state, k, n) * z_of(state, l, n);
            let flipped = state ^ site_mask(k, n) ^ site_mask(l, n);
            h.add_to(state, flipped, C64::new(jx - jy * zz, 0.0));
        }
        h.add_to(state, state, C64::new(diag, 0.0));
    }
    Ok(h)
}

/// Collective model H_S = (sum sigma_x)^2 + (sum sigma_y)^2 + (sum sigma_z)^2,
/// assembled through the identity H_S = 3n*I + 2*sum_{k<l} sigma^(k).sigma^(l).
pub fn build_collective(n: usize) -> Result<ComplexMatrix, ModelError> {
    if n % 2 == 1 {
        return Err(ModelError::OddN { n });
    }
    if n > MAX_COLLECTIVE_SPINS {
        return Err(ModelError::TooLarge {
            n,
            max: MAX_COLLECTIVE_SPINS,
        });
    }
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for state in 0..dim {
        let mut diag = 3.0 * n as f64;
        for k in 0..n {
            for l in (k + 1)..n {
                let zz = z_of(state, k, n) * z_of(state, l, n);
                diag += 2.0 * zz;
                if zz < 0.0 {
                    let flipped = state ^ site_mask(k, n) ^ site_mask(l, n);
                    h.add_to(state, flipped, C64::new(4.0, 0.0));
                }
            }
        }
        h.add_to(state, state, C64::new(diag, 0.0));
    }
    Ok(h)
}

/// Occupation basis of the fixed-particle-number hard-core sector: all n-bit
/// patterns with exactly `n_particles` ones, in ascending numeric order
/// (site 0 on the most significant bit, so this is lexicographic in the
/// occupation string).
#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_sites: usize,
    n_particles: usize,
    states: Vec<usize>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, n_particles: usize) -> Result<Self, ModelError> {
        if n_sites > MAX_BOSON_SITES {
            return Err(ModelError::TooLarge {
                n: n_sites,
                max: MAX_BOSON_SITES,
            });
        }
        if n_particles > n_sites {
            return Err(ModelError::BadParticleCount {
                n_sites,
                n_particles,
            });
        }
        let states: Vec<usize> = (0..1usize << n_sites)
            .filter(|s| s.count_ones() as usize == n_particles)
            .collect();
        Ok(SectorBasis {
            n_sites,
            n_particles,
            states,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// Position of an occupation pattern in the basis ordering.
    pub fn index_of(&self, pattern: usize) -> Option<usize> {
        self.states.binary_search(&pattern).ok()
    }
}

/// Hard-core boson chain: -J * sum over chain edges of (hop right + hop left)
/// in the fixed-N_b occupation basis.  The on-site repulsion term vanishes
/// identically under the single-occupancy constraint.  Chain topology matches
/// `lattice::chain`, including the two-site ring collapsing to one bond.
pub fn build_bh_hardcore(
    basis: &SectorBasis,
    hop: f64,
    periodic: bool,
) -> Result<ComplexMatrix, ModelError> {
    let n = basis.n_sites();
    let mut edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
    if periodic && n > 2 {
        edges.push((0, n - 1));
    }
    let dim = basis.len();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (row, &state) in basis.states().iter().enumerate() {
        for &(k, l) in &edges {
            let mk = site_mask(k, n);
            let ml = site_mask(l, n);
            let occupied_k = state & mk != 0;
            let occupied_l = state & ml != 0;
            if occupied_k != occupied_l {
                let hopped = state ^ mk ^ ml;
                let col = basis
                    .index_of(hopped)
                    .expect("hop conserves particle number");
                h.add_to(row, col, C64::new(-hop, 0.0));
            }
        }
    }
    Ok(h)
}
