//! Entanglement quantifiers and witness evaluation: two-qubit reductions,
//! Wootters concurrence, entanglement of formation, the energy witness
//! Delta E, the closed-form concurrence-from-energy expressions, and the
//! unentangled-spin count bound.

use crate::lattice::InteractionGraph;
use crate::models::Axis;
use crate::numkit::{eigh, ComplexMatrix, NumError, C64};
use thiserror::Error;

/// Eigenvalue dust below zero down to this magnitude is treated as
/// round-off and clipped before the Wootters formula.
pub const EIGENVALUE_DUST: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EntanglementError {
    #[error("site index {site} out of range for {n} sites")]
    IndexOutOfRange { site: usize, n: usize },
    #[error("not a density matrix: {0}")]
    NotAState(String),
    #[error("concurrence {value} outside [0, 1]")]
    OutOfRange { value: f64 },
    #[error("collective formula needs an even spin count, got {n}")]
    OddN { n: usize },
    #[error("collective energy must be nonnegative, got {energy}")]
    NegativeEnergy { energy: f64 },
    #[error("state dimension {dim} does not match {n} sites")]
    DimensionMismatch { dim: usize, n: usize },
}

fn state_err(e: NumError) -> EntanglementError {
    EntanglementError::NotAState(e.to_string())
}

/// A validated 4x4 density matrix: Hermitian, unit trace, and positive
/// semidefinite up to round-off.  Negative eigenvalue dust within
/// `EIGENVALUE_DUST` is clipped and the spectrum renormalized on
/// construction; anything worse is rejected.
#[derive(Debug, Clone)]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

impl TwoQubitState {
    pub fn new(rho: ComplexMatrix) -> Result<Self, EntanglementError> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(EntanglementError::NotAState(format!(
                "expected 4x4, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        rho.check_hermitian().map_err(state_err)?;
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-9 {
            return Err(EntanglementError::NotAState(format!(
                "trace {} differs from 1",
                trace.re
            )));
        }
        let dec = eigh(&rho).map_err(state_err)?;
        if dec.eigenvalues[0] < -EIGENVALUE_DUST {
            return Err(EntanglementError::NotAState(format!(
                "negative eigenvalue {}",
                dec.eigenvalues[0]
            )));
        }
        if dec.eigenvalues[0] >= 0.0 {
            return Ok(TwoQubitState { rho });
        }
        // clip the dust and rebuild
        let clipped: Vec<f64> = dec.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let mut clean = ComplexMatrix::zeros(4, 4);
        for (k, &l) in clipped.iter().enumerate() {
            if l == 0.0 {
                continue;
            }
            let v = dec.vector(k);
            let w = l / total;
            for i in 0..4 {
                for j in 0..4 {
                    clean.add_to(i, j, v[i] * v[j].conj() * w);
                }
            }
        }
        Ok(TwoQubitState { rho: clean })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }
}

#[inline]
fn site_mask(site: usize, n: usize) -> usize {
    1 << (n - 1 - site)
}

#[inline]
fn z_of(state: usize, site: usize, n: usize) -> f64 {
    1.0 - 2.0 * ((state >> (n - 1 - site)) & 1) as f64
}

fn check_state_dims(rho: &ComplexMatrix, n: usize) -> Result<(), EntanglementError> {
    let dim = 1usize << n;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(EntanglementError::DimensionMismatch { dim: rho.rows(), n });
    }
    Ok(())
}

/// Partial trace of an n-site state down to the ordered pair (k, l):
/// the output's first qubit is site k.
pub fn reduced_pair(
    rho: &ComplexMatrix,
    k: usize,
    l: usize,
    n: usize,
) -> Result<TwoQubitState, EntanglementError> {
    if k >= n {
        return Err(EntanglementError::IndexOutOfRange { site: k, n });
    }
    if l >= n || l == k {
        return Err(EntanglementError::IndexOutOfRange { site: l, n });
    }
    check_state_dims(rho, n)?;
    rho.check_hermitian().map_err(state_err)?;

    let mk = site_mask(k, n);
    let ml = site_mask(l, n);
    // bit positions of the traced-out sites, ascending
    let rest: Vec<usize> = (0..n)
        .map(|site| site_mask(site, n).trailing_zeros() as usize)
        .filter(|&p| (1usize << p) != mk && (1usize << p) != ml)
        .collect();
    let mut out = ComplexMatrix::zeros(4, 4);
    for r in 0..1usize << (n - 2) {
        let mut base = 0usize;
        for (t, &p) in rest.iter().enumerate() {
            base |= ((r >> t) & 1) << p;
        }
        for a in 0..4usize {
            let ia = base | if a & 2 != 0 { mk } else { 0 } | if a & 1 != 0 { ml } else { 0 };
            for b in 0..4usize {
                let ib = base | if b & 2 != 0 { mk } else { 0 } | if b & 1 != 0 { ml } else { 0 };
                out.add_to(a, b, rho.get(ia, ib));
            }
        }
    }
    TwoQubitState::new(out)
}

/// Reduced 4x4 matrix of the pure state with the given amplitude vector,
/// without materializing the full density matrix.  The result is the raw
/// partial trace; thermal mixtures of such terms should be validated once
/// assembled (see `TwoQubitState::new`).
pub fn reduced_pair_pure(
    amplitudes: &[C64],
    k: usize,
    l: usize,
    n: usize,
) -> Result<ComplexMatrix, EntanglementError> {
    if k >= n {
        return Err(EntanglementError::IndexOutOfRange { site: k, n });
    }
    if l >= n || l == k {
        return Err(EntanglementError::IndexOutOfRange { site: l, n });
    }
    let dim = 1usize << n;
    if amplitudes.len() != dim {
        return Err(EntanglementError::DimensionMismatch {
            dim: amplitudes.len(),
            n,
        });
    }
    let mk = site_mask(k, n);
    let ml = site_mask(l, n);
    let rest: Vec<usize> = (0..n)
        .map(|site| site_mask(site, n).trailing_zeros() as usize)
        .filter(|&p| (1usize << p) != mk && (1usize << p) != ml)
        .collect();
    let mut out = ComplexMatrix::zeros(4, 4);
    for r in 0..1usize << (n - 2) {
        let mut base = 0usize;
        for (t, &p) in rest.iter().enumerate() {
            base |= ((r >> t) & 1) << p;
        }
        for a in 0..4usize {
            let ia = base | if a & 2 != 0 { mk } else { 0 } | if a & 1 != 0 { ml } else { 0 };
            for b in 0..4usize {
                let ib = base | if b & 2 != 0 { mk } else { 0 } | if b & 1 != 0 { ml } else { 0 };
                out.add_to(a, b, amplitudes[ia] * amplitudes[ib].conj());
            }
        }
    }
    Ok(out)
}

/// Wootters concurrence C = max(0, l1 - l2 - l3 - l4), with l_i the
/// decreasing square roots of the eigenvalues of rho * rho~, where
/// rho~ = (sy (x) sy) rho* (sy (x) sy).  The spectrum is obtained from the
/// Hermitian form sqrt(rho) rho~ sqrt(rho), which shares the nonzero
/// eigenvalues, so only Hermitian solvers are needed.
pub fn concurrence(state: &TwoQubitState) -> Result<f64, EntanglementError> {
    let rho = state.matrix();
    let yy = ComplexMatrix::from_real_rows(&[
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0, 0.0],
    ]);
    let flipped = yy
        .matmul(&rho.conj())
        .and_then(|m| m.matmul(&yy))
        .map_err(state_err)?;

    let dec = eigh(rho).map_err(state_err)?;
    let mut sqrt_rho = ComplexMatrix::zeros(4, 4);
    for (idx, &l) in dec.eigenvalues.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let v = dec.vector(idx);
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho.add_to(i, j, v[i] * v[j].conj() * s);
            }
        }
    }
    let m = sqrt_rho
        .matmul(&flipped)
        .and_then(|m| m.matmul(&sqrt_rho))
        .map_err(state_err)?;
    let mut lambdas: Vec<f64> = eigh(&m)
        .map_err(state_err)?
        .eigenvalues
        .iter()
        .map(|&mu| mu.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Entanglement of formation from the concurrence:
/// h((1 + sqrt(1 - c^2))/2) with h the base-2 binary entropy.
pub fn eof(c: f64) -> Result<f64, EntanglementError> {
    if !(0.0..=1.0).contains(&c) {
        return Err(EntanglementError::OutOfRange { value: c });
    }
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    let h = |p: f64| {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -p * p.log2()
        }
    };
    Ok(h(x) + h(1.0 - x))
}

/// The energy witness: negative means entanglement is detected, and its
/// magnitude lower-bounds the energy needed to reach any separable state.
pub fn witness_delta(energy: f64, bound: f64) -> f64 {
    energy - bound
}

/// Nearest-neighbor concurrence of the zero-field thermal Heisenberg ring
/// from its energy alone: max(-(E/n + 1)/2, 0).
pub fn heisenberg_concurrence_from_energy(energy: f64, n: usize) -> f64 {
    (-(energy / n as f64 + 1.0) / 2.0).max(0.0)
}

/// Concurrence of the thermal collective model from its energy:
/// max(-[E + n(n-4)] / [2n(n-1)], 0); identically zero for n >= 4 since
/// the energy is never negative.
pub fn collective_concurrence_from_energy(energy: f64, n: usize) -> Result<f64, EntanglementError> {
    if n % 2 == 1 {
        return Err(EntanglementError::OddN { n });
    }
    let nf = n as f64;
    Ok((-(energy + nf * (nf - 4.0)) / (2.0 * nf * (nf - 1.0))).max(0.0))
}

/// Upper bound on the number of unentangled spins compatible with a
/// collective-model energy: floor(E/2).  For mixtures this bounds the
/// ensemble-averaged count.
pub fn unentangled_bound(energy: f64) -> Result<u64, EntanglementError> {
    if energy < 0.0 {
        return Err(EntanglementError::NegativeEnergy { energy });
    }
    Ok((energy / 2.0).floor() as u64)
}

/// <sigma_a^(k) sigma_a^(l)> on an n-site state, by direct trace.
pub fn two_site_correlation(
    rho: &ComplexMatrix,
    k: usize,
    l: usize,
    n: usize,
    axis: Axis,
) -> Result<f64, EntanglementError> {
    if k >= n {
        return Err(EntanglementError::IndexOutOfRange { site: k, n });
    }
    if l >= n || l == k {
        return Err(EntanglementError::IndexOutOfRange { site: l, n });
    }
    check_state_dims(rho, n)?;
    let dim = 1usize << n;
    let mask = site_mask(k, n) ^ site_mask(l, n);
    let mut total = C64::new(0.0, 0.0);
    match axis {
        Axis::Z => {
            for i in 0..dim {
                total += rho.get(i, i) * z_of(i, k, n) * z_of(i, l, n);
            }
        }
        Axis::X => {
            for i in 0..dim {
                total += rho.get(i, i ^ mask);
            }
        }
        Axis::Y => {
            for i in 0..dim {
                total -= rho.get(i, i ^ mask) * (z_of(i, k, n) * z_of(i, l, n));
            }
        }
    }
    Ok(total.re)
}

/// Edge-averaged nearest-neighbor correlation along one axis:
/// (1/|edges|) * Sum over edges of <sigma_a sigma_a>.
pub fn nn_correlation_average(
    rho: &ComplexMatrix,
    graph: &InteractionGraph,
    axis: Axis,
) -> Result<f64, EntanglementError> {
    let n = graph.n();
    check_state_dims(rho, n)?;
    let mut total = 0.0;
    for &(k, l) in graph.edges() {
        total += two_site_correlation(rho, k, l, n, axis)?;
    }
    Ok(total / graph.edge_count() as f64)
}
