use super::matrix::{ComplexMatrix, C64};
use super::{NumError, MAX_SWEEPS, STATE_TOL};

/// Result of a Hermitian eigendecomposition.
///
/// Eigenvalues are sorted ascending; column k of `eigenvectors` belongs to
/// `eigenvalues[k]`.  Residual and orthonormality quality are covered by the
/// crate's test suite rather than re-checked on every call (an O(n^3) cost the
/// hot paths cannot afford).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Column k as an owned vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors.get(i, k))
            .collect()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Matrices whose imaginary parts are all negligible take a real-symmetric
/// path with half the arithmetic; every Hamiltonian this crate builds is real
/// in the computational basis, so that path is the common case.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition, NumError> {
    check_square(m)?;
    m.check_hermitian()?;
    let n = m.rows();
    if m.is_effectively_real() {
        let (mut d, mut e, q) = real_householder(m, true);
        let mut store = VecStore::Real(q.unwrap());
        tql2(&mut d, &mut e, n, &mut store)?;
        let (d, store) = sort_ascending(d, store, n);
        let q = match store {
            VecStore::Real(q) => real_to_complex(&q, n),
            _ => unreachable!(),
        };
        Ok(EigenDecomposition {
            eigenvalues: d,
            eigenvectors: q,
        })
    } else {
        let (mut d, mut e, q) = complex_householder(m, true);
        let mut store = VecStore::Complex(q.unwrap());
        tql2(&mut d, &mut e, n, &mut store)?;
        let (d, store) = sort_ascending(d, store, n);
        let q = match store {
            VecStore::Complex(q) => ComplexMatrix::from_fn(n, n, |i, j| q[i * n + j]),
            _ => unreachable!(),
        };
        Ok(EigenDecomposition {
            eigenvalues: d,
            eigenvectors: q,
        })
    }
}

/// Eigenvalues only, ascending.  Skips all eigenvector bookkeeping, which
/// halves the work; use this for spectra of the larger Hamiltonians.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, NumError> {
    check_square(m)?;
    m.check_hermitian()?;
    let n = m.rows();
    let (mut d, mut e) = if m.is_effectively_real() {
        let (d, e, _) = real_householder(m, false);
        (d, e)
    } else {
        let (d, e, _) = complex_householder(m, false);
        (d, e)
    };
    tql2(&mut d, &mut e, n, &mut VecStore::None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Re Tr(rho * obs) with the state-ness of rho and Hermiticity of obs checked.
pub fn expectation(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<f64, NumError> {
    check_square(rho)?;
    check_square(obs)?;
    if rho.rows() != obs.rows() {
        return Err(NumError::DimensionMismatch {
            a_rows: rho.rows(),
            a_cols: rho.cols(),
            b_rows: obs.rows(),
            b_cols: obs.cols(),
        });
    }
    obs.check_hermitian()?;
    check_state(rho)?;
    let n = rho.rows();
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr += rho.get(i, j) * obs.get(j, i);
        }
    }
    let imag_budget = STATE_TOL * (1.0 + obs.frobenius_norm());
    if tr.im.abs() > imag_budget {
        return Err(NumError::NotAState(format!(
            "expectation has imaginary residue {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// Trace-1 and positive-semidefinite checks for density operators.
pub fn check_state(rho: &ComplexMatrix) -> Result<(), NumError> {
    rho.check_hermitian()?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(NumError::NotAState(format!(
            "trace is {:.12}{:+.3e}i, expected 1",
            tr.re, tr.im
        )));
    }
    let evs = eigenvalues(rho)?;
    let lo = evs.first().copied().unwrap_or(0.0);
    if lo < -STATE_TOL {
        return Err(NumError::NotAState(format!(
            "negative eigenvalue {:.3e}",
            lo
        )));
    }
    Ok(())
}

fn check_square(m: &ComplexMatrix) -> Result<(), NumError> {
    if !m.is_square() {
        return Err(NumError::DimensionMismatch {
            a_rows: m.rows(),
            a_cols: m.cols(),
            b_rows: m.cols(),
            b_cols: m.rows(),
        });
    }
    Ok(())
}

fn real_to_complex(q: &[f64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| C64::new(q[i * n + j], 0.0))
}

enum VecStore {
    None,
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

/// Householder reduction of a real symmetric matrix to tridiagonal form.
///
/// Works on a full (not packed) copy with row-contiguous inner loops; on
/// row-major storage this streams memory instead of striding it, which is
/// what makes dimension 4096 tolerable on one core.  Returns the diagonal,
/// the subdiagonal (e[k] = T[k+1][k], e[n-1] = 0) and, if requested, the
/// accumulated orthogonal transformation.
fn real_householder(
    m: &ComplexMatrix,
    want_vectors: bool,
) -> (Vec<f64>, Vec<f64>, Option<Vec<f64>>) {
    let n = m.rows();
    // Symmetrize the real part; dust within the Hermiticity tolerance is
    // already guaranteed small by the caller's check.
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m.get(i, j).re + m.get(j, i).re);
        }
    }
    let mut e = vec![0.0f64; n];
    let mut hs = vec![0.0f64; n];
    let mut v = vec![0.0f64; n];
    let mut q = vec![0.0f64; n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let mut sigma_sq = 0.0;
        for i in lo..n {
            sigma_sq += a[i * n + k] * a[i * n + k];
        }
        let sigma = sigma_sq.sqrt();
        if sigma == 0.0 {
            e[k] = 0.0;
            hs[k] = 0.0;
            continue;
        }
        let x0 = a[lo * n + k];
        let alpha = if x0 >= 0.0 { -sigma } else { sigma };
        let h = sigma * (sigma + x0.abs());
        a[lo * n + k] = x0 - alpha; // Householder vector now lives in column k
        e[k] = alpha;
        hs[k] = h;
        // contiguous scratch copy of the vector; column access would stride
        for i in lo..n {
            v[i] = a[i * n + k];
        }

        // q = A v / h over the trailing block
        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            let mut s = 0.0;
            for (j, &aij) in row.iter().enumerate() {
                s += aij * v[lo + j];
            }
            q[i] = s / h;
        }
        // q <- q - (v.q / 2h) v
        let mut vq = 0.0;
        for i in lo..n {
            vq += v[i] * q[i];
        }
        let kappa = vq / (2.0 * h);
        for i in lo..n {
            q[i] -= kappa * v[i];
        }
        // A <- A - v q^T - q v^T on the trailing block
        for i in lo..n {
            let vi = v[i];
            let qi = q[i];
            let row = &mut a[i * n..(i + 1) * n];
            for j in lo..n {
                row[j] -= vi * q[j] + qi * v[j];
            }
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    e[n - 1] = 0.0;
    let d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();

    let vectors = want_vectors.then(|| {
        let mut qmat = vec![0.0f64; n * n];
        for i in 0..n {
            qmat[i * n + i] = 1.0;
        }
        let mut w = vec![0.0f64; n];
        for k in (0..n.saturating_sub(2)).rev() {
            let h = hs[k];
            if h == 0.0 {
                continue;
            }
            let lo = k + 1;
            for wj in w[lo..n].iter_mut() {
                *wj = 0.0;
            }
            for i in lo..n {
                let vi = a[i * n + k];
                let row = &qmat[i * n + lo..i * n + n];
                for (j, &qij) in row.iter().enumerate() {
                    w[lo + j] += vi * qij;
                }
            }
            for i in lo..n {
                let f = a[i * n + k] / h;
                let row = &mut qmat[i * n + lo..i * n + n];
                for (j, qij) in row.iter_mut().enumerate() {
                    *qij -= f * w[lo + j];
                }
            }
        }
        qmat
    });
    (d, e, vectors)
}

fn unit_phase(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// Complex Hermitian analogue of `real_householder`.  Produces a real
/// tridiagonal (the complex subdiagonal phases are absorbed into a diagonal
/// unitary folded into the accumulated transformation).
fn complex_householder(
    m: &ComplexMatrix,
    want_vectors: bool,
) -> (Vec<f64>, Vec<f64>, Option<Vec<C64>>) {
    let n = m.rows();
    let zero = C64::new(0.0, 0.0);
    let mut a: Vec<C64> = m.entries().to_vec();
    // symmetrize against Hermiticity dust
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i].conj());
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
    }
    let mut e_c = vec![zero; n];
    let mut hs = vec![0.0f64; n];
    let mut v = vec![zero; n];
    let mut q = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let mut sigma_sq = 0.0;
        for i in lo..n {
            sigma_sq += a[i * n + k].norm_sqr();
        }
        let sigma = sigma_sq.sqrt();
        if sigma == 0.0 {
            e_c[k] = zero;
            hs[k] = 0.0;
            continue;
        }
        let x0 = a[lo * n + k];
        let alpha = -unit_phase(x0) * sigma;
        let h = sigma * (sigma + x0.norm());
        a[lo * n + k] = x0 - alpha;
        e_c[k] = alpha;
        hs[k] = h;
        for i in lo..n {
            v[i] = a[i * n + k];
        }

        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            let mut s = zero;
            for (j, &aij) in row.iter().enumerate() {
                s += aij * v[lo + j];
            }
            q[i] = s / h;
        }
        // v† (Av/h) is real because v† A v is (A Hermitian)
        let mut vq = 0.0;
        for i in lo..n {
            vq += (v[i].conj() * q[i]).re;
        }
        let kappa = vq / (2.0 * h);
        for i in lo..n {
            q[i] -= kappa * v[i];
        }
        for i in lo..n {
            let vi = v[i];
            let qi = q[i];
            let row = &mut a[i * n..(i + 1) * n];
            for j in lo..n {
                row[j] -= vi * q[j].conj() + qi * v[j].conj();
            }
        }
    }
    if n >= 2 {
        e_c[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    e_c[n - 1] = zero;
    let d: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let e: Vec<f64> = e_c.iter().map(|z| z.norm()).collect();

    let vectors = want_vectors.then(|| {
        let mut qmat = vec![zero; n * n];
        for i in 0..n {
            qmat[i * n + i] = C64::new(1.0, 0.0);
        }
        let mut w = vec![zero; n];
        for k in (0..n.saturating_sub(2)).rev() {
            let h = hs[k];
            if h == 0.0 {
                continue;
            }
            let lo = k + 1;
            for wj in w[lo..n].iter_mut() {
                *wj = zero;
            }
            for i in lo..n {
                let vi = a[i * n + k].conj();
                let row = &qmat[i * n + lo..i * n + n];
                for (j, &qij) in row.iter().enumerate() {
                    w[lo + j] += vi * qij;
                }
            }
            for i in lo..n {
                let f = a[i * n + k] / h;
                let row = &mut qmat[i * n + lo..i * n + n];
                for (j, qij) in row.iter_mut().enumerate() {
                    *qij -= f * w[lo + j];
                }
            }
        }
        // Fold in the diagonal phase unitary that makes the subdiagonal real.
        let mut phase = C64::new(1.0, 0.0);
        for col in 1..n {
            phase *= unit_phase(e_c[col - 1]);
            for i in 0..n {
                qmat[i * n + col] *= phase;
            }
        }
        qmat
    });
    (d, e, vectors)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix, with plane
/// rotations forwarded to the stored eigenvector basis.  This is the classic
/// EISPACK/Jama tql2 scheme with an explicit per-eigenvalue sweep cap.
fn tql2(d: &mut [f64], e: &mut [f64], n: usize, store: &mut VecStore) -> Result<(), NumError> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = 2.0f64.powi(-52);
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return Err(NumError::NoConvergence { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d[l + 2..n].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gi = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gi;
                    d[i + 1] = h + s * (c * gi + s * d[i]);
                    rotate(store, n, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[inline]
fn rotate(store: &mut VecStore, n: usize, i: usize, c: f64, s: f64) {
    match store {
        VecStore::None => {}
        VecStore::Real(q) => {
            for k in 0..n {
                let base = k * n + i;
                let h = q[base + 1];
                q[base + 1] = s * q[base] + c * h;
                q[base] = c * q[base] - s * h;
            }
        }
        VecStore::Complex(q) => {
            for k in 0..n {
                let base = k * n + i;
                let h = q[base + 1];
                q[base + 1] = s * q[base] + c * h;
                q[base] = c * q[base] - s * h;
            }
        }
    }
}

fn sort_ascending(d: Vec<f64>, store: VecStore, n: usize) -> (Vec<f64>, VecStore) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted_d: Vec<f64> = idx.iter().map(|&k| d[k]).collect();
    let sorted_store = match store {
        VecStore::None => VecStore::None,
        VecStore::Real(q) => {
            let mut out = vec![0.0f64; n * n];
            for (newc, &oldc) in idx.iter().enumerate() {
                for r in 0..n {
                    out[r * n + newc] = q[r * n + oldc];
                }
            }
            VecStore::Real(out)
        }
        VecStore::Complex(q) => {
            let mut out = vec![C64::new(0.0, 0.0); n * n];
            for (newc, &oldc) in idx.iter().enumerate() {
                for r in 0..n {
                    out[r * n + newc] = q[r * n + oldc];
                }
            }
            VecStore::Complex(out)
        }
    };
    (sorted_d, sorted_store)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{kron, ORTHO_TOL, RESIDUAL_TOL};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// xorshift-based deterministic noise, independent of the crate RNG.
    struct Noise(u64);
    impl Noise {
        fn next(&mut self) -> f64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            (x >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        }
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = Noise(seed.wrapping_mul(2654435761).max(1));
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c(rng.next() * 2.0, 0.0));
            for j in (i + 1)..n {
                let v = c(rng.next(), rng.next());
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        m
    }

    fn random_real_symmetric(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = Noise(seed.wrapping_mul(11400714819323198485).max(1));
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c(rng.next() * 2.0, 0.0));
            for j in (i + 1)..n {
                let v = c(rng.next(), 0.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    fn check_decomposition(m: &ComplexMatrix, dec: &EigenDecomposition) {
        let n = m.rows();
        let fro = m.frobenius_norm();
        // residual per eigenpair
        for k in 0..n {
            let v = dec.vector(k);
            let mv = m.matvec(&v).unwrap();
            let mut res = 0.0f64;
            for i in 0..n {
                res += (mv[i] - dec.eigenvalues[k] * v[i]).norm_sqr();
            }
            assert!(
                res.sqrt() <= RESIDUAL_TOL * (fro + 1e-30),
                "residual {} for eigenvalue {}",
                res.sqrt(),
                k
            );
        }
        // orthonormality
        let vt = dec.eigenvectors.dagger();
        let gram = vt.matmul(&dec.eigenvectors).unwrap();
        let dev = gram.sub(&ComplexMatrix::identity(n)).unwrap().max_abs();
        assert!(dev <= ORTHO_TOL, "orthonormality deviation {}", dev);
        // ascending order
        for k in 1..n {
            assert!(dec.eigenvalues[k] >= dec.eigenvalues[k - 1]);
        }
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let dec = eigh(&ComplexMatrix::identity(2)).unwrap();
        assert_relative_eq!(dec.eigenvalues[0], 1.0);
        assert_relative_eq!(dec.eigenvalues[1], 1.0);
    }

    #[test]
    fn pauli_x_spectrum() {
        let dec = eigh(&ComplexMatrix::pauli_x()).unwrap();
        assert_relative_eq!(dec.eigenvalues[0], -1.0, max_relative = 1e-12);
        assert_relative_eq!(dec.eigenvalues[1], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn pauli_y_exercises_complex_path() {
        let m = ComplexMatrix::pauli_y();
        assert!(!m.is_effectively_real());
        let dec = eigh(&m).unwrap();
        assert_relative_eq!(dec.eigenvalues[0], -1.0, max_relative = 1e-12);
        assert_relative_eq!(dec.eigenvalues[1], 1.0, max_relative = 1e-12);
        check_decomposition(&m, &dec);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 1..8u64 {
            let m = random_hermitian(16, seed);
            let dec = eigh(&m).unwrap();
            check_decomposition(&m, &dec);
            // V diag(lambda) V† == M
            let n = m.rows();
            let mut rebuilt = ComplexMatrix::zeros(n, n);
            for k in 0..n {
                let v = dec.vector(k);
                for i in 0..n {
                    for j in 0..n {
                        rebuilt.add_to(i, j, dec.eigenvalues[k] * v[i] * v[j].conj());
                    }
                }
            }
            let gap = rebuilt.sub(&m).unwrap().max_abs();
            assert!(gap <= 1e-9 * m.frobenius_norm(), "rebuild gap {}", gap);
        }
    }

    #[test]
    fn real_symmetric_matches_complex_treatment() {
        for seed in 1..6u64 {
            let m = random_real_symmetric(24, seed);
            let dec = eigh(&m).unwrap();
            check_decomposition(&m, &dec);
        }
    }

    #[test]
    fn eigenvalues_only_agrees_with_full() {
        for seed in [3u64, 17, 29] {
            let m = random_hermitian(20, seed);
            let vals = eigenvalues(&m).unwrap();
            let dec = eigh(&m).unwrap();
            for (a, b) in vals.iter().zip(&dec.eigenvalues) {
                assert_relative_eq!(a, b, epsilon = 1e-9 * (1.0 + m.frobenius_norm()));
            }
        }
    }

    #[test]
    fn agrees_with_independent_solver() {
        use nalgebra::{Complex, DMatrix};
        for (n, seed) in [(6usize, 5u64), (16, 7), (33, 11)] {
            let m = random_hermitian(n, seed);
            let na = DMatrix::from_fn(n, n, |i, j| {
                let z = m.get(i, j);
                Complex::new(z.re, z.im)
            });
            let mut reference: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            let mine = eigenvalues(&m).unwrap();
            for (a, b) in mine.iter().zip(&reference) {
                assert_relative_eq!(a, b, epsilon = 1e-9 * (1.0 + m.frobenius_norm()));
            }
        }
    }

    #[test]
    fn degenerate_spectrum_is_handled() {
        // sigma_z kron 1 + 1 kron sigma_z: eigenvalues (-2, 0, 0, 2)
        let z = ComplexMatrix::pauli_z();
        let i2 = ComplexMatrix::identity2();
        let m = kron(&z, &i2).add(&kron(&i2, &z)).unwrap();
        let dec = eigh(&m).unwrap();
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in dec.eigenvalues.iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
        check_decomposition(&m, &dec);
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        for seed in 1..5u64 {
            let m = random_hermitian(30, seed);
            let vals = eigenvalues(&m).unwrap();
            let tr = m.trace().re;
            let sum: f64 = vals.iter().sum();
            assert_relative_eq!(tr, sum, epsilon = 1e-9 * (1.0 + tr.abs()));
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.3, 0.0), c(0.0, 0.0)],
        ]);
        assert!(matches!(eigh(&m), Err(NumError::NotHermitian { .. })));
    }

    #[test]
    fn one_by_one_matrix() {
        let m = ComplexMatrix::from_real_rows(&[vec![4.5]]);
        let dec = eigh(&m).unwrap();
        assert_eq!(dec.eigenvalues, vec![4.5]);
        assert_relative_eq!(dec.eigenvectors.get(0, 0).re, 1.0);
    }

    #[test]
    fn expectation_maximally_mixed_pauli_z_is_zero() {
        let rho = ComplexMatrix::identity(2).scaled(c(0.5, 0.0));
        let got = expectation(&rho, &ComplexMatrix::pauli_z()).unwrap();
        assert_relative_eq!(got, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn expectation_basis_state() {
        let mut rho = ComplexMatrix::zeros(2, 2);
        rho.set(0, 0, c(1.0, 0.0));
        let got = expectation(&rho, &ComplexMatrix::pauli_z()).unwrap();
        assert_relative_eq!(got, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn expectation_rejects_non_state() {
        let rho = ComplexMatrix::identity(2); // trace 2
        assert!(matches!(
            expectation(&rho, &ComplexMatrix::pauli_z()),
            Err(NumError::NotAState(_))
        ));
        let mut neg = ComplexMatrix::zeros(2, 2);
        neg.set(0, 0, c(1.5, 0.0));
        neg.set(1, 1, c(-0.5, 0.0));
        assert!(matches!(
            expectation(&neg, &ComplexMatrix::pauli_z()),
            Err(NumError::NotAState(_))
        ));
    }
}
