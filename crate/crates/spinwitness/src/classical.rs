//! Separable-state energy bounds: the classical product-state minimum of a
//! spin Hamiltonian, obtained by replacing each Pauli vector with a real
//! unit 3-vector.
//!
//! Three routes produce a bound:
//! * closed forms (`heisenberg_bound`, `xy_bound`, `collective_bound`,
//!   `bh_bound`) for the lattices where they are exact,
//! * `minimize_pair`, the two-sublattice reduction for bipartite graphs with
//!   one homogeneous two-spin term per edge,
//! * `minimize_product`, generic multi-start coordinate descent for any
//!   interaction graph, frustrated ones included.
//!
//! Every numerical bound carries its witnessing spin configuration so the
//! value can be re-derived from the configuration alone.

use crate::lattice::{InteractionGraph, LatticeError, Sublattice};
use crate::models::SpinModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::UnitSphere;
use rayon::prelude::*;
use thiserror::Error;

/// Default number of coordinate-descent restarts.
pub const DEFAULT_RESTARTS: usize = 32;

/// Descent stops when a full sweep improves the energy by less than this.
pub const DESCENT_TOL: f64 = 1e-12;
/// Hard cap on coordinate-descent sweeps per restart.
pub const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("bad spin configuration: {0}")]
    BadConfig(String),
    #[error("interaction graph is not bipartite; odd cycle: {cycle:?}")]
    NotBipartite { cycle: Vec<usize> },
    #[error("{0}")]
    Unsupported(String),
    #[error("XY couplings are both zero; the bound degenerates")]
    ZeroCoupling,
    #[error("collective model needs an even spin count, got {n}")]
    OddN { n: usize },
    #[error("particle count {n_b} invalid for {n} sites")]
    BadFilling { n: usize, n_b: usize },
    #[error("site degrees are not uniform; the field cannot be folded into a per-edge term")]
    NonUniformDegree,
}

/// One unit 3-vector per site.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSpinConfig {
    spins: Vec<[f64; 3]>,
}

impl ClassicalSpinConfig {
    pub fn new(spins: Vec<[f64; 3]>) -> Result<Self, ClassicalError> {
        for (k, s) in spins.iter().enumerate() {
            let norm = dot3(s, s).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(ClassicalError::BadConfig(format!(
                    "spin {} has norm {}, expected 1",
                    k, norm
                )));
            }
        }
        Ok(ClassicalSpinConfig { spins })
    }

    pub fn spins(&self) -> &[[f64; 3]] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    Analytic,
    Pairwise,
    CoordinateDescent,
}

/// A separable-state energy bound together with how it was obtained and,
/// for the numerical routes, the classical configuration attaining it.
#[derive(Debug, Clone)]
pub struct SeparableBound {
    pub value: f64,
    pub source: BoundSource,
    pub config: Option<ClassicalSpinConfig>,
}

#[inline]
fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize_or_keep(h: [f64; 3], keep: [f64; 3]) -> [f64; 3] {
    let norm = dot3(&h, &h).sqrt();
    if norm > 1e-300 {
        [-h[0] / norm, -h[1] / norm, -h[2] / norm]
    } else {
        // zero effective field: any direction is optimal, keep the current
        // one for determinism
        keep
    }
}

/// Per-edge couplings of the two-spin term, plus the per-site field weight.
struct GraphObjective<'g> {
    graph: &'g InteractionGraph,
    jx: f64,
    jy: f64,
    jz: f64,
    site_field: f64, // multiplies sum of s_z over sites
}

impl<'g> GraphObjective<'g> {
    fn for_model(model: &'g SpinModel) -> Result<Self, ClassicalError> {
        match model {
            SpinModel::Heisenberg { graph, field } => Ok(GraphObjective {
                graph,
                jx: 1.0,
                jy: 1.0,
                jz: 1.0,
                site_field: field * graph.field_multiplicity(),
            }),
            SpinModel::Xy {
                graph,
                jx,
                jy,
                field,
            } => Ok(GraphObjective {
                graph,
                jx: *jx,
                jy: *jy,
                jz: 0.0,
                site_field: field * graph.field_multiplicity(),
            }),
            SpinModel::Collective { .. } => Err(ClassicalError::Unsupported(
                "collective model has no interaction graph; its bound is 2n".into(),
            )),
            SpinModel::BoseHubbardHardcore { .. } => Err(ClassicalError::Unsupported(
                "hard-core bosons have no classical spin objective; see gutzwiller_min".into(),
            )),
        }
    }

    fn energy(&self, spins: &[[f64; 3]]) -> f64 {
        let mut e = 0.0;
        for &(k, l) in self.graph.edges() {
            let a = &spins[k];
            let b = &spins[l];
            e += self.jx * a[0] * b[0] + self.jy * a[1] * b[1] + self.jz * a[2] * b[2];
        }
        if self.site_field != 0.0 {
            e += self.site_field * spins.iter().map(|s| s[2]).sum::<f64>();
        }
        e
    }

    /// Effective field on site k: gradient of the objective in s_k.
    fn effective_field(&self, spins: &[[f64; 3]], adjacency: &[Vec<usize>], k: usize) -> [f64; 3] {
        let mut h = [0.0, 0.0, self.site_field];
        for &l in &adjacency[k] {
            h[0] += self.jx * spins[l][0];
            h[1] += self.jy * spins[l][1];
            h[2] += self.jz * spins[l][2];
        }
        h
    }
}

/// Classical product-state energy of `config` under `model`'s objective:
/// Pauli operators replaced by the configuration's unit vectors.
pub fn classical_energy(
    model: &SpinModel,
    config: &ClassicalSpinConfig,
) -> Result<f64, ClassicalError> {
    if config.len() != model.site_count() {
        return Err(ClassicalError::BadConfig(format!(
            "{} spins for {} sites",
            config.len(),
            model.site_count()
        )));
    }
    match model {
        SpinModel::Collective { n } => {
            // 3n + 2*sum_{k<l} s_k.s_l  ==  2n + |sum_k s_k|^2
            let mut total = [0.0, 0.0, 0.0];
            for s in config.spins() {
                total[0] += s[0];
                total[1] += s[1];
                total[2] += s[2];
            }
            Ok(2.0 * *n as f64 + dot3(&total, &total))
        }
        _ => {
            let obj = GraphObjective::for_model(model)?;
            Ok(obj.energy(config.spins()))
        }
    }
}

/// Spherical-angle grid used to seed the two-vector minimization:
/// 16 azimuthal times 8 polar starting directions.
fn sphere_grid() -> Vec<[f64; 3]> {
    let mut starts = Vec::with_capacity(128);
    for i in 0..8 {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / 8.0;
        for j in 0..16 {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / 16.0;
            starts.push([
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ]);
        }
    }
    starts
}

/// Two-sublattice bound for bipartite graphs: minimizes the per-edge
/// Golden-section minimum of f on [lo, hi]; returns (argmin, min).
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Exact minimum of the two-spin edge function
/// f = jx xA xB + jy yA yB + jz zA zB + c (zA + zB).
///
/// The azimuths enter only through the transverse coupling, whose minimum
/// over both azimuths is -max(|jx|,|jy|) sin(ta) sin(tb); the optimal tb
/// for a given ta is then a closed form, leaving one polar angle to
/// scan-and-refine.  This stays accurate at branch-boundary fields, where
/// alternating descent converges only algebraically.
fn pair_minimum_by_angle_reduction(jx: f64, jy: f64, jz: f64, c: f64) -> (f64, [f64; 3], [f64; 3]) {
    let m = jx.abs().max(jy.abs());
    let value_at = |ta: f64| -> f64 {
        let (sa, ca) = ta.sin_cos();
        let a = jz * ca + c;
        let b = -m * sa;
        c * ca - a.hypot(b)
    };

    const COARSE: usize = 512;
    let theta = |k: usize| std::f64::consts::PI * k as f64 / COARSE as f64;
    let mut best_k = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..=COARSE {
        let v = value_at(theta(k));
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let lo = theta(best_k.saturating_sub(1));
    let hi = theta((best_k + 1).min(COARSE));
    let (ta, value) = golden_min(value_at, lo, hi);

    let (sin_a, cos_a) = ta.sin_cos();
    let a = jz * cos_a + c;
    let b = -m * sin_a;
    // minimizer of a*cos(tb) + b*sin(tb); b <= 0 keeps it inside [0, pi]
    let tb = (-b).atan2(-a);
    let (sin_b, cos_b) = tb.sin_cos();

    // azimuth corner: transverse term = u (jx+jy)/2 + v (jx-jy)/2 with
    // u = cos(pa - pb), v = cos(pa + pb) chosen in {-1, +1} to minimize
    let sgn = |x: f64| if x >= 0.0 { 1.0 } else { -1.0 };
    let (u, v) = (-sgn(jx + jy), -sgn(jx - jy));
    let (pa, pb) = match (u > 0.0, v > 0.0) {
        (true, true) => (0.0, 0.0),
        (true, false) => (std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        (false, true) => (std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2),
        (false, false) => (std::f64::consts::PI, 0.0),
    };
    let spin = |sin_t: f64, cos_t: f64, phi: f64| [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
    (value, spin(sin_a, cos_a, pa), spin(sin_b, cos_b, pb))
}

/// function f(sA, sB) over two unit vectors by alternating closed-form
/// updates (each spin set to minus its normalized effective field), then
/// tightens the result with the exact one-angle reduction, and finally
/// multiplies by the edge count.  The field is folded into f as
/// c*(szA + szB) with c = field/degree, which requires a uniform degree
/// whenever the field is nonzero.
pub fn minimize_pair(model: &SpinModel) -> Result<SeparableBound, ClassicalError> {
    let obj = GraphObjective::for_model(model)?;
    let graph = obj.graph;
    let mut colored = graph.clone();
    let coloring = colored.two_color().map_err(|e| match e {
        LatticeError::NotBipartite { cycle } => ClassicalError::NotBipartite { cycle },
        other => ClassicalError::BadConfig(other.to_string()),
    })?;

    let degrees = graph.degrees();
    let degree = degrees.first().copied().unwrap_or(0);
    let c = if obj.site_field == 0.0 {
        0.0
    } else {
        if degrees.iter().any(|&d| d != degree) {
            return Err(ClassicalError::NonUniformDegree);
        }
        obj.site_field / degree as f64
    };

    // f(sA, sB) = jx*xA*xB + jy*yA*yB + jz*zA*zB + c*(zA + zB)
    let edge_f = |sa: &[f64; 3], sb: &[f64; 3]| {
        obj.jx * sa[0] * sb[0]
            + obj.jy * sa[1] * sb[1]
            + obj.jz * sa[2] * sb[2]
            + c * (sa[2] + sb[2])
    };
    let field_on = |other: &[f64; 3]| [obj.jx * other[0], obj.jy * other[1], obj.jz * other[2] + c];

    let mut best_f = f64::INFINITY;
    let mut best = ([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]);
    for start in sphere_grid() {
        let mut sb = start;
        let mut sa = normalize_or_keep(field_on(&sb), [0.0, 0.0, 1.0]);
        let mut f = edge_f(&sa, &sb);
        for _ in 0..256 {
            sb = normalize_or_keep(field_on(&sa), sb);
            sa = normalize_or_keep(field_on(&sb), sa);
            let next = edge_f(&sa, &sb);
            let improved = f - next;
            f = next;
            if improved < 1e-14 {
                break;
            }
        }
        if f < best_f {
            best_f = f;
            best = (sa, sb);
        }
    }

    let (reduced_f, ra, rb) = pair_minimum_by_angle_reduction(obj.jx, obj.jy, obj.jz, c);
    if reduced_f < best_f {
        best_f = reduced_f;
        best = (ra, rb);
    }

    let spins: Vec<[f64; 3]> = coloring
        .iter()
        .map(|color| match color {
            Sublattice::A => best.0,
            Sublattice::B => best.1,
        })
        .collect();
    let config = ClassicalSpinConfig::new(spins)?;
    Ok(SeparableBound {
        value: graph.edge_count() as f64 * best_f,
        source: BoundSource::Pairwise,
        config: Some(config),
    })
}

/// General product-state minimization by multi-start coordinate descent:
/// sweep the sites in ascending order, setting each spin to minus its
/// normalized effective field, until a sweep improves the energy by less
/// than `DESCENT_TOL` or `MAX_SWEEPS` is hit.  Restart `restarts` times
/// from seeded uniform-on-sphere configurations; the seed alone determines
/// every start (one RNG stream per restart index), so the result does not
/// depend on execution order.
pub fn minimize_product(
    model: &SpinModel,
    restarts: usize,
    seed: u64,
) -> Result<SeparableBound, ClassicalError> {
    let obj = GraphObjective::for_model(model)?;
    let n = obj.graph.n();
    let adjacency = obj.graph.adjacency();
    let restarts = restarts.max(1);

    let run_restart = |r: usize| -> (f64, Vec<[f64; 3]>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let mut spins: Vec<[f64; 3]> = (0..n).map(|_| rng.sample(UnitSphere)).collect();
        let mut energy = obj.energy(&spins);
        for _ in 0..MAX_SWEEPS {
            for k in 0..n {
                let h = obj.effective_field(&spins, &adjacency, k);
                spins[k] = normalize_or_keep(h, spins[k]);
            }
            let next = obj.energy(&spins);
            let improved = energy - next;
            energy = next;
            if improved < DESCENT_TOL {
                break;
            }
        }
        (energy, spins)
    };

    let (_, value, spins) = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let (e, s) = run_restart(r);
            (r, e, s)
        })
        .min_by(|a, b| {
            (a.1, a.0)
                .partial_cmp(&(b.1, b.0))
                .expect("descent energies are finite")
        })
        .expect("at least one restart");

    Ok(SeparableBound {
        value,
        source: BoundSource::CoordinateDescent,
        config: Some(ClassicalSpinConfig::new(spins)?),
    })
}

/// Closed-form Heisenberg separable bound on a d-dimensional periodic cubic
/// lattice of n sites: -dn(B^2/8 + 1) for |B| <= 4, else -dn(|B| - 1).
pub fn heisenberg_bound(d: usize, n: usize, field: f64) -> f64 {
    let dn = (d * n) as f64;
    if field.abs() <= 4.0 {
        -dn * (field * field / 8.0 + 1.0)
    } else {
        -dn * (field.abs() - 1.0)
    }
}

/// Closed-form XY separable bound on a d-dimensional periodic cubic lattice:
/// with M = max(|J_x|, |J_y|) and b = |B|/M, -dnM(1 + b^2/4) for b <= 2,
/// else -dnMb.
pub fn xy_bound(d: usize, n: usize, jx: f64, jy: f64, field: f64) -> Result<f64, ClassicalError> {
    let m = jx.abs().max(jy.abs());
    if m == 0.0 {
        return Err(ClassicalError::ZeroCoupling);
    }
    let b = field.abs() / m;
    let dnm = (d * n) as f64 * m;
    Ok(if b <= 2.0 {
        -dnm * (1.0 + b * b / 4.0)
    } else {
        -dnm * b
    })
}

/// Separable bound of the collective model: 2n.
pub fn collective_bound(n: usize) -> Result<f64, ClassicalError> {
    if n % 2 == 1 {
        return Err(ClassicalError::OddN { n });
    }
    Ok(2.0 * n as f64)
}

/// Separable bound of the hard-core boson chain: -2J*N_b(1 - N_b/N).
pub fn bh_bound(n: usize, n_b: usize, hop: f64) -> Result<f64, ClassicalError> {
    if n == 0 || n_b > n {
        return Err(ClassicalError::BadFilling { n, n_b });
    }
    let filling = n_b as f64 / n as f64;
    Ok(-2.0 * hop * n_b as f64 * (1.0 - filling))
}

/// Minimum product-state energy of the hard-core boson ring under the
/// Gutzwiller ansatz: every site in alpha|0> + beta e^{i phi}|1> with the
/// filling constraint n|beta|^2 = n_b, scanning the nearest-neighbor phase
/// twist over a 64-point grid.  The ring convention counts n bonds, matching
/// the closed form (the two-site ring counts its bond twice here).
pub fn gutzwiller_min(n: usize, n_b: usize, hop: f64) -> Result<f64, ClassicalError> {
    if n == 0 || n_b > n {
        return Err(ClassicalError::BadFilling { n, n_b });
    }
    let beta_sq = n_b as f64 / n as f64;
    let alpha_sq = 1.0 - beta_sq;
    // per-bond hopping expectation: -J * 2 * Re[<a'>_k <a>_l] with a phase
    // twist delta between neighbors: -2 J alpha^2 beta^2 cos(delta)
    let mut best = f64::INFINITY;
    for step in 0..64 {
        let delta = 2.0 * std::f64::consts::PI * step as f64 / 64.0;
        let e = -2.0 * hop * n as f64 * alpha_sq * beta_sq * delta.cos();
        if e < best {
            best = e;
        }
    }
    Ok(best)
}

/// Floor of the single-spin uncertainty sum: Sum_a var(sigma_a) = 2 on every
/// pure qubit state.
pub fn variance_floor() -> f64 {
    2.0
}

/// Samples `samples` Haar-random pure qubit states and returns the largest
/// deviation of Sum_a var(sigma_a) from 2, computing each variance from the
/// three Bloch expectation values.
pub fn variance_floor_max_deviation(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = rand_distr::StandardNormal;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        // Haar measure on pure states: normalized complex Gaussian pair
        let parts: [f64; 4] = [
            rng.sample(normal),
            rng.sample(normal),
            rng.sample(normal),
            rng.sample(normal),
        ];
        let norm = parts.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (ar, ai, br, bi) = (
            parts[0] / norm,
            parts[1] / norm,
            parts[2] / norm,
            parts[3] / norm,
        );
        // <sigma_x> = 2 Re(a* b), <sigma_y> = 2 Im(a* b), <sigma_z> = |a|^2 - |b|^2
        let sx = 2.0 * (ar * br + ai * bi);
        let sy = 2.0 * (ar * bi - ai * br);
        let sz = ar * ar + ai * ai - br * br - bi * bi;
        let var_sum = 3.0 - (sx * sx + sy * sy + sz * sz);
        worst = worst.max((var_sum - variance_floor()).abs());
    }
    worst
}
