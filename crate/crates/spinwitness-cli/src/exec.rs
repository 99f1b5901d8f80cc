//! Executes a parsed plan and renders the verb output.
//!
//! All numeric output goes through the 9-significant-digit formatter, so a
//! rerun with the same argv (and seed) reproduces the bytes exactly.

use crate::grid::{fmt_g9, AxisSpec, SweepGrid, SweepRecord};
use crate::plan::{Action, BoundError, Family, ModelSpec, Plan, UsageError};
use rayon::prelude::*;
use spinwitness::classical::ClassicalError;
use spinwitness::entanglement::{
    concurrence, eof, reduced_pair_pure, EntanglementError, TwoQubitState,
};
use spinwitness::lattice::{LatticeError, LatticeKind};
use spinwitness::models::ModelError;
use spinwitness::numkit::{eigenvalues, eigh, ComplexMatrix, NumError};
use spinwitness::thermal::{
    bh_temperature_bound, collective_asymptotics, collective_levels, collective_temperature_bound,
    temperature_bound_from_spectrum, ThermalError, GROUND_WINDOW,
};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// Numerical and closed-form bounds may legitimately differ by descent
/// noise; beyond this the bound verb warns.
pub const BOUND_AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Thermal(#[from] ThermalError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<BoundError> for RunError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::Lattice(e) => RunError::Lattice(e),
            BoundError::Classical(e) => RunError::Classical(e),
        }
    }
}

/// Runs a plan and returns the text meant for stdout.
pub fn run(plan: &Plan) -> Result<String, RunError> {
    if let Some(k) = plan.threads {
        // Best effort: the global pool may already exist in this process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    match &plan.action {
        Action::Bound { spec } => run_bound(spec),
        Action::Ground { spec } => run_ground(spec),
        Action::Sweep {
            spec,
            b_axis,
            t_axis,
            out,
        } => run_sweep(spec, b_axis, t_axis, out.as_deref()),
        Action::Tbound { spec, n_list } => run_tbound(spec, n_list),
        Action::Spectrum { spec } => run_spectrum(spec),
    }
}

fn run_bound(spec: &ModelSpec) -> Result<String, RunError> {
    let (numeric, label) = spec.numeric_bound(spec.b)?;
    let analytic = spec.analytic_bound(spec.b);
    let e_sep = analytic.unwrap_or(numeric.value);
    let mut out = format!("e_sep = {}\n", fmt_g9(e_sep));
    if let Some(a) = analytic {
        writeln!(out, "analytic = {}", fmt_g9(a)).unwrap();
        if (a - numeric.value).abs() > BOUND_AGREEMENT_TOL * (1.0 + a.abs()) {
            eprintln!(
                "warning: {} bound {} deviates from the closed form {}",
                label,
                fmt_g9(numeric.value),
                fmt_g9(a)
            );
        }
    }
    if label != "analytic" {
        writeln!(out, "{} = {}", label, fmt_g9(numeric.value)).unwrap();
    }
    Ok(out)
}

fn ground_energy(spec: &ModelSpec) -> Result<f64, RunError> {
    match spec.family {
        // exact level structure; avoids diagonalizing 2^n states
        Family::Collective => Ok(collective_levels(spec.n)?.levels()[0].0),
        _ => {
            let h = spec.model_at(spec.b)?.build()?;
            Ok(eigenvalues(&h)?[0])
        }
    }
}

fn run_ground(spec: &ModelSpec) -> Result<String, RunError> {
    let e_sep = spec.bound_value(spec.b)?;
    let ground = ground_energy(spec)?;
    let delta = ground - e_sep;
    Ok(format!(
        "ground = {}\ne_sep = {}\ndelta_e = {}\ndetected = {}\n",
        fmt_g9(ground),
        fmt_g9(e_sep),
        fmt_g9(delta),
        u8::from(delta < 0.0)
    ))
}

/// Normalized Gibbs weights over a sorted spectrum; T = 0 spreads the
/// weight uniformly over the (near-)degenerate ground window.
fn gibbs_weights(spectrum: &[f64], t: f64) -> Vec<f64> {
    let e0 = spectrum[0];
    if t <= 0.0 {
        let window = GROUND_WINDOW * (1.0 + e0.abs());
        let m = spectrum.iter().take_while(|&&e| e - e0 <= window).count();
        let mut w = vec![0.0; spectrum.len()];
        for wk in w.iter_mut().take(m) {
            *wk = 1.0 / m as f64;
        }
        return w;
    }
    let mut w: Vec<f64> = spectrum.iter().map(|&e| (-(e - e0) / t).exp()).collect();
    let z: f64 = w.iter().sum();
    for wk in &mut w {
        *wk /= z;
    }
    w
}

/// All records of one field column, T ascending.  The Hamiltonian is
/// diagonalized once; every eigenvector's two-site reductions are reused
/// across the whole temperature axis.
fn sweep_column(spec: &ModelSpec, b: f64, t_values: &[f64]) -> Result<Vec<SweepRecord>, RunError> {
    let h = spec.model_at(b)?.build()?;
    let decomp = eigh(&h)?;
    let spectrum = &decomp.eigenvalues;
    let e_sep = spec.bound_value(b)?;

    let graph = spec.graph()?;
    // On a ring every bond is equivalent; one reduction stands for all.
    let pairs: Vec<(usize, usize)> = match graph.kind() {
        LatticeKind::Chain { periodic: true } => vec![graph.edges()[0]],
        _ => graph.edges().to_vec(),
    };

    let dim = spectrum.len();
    let mut reductions: Vec<Vec<ComplexMatrix>> = Vec::with_capacity(dim);
    for k in 0..dim {
        let v = decomp.vector(k);
        let per_pair: Result<Vec<ComplexMatrix>, EntanglementError> = pairs
            .iter()
            .map(|&(a, c)| reduced_pair_pure(&v, a, c, spec.n))
            .collect();
        reductions.push(per_pair?);
    }

    let mut records = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let weights = gibbs_weights(spectrum, t);
        let energy: f64 = weights.iter().zip(spectrum).map(|(w, e)| w * e).sum();
        let mut c_sum = 0.0;
        for (pair_index, _) in pairs.iter().enumerate() {
            let mut rho = ComplexMatrix::zeros(4, 4);
            for (k, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let r = &reductions[k][pair_index];
                for a in 0..4 {
                    for c in 0..4 {
                        rho.add_to(a, c, r.get(a, c) * w);
                    }
                }
            }
            c_sum += concurrence(&TwoQubitState::new(rho)?)?;
        }
        let c = c_sum / pairs.len() as f64;
        records.push(SweepRecord::from_raw(b, t, energy, e_sep, c, eof(c)?));
    }
    Ok(records)
}

fn run_sweep(
    spec: &ModelSpec,
    b_axis: &AxisSpec,
    t_axis: &AxisSpec,
    out: Option<&Path>,
) -> Result<String, RunError> {
    let b_values = b_axis.values();
    let t_values = t_axis.values();
    let columns: Result<Vec<Vec<SweepRecord>>, RunError> = b_values
        .par_iter()
        .map(|&b| sweep_column(spec, b, &t_values))
        .collect();
    let mut records = Vec::with_capacity(b_values.len() * t_values.len());
    for column in columns? {
        records.extend(column);
    }
    let grid = SweepGrid::new(b_axis.clone(), t_axis.clone(), records).map_err(|m| UsageError {
        message: m,
        help: false,
    })?;
    match out {
        Some(path) => {
            std::fs::write(path, grid.to_csv())?;
            Ok(format!(
                "wrote {} rows to {}\n",
                grid.records().len(),
                path.display()
            ))
        }
        None => Ok(grid.to_csv()),
    }
}

fn run_tbound(spec: &ModelSpec, n_list: &[usize]) -> Result<String, RunError> {
    let mut out = String::new();
    for &n in n_list {
        let sub = spec.with_n(n);
        match &sub.family {
            Family::Heisenberg | Family::Xy { .. } => {
                let h = sub.model_at(sub.b)?.build()?;
                let spectrum = eigenvalues(&h)?;
                let e_sep = sub.bound_value(sub.b)?;
                let te = temperature_bound_from_spectrum(&spectrum, e_sep)?;
                writeln!(out, "n={} t_e={}", n, fmt_g9(te)).unwrap();
            }
            Family::Collective => {
                let te = collective_temperature_bound(n)?;
                let (_, asymptote) = collective_asymptotics(n, 1.0);
                writeln!(
                    out,
                    "n={} t_e={} t_e_asymptotic={}",
                    n,
                    fmt_g9(te),
                    fmt_g9(asymptote)
                )
                .unwrap();
            }
            Family::BoseHubbard { hop, .. } => {
                let n_b = sub.bh_filling();
                let te = bh_temperature_bound(n, n_b, *hop, sub.periodic)?;
                writeln!(out, "n={} n_b={} t_e={}", n, n_b, fmt_g9(te)).unwrap();
            }
        }
    }
    Ok(out)
}

fn run_spectrum(spec: &ModelSpec) -> Result<String, RunError> {
    let mut out = String::from("energy,degeneracy\n");
    match spec.family {
        Family::Collective => {
            for &(e, d) in collective_levels(spec.n)?.levels() {
                writeln!(out, "{},{}", fmt_g9(e), d).unwrap();
            }
        }
        _ => {
            let h = spec.model_at(spec.b)?.build()?;
            let ev = eigenvalues(&h)?;
            let window = 1e-8 * (1.0 + ev[0].abs());
            let mut i = 0;
            while i < ev.len() {
                let mut j = i + 1;
                while j < ev.len() && ev[j] - ev[i] <= window {
                    j += 1;
                }
                let mean = ev[i..j].iter().sum::<f64>() / (j - i) as f64;
                writeln!(out, "{},{}", fmt_g9(mean), j - i).unwrap();
                i = j;
            }
        }
    }
    Ok(out)
}
