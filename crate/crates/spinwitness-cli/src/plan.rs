//! Command-line parsing: raw flags (plus an optional key=value config file)
//! are resolved into a validated execution plan.  Flags win over config
//! values; every rejection names the offending flag or key.

use crate::grid::AxisSpec;
use clap::error::ErrorKind;
use clap::Parser;
use spinwitness::classical::{
    bh_bound, gutzwiller_min, heisenberg_bound, minimize_pair, minimize_product, xy_bound,
    ClassicalError, SeparableBound, DEFAULT_RESTARTS,
};
use spinwitness::lattice::{chain, cubic, InteractionGraph, LatticeError};
use spinwitness::models::SpinModel;
use std::collections::HashMap;
use std::path::PathBuf;
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 17;

#[derive(Debug, Error)]
#[error("{message}")]
pub struct UsageError {
    pub message: String,
    /// True when the "error" is clap's help or version text.
    pub help: bool,
}

impl UsageError {
    fn new(message: impl Into<String>) -> Self {
        UsageError {
            message: message.into(),
            help: false,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spinwitness",
    about = "Energy-based entanglement witnesses for small spin and boson models",
    version
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

/// All model flags are raw strings so that config-file values and flag
/// values flow through one typed-parsing path with uniform diagnostics.
#[derive(clap::Args, Default, Clone)]
struct CommonArgs {
    /// heisenberg | xy | ising | collective | bosehubbard
    #[arg(long)]
    model: Option<String>,
    /// Lattice dimension (cubic lattices; 1 = chain)
    #[arg(long)]
    d: Option<String>,
    /// Site count (comma list for tbound)
    #[arg(long)]
    n: Option<String>,
    /// Sites per direction for d >= 2
    #[arg(long)]
    side: Option<String>,
    /// XY coupling J_x
    #[arg(long)]
    jx: Option<String>,
    /// XY coupling J_y
    #[arg(long)]
    jy: Option<String>,
    /// Boson hopping J
    #[arg(long)]
    j: Option<String>,
    /// Magnetic field (range START:STOP:STEP allowed in sweep)
    #[arg(long)]
    b: Option<String>,
    /// Boson count (default: half filling)
    #[arg(long)]
    nb: Option<String>,
    /// Periodic boundaries (default true)
    #[arg(long)]
    periodic: Option<String>,
    /// Seed for the coordinate-descent minimizer
    #[arg(long)]
    seed: Option<String>,
    /// Coordinate-descent restarts
    #[arg(long)]
    restarts: Option<String>,
    /// Worker threads (default: all cores; never changes the numbers)
    #[arg(long)]
    threads: Option<String>,
    /// key=value file with model parameters; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Subcommand)]
enum Verb {
    /// Print the separable energy bound
    Bound {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the ground energy and the witness gap
    Ground {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a (B, T) grid of thermal witness data as CSV
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Temperature axis START:STOP:STEP or a single value
        #[arg(long)]
        t: String,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the detection temperature T_E per site count
    Tbound {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the spectrum as energy,degeneracy rows
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Model family with its couplings resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Heisenberg,
    Xy { jx: f64, jy: f64 },
    Collective,
    BoseHubbard { n_b: Option<usize>, hop: f64 },
}

/// A fully-resolved model description: enough to build the Hamiltonian at
/// any field value and to pick the right separable bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub side: Option<usize>,
    pub periodic: bool,
    pub b: f64,
    pub seed: u64,
    pub restarts: usize,
}

#[derive(Debug)]
pub enum Action {
    Bound {
        spec: ModelSpec,
    },
    Ground {
        spec: ModelSpec,
    },
    Sweep {
        spec: ModelSpec,
        b_axis: AxisSpec,
        t_axis: AxisSpec,
        out: Option<PathBuf>,
    },
    Tbound {
        spec: ModelSpec,
        n_list: Vec<usize>,
    },
    Spectrum {
        spec: ModelSpec,
    },
}

#[derive(Debug)]
pub struct Plan {
    pub action: Action,
    pub threads: Option<usize>,
}

/// Parses an argv sequence (including the program name) into a plan.
pub fn parse_command<I, S>(argv: I) -> Result<Plan, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError {
        help: matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion),
        message: e.to_string(),
    })?;
    match cli.verb {
        Verb::Bound { common } => {
            let r = Resolved::from(common)?;
            let threads = r.threads()?;
            let spec = r.into_spec(SiteParam::Single, None)?;
            Ok(Plan {
                action: Action::Bound { spec },
                threads,
            })
        }
        Verb::Ground { common } => {
            let r = Resolved::from(common)?;
            let threads = r.threads()?;
            let spec = r.into_spec(SiteParam::Single, None)?;
            Ok(Plan {
                action: Action::Ground { spec },
                threads,
            })
        }
        Verb::Spectrum { common } => {
            let r = Resolved::from(common)?;
            let threads = r.threads()?;
            let spec = r.into_spec(SiteParam::Single, None)?;
            Ok(Plan {
                action: Action::Spectrum { spec },
                threads,
            })
        }
        Verb::Sweep { common, t, out } => {
            let r = Resolved::from(common)?;
            let threads = r.threads()?;
            let b_axis = AxisSpec::parse(r.raw("b").unwrap_or("0"))
                .map_err(|e| UsageError::new(format!("invalid value for --b: {}", e)))?;
            let t_axis = AxisSpec::parse(&t)
                .map_err(|e| UsageError::new(format!("invalid value for --t: {}", e)))?;
            if t_axis.start < 0.0 {
                return Err(UsageError::new(
                    "invalid value for --t: temperatures are nonnegative",
                ));
            }
            let spec = r.into_spec(SiteParam::Single, Some(b_axis.start))?;
            if !matches!(spec.family, Family::Heisenberg | Family::Xy { .. }) {
                return Err(UsageError::new(
                    "sweep needs a lattice spin model (--model heisenberg, xy, or ising)",
                ));
            }
            Ok(Plan {
                action: Action::Sweep {
                    spec,
                    b_axis,
                    t_axis,
                    out,
                },
                threads,
            })
        }
        Verb::Tbound { common } => {
            let r = Resolved::from(common)?;
            let threads = r.threads()?;
            let n_list = r.n_list()?;
            let spec = r.into_spec(SiteParam::List(n_list[0]), None)?;
            Ok(Plan {
                action: Action::Tbound { spec, n_list },
                threads,
            })
        }
    }
}

const CONFIG_KEYS: [&str; 13] = [
    "model", "d", "n", "side", "jx", "jy", "j", "b", "nb", "periodic", "seed", "restarts",
    "threads",
];

/// Flag strings merged with the config file, remembering which keys were
/// explicitly given so family checks only fire on real input.
struct Resolved {
    values: HashMap<&'static str, String>,
}

enum SiteParam {
    /// --n is one site count, required for lattice families.
    Single,
    /// --n was a list (tbound); use the given placeholder count.
    List(usize),
}

impl Resolved {
    fn from(args: CommonArgs) -> Result<Self, UsageError> {
        let mut values: HashMap<&'static str, String> = HashMap::new();
        let mut put = |key: &'static str, v: Option<String>| {
            if let Some(v) = v {
                values.insert(key, v);
            }
        };
        put("model", args.model);
        put("d", args.d);
        put("n", args.n);
        put("side", args.side);
        put("jx", args.jx);
        put("jy", args.jy);
        put("j", args.j);
        put("b", args.b);
        put("nb", args.nb);
        put("periodic", args.periodic);
        put("seed", args.seed);
        put("restarts", args.restarts);
        put("threads", args.threads);

        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path).map_err(|e| {
                UsageError::new(format!("cannot read --config {}: {}", path.display(), e))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    UsageError::new(format!(
                        "config line {}: expected key=value, got '{}'",
                        lineno + 1,
                        line
                    ))
                })?;
                let key = key.trim();
                let value = value.trim();
                match CONFIG_KEYS.iter().find(|&&k| k == key) {
                    Some(&known) => {
                        // flags win on conflict
                        values.entry(known).or_insert_with(|| value.to_string());
                    }
                    None => {
                        return Err(UsageError::new(format!(
                            "config line {}: unknown key '{}'",
                            lineno + 1,
                            key
                        )));
                    }
                }
            }
        }
        Ok(Resolved { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| UsageError::new(format!("invalid value '{}' for --{}", v, key))),
        }
    }

    fn threads(&self) -> Result<Option<usize>, UsageError> {
        let t: Option<usize> = self.parsed("threads")?;
        if t == Some(0) {
            return Err(UsageError::new("invalid value '0' for --threads"));
        }
        Ok(t)
    }

    fn n_list(&self) -> Result<Vec<usize>, UsageError> {
        let raw = self
            .raw("n")
            .ok_or_else(|| UsageError::new("--n is required (comma list of site counts)"))?;
        let list: Result<Vec<usize>, _> = raw.split(',').map(|p| p.trim().parse()).collect();
        match list {
            Ok(l) if !l.is_empty() => Ok(l),
            _ => Err(UsageError::new(format!("invalid value '{}' for --n", raw))),
        }
    }

    fn reject(&self, keys: &[&str], family: &str) -> Result<(), UsageError> {
        for key in keys {
            if self.values.contains_key(*key) {
                return Err(UsageError::new(format!(
                    "--{} is not meaningful for --model {}",
                    key, family
                )));
            }
        }
        Ok(())
    }

    fn into_spec(self, site: SiteParam, b_override: Option<f64>) -> Result<ModelSpec, UsageError> {
        let model = self
            .raw("model")
            .ok_or_else(|| UsageError::new("--model is required"))?
            .to_string();
        let seed = self.parsed("seed")?.unwrap_or(DEFAULT_SEED);
        let restarts = self.parsed("restarts")?.unwrap_or(DEFAULT_RESTARTS);
        let periodic = self.parsed("periodic")?.unwrap_or(true);
        // sweep pre-parses --b as an axis and passes its start here
        let b: f64 = match b_override {
            Some(b) => b,
            None => match self.raw("b") {
                None => 0.0,
                Some(raw) => raw
                    .parse()
                    .map_err(|_| UsageError::new(format!("invalid value '{}' for --b", raw)))?,
            },
        };

        let family = match model.as_str() {
            "heisenberg" => {
                self.reject(&["jx", "jy", "j", "nb"], "heisenberg")?;
                Family::Heisenberg
            }
            "xy" => {
                self.reject(&["j", "nb"], "xy")?;
                Family::Xy {
                    jx: self.parsed("jx")?.unwrap_or(1.0),
                    jy: self.parsed("jy")?.unwrap_or(1.0),
                }
            }
            "ising" => {
                self.reject(&["jx", "jy", "j", "nb"], "ising (couplings are fixed)")?;
                Family::Xy { jx: 1.0, jy: 0.0 }
            }
            "collective" => {
                self.reject(
                    &["d", "side", "jx", "jy", "j", "nb", "b", "periodic"],
                    "collective",
                )?;
                Family::Collective
            }
            "bosehubbard" => {
                self.reject(&["d", "side", "jx", "jy", "b"], "bosehubbard")?;
                Family::BoseHubbard {
                    n_b: self.parsed("nb")?,
                    hop: self.parsed("j")?.unwrap_or(1.0),
                }
            }
            other => {
                return Err(UsageError::new(format!(
                    "unknown model '{}' for --model (heisenberg, xy, ising, collective, bosehubbard)",
                    other
                )));
            }
        };

        let lattice_family = matches!(family, Family::Heisenberg | Family::Xy { .. });
        let d: usize = self.parsed("d")?.unwrap_or(1);
        if d == 0 {
            return Err(UsageError::new("invalid value '0' for --d"));
        }
        let side: Option<usize> = self.parsed("side")?;
        let explicit_n: Option<usize> = match site {
            SiteParam::Single => match self.raw("n") {
                None => None,
                Some(raw) => Some(
                    raw.parse()
                        .map_err(|_| UsageError::new(format!("invalid value '{}' for --n", raw)))?,
                ),
            },
            SiteParam::List(first) => Some(first),
        };

        let n = if lattice_family && d >= 2 {
            let side =
                side.ok_or_else(|| UsageError::new("--side is required when --d is 2 or more"))?;
            let derived = side.pow(d as u32);
            if let Some(n) = explicit_n {
                if n != derived {
                    return Err(UsageError::new(format!(
                        "--n {} contradicts --side {} with --d {} ({} sites)",
                        n, side, d, derived
                    )));
                }
            }
            derived
        } else {
            if side.is_some() && lattice_family {
                return Err(UsageError::new(
                    "--side needs --d 2 or more; use --n for chains",
                ));
            }
            explicit_n.ok_or_else(|| UsageError::new("--n is required"))?
        };

        if matches!(family, Family::Collective) && n % 2 == 1 {
            return Err(UsageError::new(format!(
                "--n must be even for --model collective, got {}",
                n
            )));
        }
        if let Family::BoseHubbard { n_b: Some(n_b), .. } = family {
            if n_b > n {
                return Err(UsageError::new(format!(
                    "--nb {} exceeds the {} sites given by --n",
                    n_b, n
                )));
            }
        }

        Ok(ModelSpec {
            family,
            d: if lattice_family { d } else { 1 },
            n,
            side: if lattice_family { side } else { None },
            periodic,
            b,
            seed,
            restarts,
        })
    }
}

impl ModelSpec {
    pub fn with_n(&self, n: usize) -> ModelSpec {
        ModelSpec { n, ..self.clone() }
    }

    /// Boson count: explicit --nb, or half filling.
    pub fn bh_filling(&self) -> usize {
        match self.family {
            Family::BoseHubbard { n_b: Some(n_b), .. } => n_b,
            _ => self.n / 2,
        }
    }

    pub fn graph(&self) -> Result<InteractionGraph, LatticeError> {
        if self.d == 1 {
            chain(self.n, self.periodic)
        } else {
            cubic(
                self.d,
                self.side.expect("side validated at parse"),
                self.periodic,
            )
        }
    }

    /// The model instance at field `b` (lattice families) or as configured.
    pub fn model_at(&self, b: f64) -> Result<SpinModel, LatticeError> {
        Ok(match &self.family {
            Family::Heisenberg => SpinModel::Heisenberg {
                graph: self.graph()?,
                field: b,
            },
            Family::Xy { jx, jy } => SpinModel::Xy {
                graph: self.graph()?,
                jx: *jx,
                jy: *jy,
                field: b,
            },
            Family::Collective => SpinModel::Collective { n: self.n },
            Family::BoseHubbard { hop, .. } => SpinModel::BoseHubbardHardcore {
                n_sites: self.n,
                n_particles: self.bh_filling(),
                hop: *hop,
                periodic: self.periodic,
            },
        })
    }

    /// Whether the closed-form lattice bounds apply: periodic boundaries
    /// and a geometry where the edge count is exactly d*n (even chains of
    /// at least 4 sites, cubic sides of at least 4).
    fn closed_form_applies(&self) -> bool {
        self.periodic
            && match self.d {
                1 => self.n >= 4 && self.n.is_multiple_of(2),
                _ => self.side.is_some_and(|s| s >= 4),
            }
    }

    /// The closed-form separable bound at field `b`, when one applies.
    pub fn analytic_bound(&self, b: f64) -> Option<f64> {
        match &self.family {
            Family::Heisenberg if self.closed_form_applies() => {
                Some(heisenberg_bound(self.d, self.n, b))
            }
            Family::Xy { jx, jy } if self.closed_form_applies() => {
                xy_bound(self.d, self.n, *jx, *jy, b).ok()
            }
            Family::Collective => Some(2.0 * self.n as f64),
            Family::BoseHubbard { hop, .. } => bh_bound(self.n, self.bh_filling(), *hop).ok(),
            _ => None,
        }
    }

    /// Numerical separable bound at field `b`: the two-sublattice recipe
    /// where it applies, generic coordinate descent otherwise.
    pub fn numeric_bound(&self, b: f64) -> Result<(SeparableBound, &'static str), BoundError> {
        match &self.family {
            Family::Heisenberg | Family::Xy { .. } => {
                let model = self.model_at(b)?;
                match minimize_pair(&model) {
                    Ok(bound) => Ok((bound, "pairwise")),
                    Err(ClassicalError::NotBipartite { .. })
                    | Err(ClassicalError::NonUniformDegree) => {
                        let bound = minimize_product(&model, self.restarts, self.seed)?;
                        Ok((bound, "descent"))
                    }
                    Err(e) => Err(e.into()),
                }
            }
            Family::Collective => Ok((
                SeparableBound {
                    value: 2.0 * self.n as f64,
                    source: spinwitness::classical::BoundSource::Analytic,
                    config: None,
                },
                "analytic",
            )),
            Family::BoseHubbard { hop, .. } => {
                let value = gutzwiller_min(self.n, self.bh_filling(), *hop)?;
                Ok((
                    SeparableBound {
                        value,
                        source: spinwitness::classical::BoundSource::Analytic,
                        config: None,
                    },
                    "gutzwiller",
                ))
            }
        }
    }

    /// The bound used by ground/sweep/tbound: closed form when exact,
    /// otherwise the numerical minimizer.
    pub fn bound_value(&self, b: f64) -> Result<f64, BoundError> {
        match self.analytic_bound(b) {
            Some(v) => Ok(v),
            None => Ok(self.numeric_bound(b)?.0.value),
        }
    }
}

/// Errors from bound resolution (lattice construction or minimization).
#[derive(Debug, Error)]
pub enum BoundError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}
