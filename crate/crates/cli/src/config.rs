//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cavity_array::{rabi, ArrayParams, Excitation, SingleExcitationState};
use serde::Deserialize;

use crate::error::CliError;

pub const SYMBOLIC_T_MAX: &str = "4pi_over_omega";
pub const DEFAULT_ETA_LIST: [f64; 3] = [-0.125, -0.25, -0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Effective,
    Both,
}

impl Method {
    pub fn wants_exact(self) -> bool {
        matches!(self, Method::Exact | Method::Both)
    }

    pub fn wants_effective(self) -> bool {
        matches!(self, Method::Effective | Method::Both)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Effective => "effective",
            Method::Both => "both",
        })
    }
}

/// `atom:<site>` or `photon:<site>`, sites counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Initial {
    pub kind: Excitation,
    pub site: usize,
}

impl Initial {
    pub fn state(&self, n_cavities: usize) -> Result<SingleExcitationState, CliError> {
        Ok(SingleExcitationState::localized(
            n_cavities, self.kind, self.site,
        )?)
    }
}

impl FromStr for Initial {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || {
            CliError::Config(format!(
                "initial state '{s}': expected atom:<site> or photon:<site>"
            ))
        };
        let (kind, site) = s.split_once(':').ok_or_else(bad)?;
        let kind = match kind.trim() {
            "atom" => Excitation::Atom,
            "photon" => Excitation::Photon,
            _ => return Err(bad()),
        };
        let site = site.trim().parse().map_err(|_| bad())?;
        Ok(Self { kind, site })
    }
}

impl fmt::Display for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Excitation::Atom => "atom",
            Excitation::Photon => "photon",
        };
        write!(f, "{kind}:{}", self.site)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeMax {
    Fixed(f64),
    /// `4 pi / Omega`, one full revival of the resonant bound pair.
    FourPiOverOmega,
}

impl FromStr for TimeMax {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == SYMBOLIC_T_MAX {
            return Ok(TimeMax::FourPiOverOmega);
        }
        s.trim().parse().map(TimeMax::Fixed).map_err(|_| {
            CliError::Config(format!(
                "t_max '{s}': expected a number or '{SYMBOLIC_T_MAX}'"
            ))
        })
    }
}

impl TimeMax {
    pub fn resolve(self, params: &ArrayParams) -> Result<f64, CliError> {
        let t = match self {
            TimeMax::Fixed(t) => t,
            TimeMax::FourPiOverOmega => {
                let omega = rabi(params.coupling_j(), params.delta());
                if omega == 0.0 {
                    return Err(CliError::Config(format!(
                        "{SYMBOLIC_T_MAX} is undefined when J = 0 and delta = 0"
                    )));
                }
                4.0 * PI / omega
            }
        };
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!(
                "t_max = {t} must be positive and finite"
            )));
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum TimeMaxValue {
    Number(f64),
    Text(String),
}

/// Keys accepted in a `--config` JSON file. Names match the long flags with
/// dashes or underscores.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub eta: Option<f64>,
    pub kappa: Option<f64>,
    #[serde(alias = "omega-f")]
    pub omega_f: Option<f64>,
    pub delta: Option<f64>,
    pub j: Option<f64>,
    pub initial: Option<String>,
    pub method: Option<Method>,
    #[serde(alias = "t-max")]
    t_max: Option<TimeMaxValue>,
    pub steps: Option<usize>,
    #[serde(alias = "eta-list")]
    pub eta_list: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("parsing {}: {e}", path.display())))
    }
}

/// Flag values; anything set here wins over the file.
#[derive(Debug, Clone, Default, PartialEq, clap::Args)]
pub struct Overrides {
    /// Number of cavities (odd)
    #[arg(long)]
    pub n: Option<usize>,
    /// Hopping staggering, |eta| <= 1
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Mean hopping rate
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Cavity frequency
    #[arg(long = "omega-f", allow_hyphen_values = true)]
    pub omega_f: Option<f64>,
    /// Detuning omega_f - omega_a
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Atom-field coupling
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    /// Initial excitation, atom:<site> or photon:<site>
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Final time, a number or 4pi_over_omega
    #[arg(long = "t-max", allow_hyphen_values = true)]
    pub t_max: Option<String>,
    /// Number of time samples, endpoints included
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the keys above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ArrayParams,
    pub initial: Initial,
    pub method: Method,
    pub t_max: TimeMax,
    pub steps: usize,
    pub eta_list: Vec<f64>,
    pub out: Option<PathBuf>,
    /// True when any physical parameter came from a flag or file.
    pub params_given: bool,
}

impl RunConfig {
    /// Defaults reproduce the canonical strong-hopping run: N = 101,
    /// eta = -0.25, kappa = 100, omega_f = 1000, delta = 0, J = 1, atom:1
    /// over one revival in 201 samples.
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::merge(flags, file)
    }

    pub fn merge(flags: &Overrides, file: FileConfig) -> Result<Self, CliError> {
        let n = flags.n.or(file.n);
        let eta = flags.eta.or(file.eta);
        let kappa = flags.kappa.or(file.kappa);
        let omega_f = flags.omega_f.or(file.omega_f);
        let delta = flags.delta.or(file.delta);
        let j = flags.j.or(file.j);
        let params_given = [
            n.is_some(),
            eta.is_some(),
            kappa.is_some(),
            omega_f.is_some(),
            delta.is_some(),
            j.is_some(),
        ]
        .iter()
        .any(|b| *b);
        let params = ArrayParams::new(
            n.unwrap_or(101),
            eta.unwrap_or(-0.25),
            kappa.unwrap_or(100.0),
            omega_f.unwrap_or(1000.0),
            delta.unwrap_or(0.0),
            j.unwrap_or(1.0),
        )?;

        let initial: Initial = flags
            .initial
            .clone()
            .or(file.initial)
            .as_deref()
            .unwrap_or("atom:1")
            .parse()?;
        if initial.site < 1 || initial.site > params.n_cavities() {
            return Err(CliError::Config(format!(
                "initial site {} outside 1..={}",
                initial.site,
                params.n_cavities()
            )));
        }

        let t_max = match (&flags.t_max, file.t_max) {
            (Some(s), _) => s.parse()?,
            (None, Some(TimeMaxValue::Number(t))) => TimeMax::Fixed(t),
            (None, Some(TimeMaxValue::Text(s))) => s.parse()?,
            (None, None) => TimeMax::FourPiOverOmega,
        };
        let steps = flags.steps.or(file.steps).unwrap_or(201);
        if steps < 2 {
            return Err(CliError::Config(format!(
                "steps = {steps}: need at least 2"
            )));
        }

        Ok(Self {
            params,
            initial,
            method: flags.method.or(file.method).unwrap_or(Method::Both),
            t_max,
            steps,
            eta_list: file.eta_list.unwrap_or_else(|| DEFAULT_ETA_LIST.to_vec()),
            out: flags.out.clone(),
            params_given,
        })
    }

    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        Ok(cavity_array::linspace(
            self.t_max.resolve(&self.params)?,
            self.steps,
        ))
    }
}
