//! Subcommand bodies. Each returns its stdout text and output files instead
//! of touching the filesystem, so runs are easy to compare byte for byte.

use cavity_array::identities::{
    uniform_limit_check, verify_default_grid, verify_table, TOL_MATRIX,
};
use cavity_array::{
    evolve_effective, exact_trace, full_spectrum, regime_validity, ArrayParams, EffectiveModel,
    EvolutionTrace, ModeLabel, ModeTable, ResidualReport,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{num, params_line, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// An identity residual exceeded its tolerance.
    Regression,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    /// `(file name, contents)`, written under `--out` when given.
    pub files: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub status: Status,
}

impl Output {
    fn new(stdout: String) -> Self {
        Self {
            stdout,
            files: Vec::new(),
            warnings: Vec::new(),
            status: Status::Ok,
        }
    }

    /// A CSV that goes to a file under `--out`, or to stdout otherwise.
    fn file_or_stdout(cfg: &RunConfig, name: &str, text: String) -> Self {
        match cfg.out {
            Some(_) => Self {
                files: vec![(name.to_string(), text)],
                ..Self::new(String::new())
            },
            None => Self::new(text),
        }
    }
}

fn regime_warning(params: &ArrayParams) -> Option<String> {
    let r = regime_validity(params);
    (!r.ok).then(|| {
        format!(
            "warning: outside the strong-hopping regime (J/(kappa|eta|) = {}, delta = {}); effective dynamics may be inaccurate",
            r.ratio,
            params.delta()
        )
    })
}

fn require_analytic(params: &ArrayParams, what: &str) -> Result<(), CliError> {
    params.require_analytic().map_err(|_| {
        CliError::Config(format!(
            "{what} needs |eta| < 1 (got eta = {}); use --method exact for the fully dimerized array",
            params.eta()
        ))
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<Output, CliError> {
    require_analytic(&cfg.params, "the normal-mode spectrum")?;
    let table = full_spectrum(&cfg.params)?;
    let mut csv = Csv::new(
        &[params_line(&cfg.params)],
        &["label", "m", "branch", "k", "epsilon", "theta", "frequency"],
    );
    for mode in table.modes() {
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        let (m, branch) = match mode.label {
            ModeLabel::Bound => (String::new(), String::new()),
            ModeLabel::Band { m, branch } => (m.to_string(), format!("{:+}", branch.mu_i32())),
        };
        csv.row([
            match mode.label {
                ModeLabel::Bound => "bound".to_string(),
                ModeLabel::Band { .. } => "band".to_string(),
            },
            m,
            branch,
            opt(mode.wavevector),
            opt(mode.epsilon),
            opt(mode.theta),
            num(mode.frequency),
        ]);
    }
    Ok(Output::file_or_stdout(cfg, "spectrum.csv", csv.finish()))
}

/// Site amplitudes of the bound mode, or of every mode with `all`.
pub fn modes(cfg: &RunConfig, all: bool) -> Result<Output, CliError> {
    require_analytic(&cfg.params, "the normal-mode table")?;
    let table = full_spectrum(&cfg.params)?;
    let mut csv = Csv::new(&[params_line(&cfg.params)], &["label", "site", "amplitude"]);
    let selected = if all {
        table.modes()
    } else {
        &table.modes()[..1]
    };
    for mode in selected {
        let label = mode.label.to_string();
        for (x, a) in mode.amplitudes.iter().enumerate() {
            csv.row([label.clone(), (x + 1).to_string(), num(*a)]);
        }
    }
    Ok(Output::file_or_stdout(cfg, "modes.csv", csv.finish()))
}

fn run_effective(
    params: &ArrayParams,
    cfg: &RunConfig,
    times: &[f64],
) -> Result<EvolutionTrace, CliError> {
    let model = EffectiveModel::new(params)?;
    Ok(evolve_effective(
        &model,
        &cfg.initial.state(params.n_cavities())?,
        times,
    )?)
}

fn run_exact(
    params: &ArrayParams,
    cfg: &RunConfig,
    times: &[f64],
) -> Result<EvolutionTrace, CliError> {
    Ok(exact_trace(
        params,
        &cfg.initial.state(params.n_cavities())?,
        times,
    )?)
}

fn header_lines(cfg: &RunConfig) -> Vec<String> {
    vec![
        params_line(&cfg.params),
        format!("# initial={} method={}", cfg.initial, cfg.method),
    ]
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn evolve(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = &cfg.params;
    let times = cfg.times()?;
    let mut warnings = Vec::new();
    if cfg.method.wants_effective() {
        require_analytic(p, "the effective model")?;
        warnings.extend(regime_warning(p));
    }
    let (exact, effective) = rayon::join(
        || {
            cfg.method
                .wants_exact()
                .then(|| run_exact(p, cfg, &times))
                .transpose()
        },
        || {
            cfg.method
                .wants_effective()
                .then(|| run_effective(p, cfg, &times))
                .transpose()
        },
    );
    let traces: Vec<(&str, EvolutionTrace)> = [("exact", exact?), ("effective", effective?)]
        .into_iter()
        .filter_map(|(name, t)| t.map(|t| (name, t)))
        .collect();

    let single = traces.len() == 1;
    let mut trace_header = vec!["t".to_string(), "site".to_string()];
    let mut summary_header = vec!["t".to_string()];
    for (name, _) in &traces {
        let suffix = if single {
            String::new()
        } else {
            format!("_{name}")
        };
        trace_header.push(format!("p_field{suffix}"));
        trace_header.push(format!("p_atom{suffix}"));
        summary_header.push(format!("total_field{suffix}"));
        summary_header.push(format!("total_atom{suffix}"));
    }
    if !single {
        trace_header.extend(["abs_diff_field".to_string(), "abs_diff_atom".to_string()]);
        summary_header.extend([
            "abs_diff_total_field".to_string(),
            "abs_diff_total_atom".to_string(),
        ]);
    }
    let mut trace_csv = Csv::new(&header_lines(cfg), &refs(&trace_header));
    let mut summary_csv = Csv::new(&header_lines(cfg), &refs(&summary_header));

    for (i, t) in times.iter().enumerate() {
        for x in 0..p.n_cavities() {
            let mut row = vec![num(*t), (x + 1).to_string()];
            for (_, tr) in &traces {
                row.push(num(tr.p_field[(i, x)]));
                row.push(num(tr.p_atom[(i, x)]));
            }
            if let [(_, a), (_, b)] = traces.as_slice() {
                row.push(num((a.p_field[(i, x)] - b.p_field[(i, x)]).abs()));
                row.push(num((a.p_atom[(i, x)] - b.p_atom[(i, x)]).abs()));
            }
            trace_csv.row(row);
        }
        let mut row = vec![num(*t)];
        for (_, tr) in &traces {
            row.push(num(tr.total_field[i]));
            row.push(num(tr.total_atom[i]));
        }
        if let [(_, a), (_, b)] = traces.as_slice() {
            row.push(num((a.total_field[i] - b.total_field[i]).abs()));
            row.push(num((a.total_atom[i] - b.total_atom[i]).abs()));
        }
        summary_csv.row(row);
    }

    let summary = summary_csv.finish();
    let mut out = Output::new(summary.clone());
    out.warnings = warnings;
    if cfg.out.is_some() {
        out.files = vec![
            ("trace.csv".to_string(), trace_csv.finish()),
            ("summary.csv".to_string(), summary),
        ];
    }
    Ok(out)
}

/// One sweep entry: the staggering, the method used and its trace.
pub type SweepEntry = (f64, &'static str, EvolutionTrace);

/// Traces for every staggering in `cfg.eta_list`, computed in parallel and
/// returned in list order. `|eta| = 1` runs on the exact propagator only.
pub fn sweep_traces(cfg: &RunConfig) -> Result<(Vec<SweepEntry>, Vec<String>), CliError> {
    let times = cfg.times()?;
    let per_eta: Vec<Result<_, CliError>> = cfg
        .eta_list
        .par_iter()
        .map(|&eta| {
            let p = cfg.params.with_eta(eta)?;
            let analytic = eta.abs() < 1.0;
            let mut entries = Vec::new();
            let mut warning = None;
            if cfg.method.wants_exact() || !analytic {
                entries.push((eta, "exact", run_exact(&p, cfg, &times)?));
            }
            if cfg.method.wants_effective() && analytic {
                warning = regime_warning(&p);
                entries.push((eta, "effective", run_effective(&p, cfg, &times)?));
            }
            Ok((entries, warning))
        })
        .collect();
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for r in per_eta {
        let (e, w) = r?;
        entries.extend(e);
        warnings.extend(w);
    }
    Ok((entries, warnings))
}

/// Time of the largest total field, earliest on ties.
pub fn field_maximum(trace: &EvolutionTrace) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (f, t) in trace.total_field.iter().zip(&trace.times) {
        if *f > best.0 {
            best = (*f, *t);
        }
    }
    best
}

pub fn sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let (entries, warnings) = sweep_traces(cfg)?;
    let comments = vec![
        params_line(&cfg.params),
        format!("# initial={} method={}", cfg.initial, cfg.method),
    ];
    let mut full = Csv::new(
        &comments,
        &["eta", "method", "t", "total_field", "total_atom"],
    );
    let mut maxima = Csv::new(&comments, &["eta", "method", "max_total_field", "t_at_max"]);
    for (eta, method, tr) in &entries {
        for i in 0..tr.len() {
            full.row([
                num(*eta),
                method.to_string(),
                num(tr.times[i]),
                num(tr.total_field[i]),
                num(tr.total_atom[i]),
            ]);
        }
        let (f, t) = field_maximum(tr);
        maxima.row([num(*eta), method.to_string(), num(f), num(t)]);
    }
    let maxima = maxima.finish();
    let mut out = Output::new(maxima.clone());
    out.warnings = warnings;
    if cfg.out.is_some() {
        out.files = vec![
            ("sweep.csv".to_string(), full.finish()),
            ("sweep_max.csv".to_string(), maxima),
        ];
    }
    Ok(out)
}

/// Adds a small error to one amplitude so the identity checks must fail.
pub fn corrupt(table: &ModeTable) -> ModeTable {
    let mut modes = table.modes().to_vec();
    modes[0].amplitudes[0] += 1e-3;
    ModeTable::from_parts(*table.params(), modes)
}

/// Identity residuals at the configured point when any parameter was given,
/// otherwise over the default grid.
pub fn verify(cfg: &RunConfig, inject_fault: bool) -> Result<Output, CliError> {
    let mut report = ResidualReport::default();
    let point = if cfg.params_given {
        require_analytic(&cfg.params, "identity verification")?;
        let table = full_spectrum(&cfg.params)?;
        report.extend(verify_table(&cfg.params, &table)?);
        let uniform = cfg.params.with_eta(0.0)?;
        report.push(
            "uniform_limit",
            &uniform,
            uniform_limit_check(cfg.params.n_cavities())?,
            TOL_MATRIX,
        );
        cfg.params
    } else {
        report.extend(verify_default_grid()?);
        ArrayParams::new(1, 0.0, 1.0, 0.0, 0.0, 0.1)?
    };
    if inject_fault {
        let bad = corrupt(&full_spectrum(&point)?);
        let mut faulty = verify_table(&point, &bad)?;
        faulty
            .entries
            .iter_mut()
            .for_each(|e| e.identity.insert_str(0, "injected_fault/"));
        report.extend(faulty);
    }
    let mut json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Config(format!("serializing report: {e}")))?;
    json.push('\n');
    let mut out = Output::new(json.clone());
    if cfg.out.is_some() {
        out.files = vec![("report.json".to_string(), json)];
    }
    if !report.all_pass() {
        out.status = Status::Regression;
    }
    Ok(out)
}
