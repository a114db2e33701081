use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use cavity_array_cli::{commands, Output, Overrides, RunConfig, Status};
use clap::{Parser, Subcommand};

/// Single-excitation dynamics of staggered coupled-cavity arrays.
///
/// Frequencies are in units of J and times in units of 1/J. Exit status is 0
/// on success, 1 on invalid input and 2 when `verify` finds a failing
/// identity.
#[derive(Debug, Parser)]
#[command(name = "cavity-array", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal-mode frequencies of the free photon field
    Spectrum {
        #[command(flatten)]
        flags: Overrides,
    },
    /// Site amplitudes of the bound mode (or all modes)
    Modes {
        #[command(flatten)]
        flags: Overrides,
        /// Emit every mode, not only the bound one
        #[arg(long)]
        all: bool,
    },
    /// Per-site and total excitation probabilities over time
    Evolve {
        #[command(flatten)]
        flags: Overrides,
    },
    /// Total probabilities for a list of staggerings
    Sweep {
        #[command(flatten)]
        flags: Overrides,
        /// Comma-separated staggerings; |eta| = 1 runs exact-only
        #[arg(long = "eta-list", value_delimiter = ',', allow_hyphen_values = true)]
        eta_list: Option<Vec<f64>>,
    },
    /// Residuals of the normal-mode identities as a JSON report
    Verify {
        #[command(flatten)]
        flags: Overrides,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<Output> {
    let out = match cli.command {
        Command::Spectrum { flags } => commands::spectrum(&RunConfig::resolve(&flags)?)?,
        Command::Modes { flags, all } => commands::modes(&RunConfig::resolve(&flags)?, all)?,
        Command::Evolve { flags } => commands::evolve(&RunConfig::resolve(&flags)?)?,
        Command::Sweep { flags, eta_list } => {
            let mut cfg = RunConfig::resolve(&flags)?;
            if let Some(list) = eta_list {
                cfg.eta_list = list;
            }
            commands::sweep(&cfg)?
        }
        Command::Verify {
            flags,
            inject_fault,
        } => commands::verify(&RunConfig::resolve(&flags)?, inject_fault)?,
    };
    Ok(out)
}

fn out_dir(cli: &Cli) -> Option<PathBuf> {
    let flags = match &cli.command {
        Command::Spectrum { flags }
        | Command::Modes { flags, .. }
        | Command::Evolve { flags }
        | Command::Sweep { flags, .. }
        | Command::Verify { flags, .. } => flags,
    };
    flags.out.clone()
}

fn write_files(out: &Output, dir: Option<PathBuf>) -> anyhow::Result<()> {
    if let Some(dir) = dir {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, text) in &out.files {
            let path = dir.join(name);
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

/// What one invocation prints and how it exits.
#[derive(Debug)]
struct Execution {
    code: u8,
    stdout: String,
    stderr: String,
}

fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // usage errors are bad input (1), not a failed verification (2)
        Err(e) if e.use_stderr() => {
            return Execution {
                code: 1,
                stdout: String::new(),
                stderr: e.render().to_string(),
            }
        }
        Err(e) => {
            return Execution {
                code: 0,
                stdout: e.render().to_string(),
                stderr: String::new(),
            }
        }
    };
    let dir = out_dir(&cli);
    match run(cli).and_then(|out| write_files(&out, dir).map(|_| out)) {
        Ok(out) => Execution {
            code: match out.status {
                Status::Ok => 0,
                Status::Regression => 2,
            },
            stderr: out.warnings.iter().map(|w| format!("{w}\n")).collect(),
            stdout: out.stdout,
        },
        Err(e) => Execution {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn main() -> ExitCode {
    let ex = execute(std::env::args_os());
    eprint!("{}", ex.stderr);
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(ex.stdout.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(1);
    }
    ExitCode::from(ex.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Execution {
        execute(std::iter::once("cavity-array").chain(args.iter().copied()))
    }

    fn data_rows(text: &str) -> Vec<Vec<String>> {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn spectrum_of_single_cavity_is_one_bound_row() {
        let o = run_args(&["spectrum", "--n", "1", "--eta", "0.3"]);
        assert_eq!(o.code, 0);
        let text = o.stdout;
        assert!(text.starts_with("# frequencies in units of J"));
        let rows = data_rows(&text);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0][0], "bound");
        assert_eq!(rows[0][6], "1.0000000000000000e3");
    }

    #[test]
    fn uniform_spectrum_matches_cosine_grid() {
        let o = run_args(&[
            "spectrum",
            "--n",
            "7",
            "--eta",
            "0",
            "--kappa",
            "1",
            "--omega-f",
            "0",
        ]);
        let mut w: Vec<f64> = data_rows(&o.stdout)
            .iter()
            .map(|r| r[6].parse().unwrap())
            .collect();
        w.sort_by(f64::total_cmp);
        let mut grid: Vec<f64> = (1..=7)
            .map(|m| -2.0 * (std::f64::consts::PI * m as f64 / 8.0).cos())
            .collect();
        grid.sort_by(f64::total_cmp);
        for (a, b) in w.iter().zip(&grid) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_profile_decays_for_negative_eta_and_grows_for_positive() {
        let amps = |eta: &str| -> Vec<f64> {
            let o = run_args(&["modes", "--n", "51", "--eta", eta]);
            assert_eq!(o.code, 0);
            data_rows(&o.stdout)
                .iter()
                .map(|r| r[2].parse().unwrap())
                .collect()
        };
        let down = amps("-0.2");
        let up = amps("0.2");
        assert_eq!(down.len(), 51);
        assert!(down.iter().skip(1).step_by(2).all(|a| *a == 0.0));
        assert!(down[0].abs() > down[2].abs() && down[2].abs() > down[50].abs());
        assert!(up[0].abs() < up[50].abs());
    }

    #[test]
    fn modes_all_lists_every_mode() {
        let o = run_args(&["modes", "--n", "5", "--eta", "0.1", "--all"]);
        let rows = data_rows(&o.stdout);
        assert_eq!(rows.len(), 25);
        assert_eq!(rows[5][0], "band_1_+1");
    }

    #[test]
    fn evolve_writes_long_trace_and_summary() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().join("run");
        let o = run_args(&[
            "evolve",
            "--n",
            "11",
            "--eta",
            "-0.4",
            "--kappa",
            "50",
            "--steps",
            "5",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let trace = std::fs::read_to_string(dir.join("trace.csv")).unwrap();
        let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
        assert_eq!(o.stdout, summary);
        assert!(trace.contains("t,site,p_field_exact,p_atom_exact,p_field_effective,p_atom_effective,abs_diff_field,abs_diff_atom"));
        assert_eq!(data_rows(&trace).len(), 5 * 11);
        assert_eq!(data_rows(&summary).len(), 5);
    }

    #[test]
    fn evolve_even_site_is_frozen_in_effective_model() {
        let o = run_args(&[
            "evolve",
            "--initial",
            "atom:2",
            "--method",
            "effective",
            "--steps",
            "9",
        ]);
        assert_eq!(o.code, 0);
        for row in data_rows(&o.stdout) {
            assert_eq!(row[1], "0.0000000000000000e0");
            assert_eq!(row[2], "1.0000000000000000e0");
        }
    }

    #[test]
    fn decoupled_exact_run_is_constant() {
        let o = run_args(&[
            "evolve", "--j", "0", "--method", "exact", "--t-max", "5", "--steps", "6", "--n", "9",
        ]);
        assert_eq!(o.code, 0);
        for row in data_rows(&o.stdout) {
            let atom: f64 = row[2].parse().unwrap();
            assert!((atom - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn regime_warning_goes_to_stderr() {
        let o = run_args(&["evolve", "--eta", "0", "--steps", "3", "--n", "5"]);
        assert_eq!(o.code, 0);
        assert!(o.stderr.contains("warning"));
        let o = run_args(&["evolve", "--steps", "3", "--n", "5"]);
        assert!(o.stderr.is_empty());
    }

    #[test]
    fn invalid_input_exits_one() {
        let o = run_args(&["verify", "--n", "4"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("odd"));
        assert_eq!(run_args(&["evolve", "--initial", "atom:200"]).code, 1);
        assert_eq!(run_args(&["evolve", "--eta", "-1"]).code, 1);
        assert_eq!(
            run_args(&["evolve", "--eta", "1.5", "--method", "exact"]).code,
            1
        );
        assert_eq!(
            run_args(&["spectrum", "--config", "/nonexistent.json"]).code,
            1
        );
    }

    #[test]
    fn usage_errors_exit_one_and_help_exits_zero() {
        let o = run_args(&["evolve", "--no-such-flag"]);
        assert_eq!(o.code, 1);
        assert!(!o.stderr.is_empty());
        let o = run_args(&["--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("verify"));
        assert!(!o.stdout.contains("inject"));
    }

    #[test]
    fn dimerized_array_runs_exact_only() {
        let o = run_args(&[
            "evolve", "--eta", "-1", "--method", "exact", "--n", "7", "--steps", "3",
        ]);
        assert_eq!(o.code, 0);
    }

    #[test]
    fn verify_point_passes_and_fault_fails() {
        let o = run_args(&["verify", "--n", "15", "--eta", "0.25"]);
        assert_eq!(o.code, 0);
        let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        let entries = report["entries"].as_array().unwrap();
        for key in ["identity", "params", "residual", "tolerance", "pass"] {
            assert!(entries[0].get(key).is_some(), "{key}");
        }
        let o = run_args(&["verify", "--n", "15", "--eta", "0.25", "--inject-fault"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn sweep_marks_dimerized_entries_exact_only() {
        let o = run_args(&[
            "sweep",
            "--n",
            "21",
            "--eta-list",
            "-0.25,-1",
            "--steps",
            "41",
        ]);
        assert_eq!(o.code, 0);
        let rows = data_rows(&o.stdout);
        let methods: Vec<(&str, &str)> = rows
            .iter()
            .map(|r| (r[0].as_str(), r[1].as_str()))
            .collect();
        assert_eq!(
            methods,
            vec![
                ("-2.5000000000000000e-1", "exact"),
                ("-2.5000000000000000e-1", "effective"),
                ("-1.0000000000000000e0", "exact"),
            ]
        );
    }

    #[test]
    fn config_file_and_flag_override() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tmp.path().join("c.json");
        std::fs::write(&cfg, r#"{"n": 3, "eta": 0.5, "kappa": 1, "omega_f": 0}"#).unwrap();
        let o = run_args(&["spectrum", "--config", cfg.to_str().unwrap()]);
        assert_eq!(data_rows(&o.stdout).len(), 3);
        let o = run_args(&["spectrum", "--config", cfg.to_str().unwrap(), "--n", "5"]);
        assert_eq!(data_rows(&o.stdout).len(), 5);
    }
}
