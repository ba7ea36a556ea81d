//! Batch front-end shared by the `vldht` binary and its tests: each command
//! takes a JSON config, resolves it, and returns a record that embeds the
//! resolved config so the run can be repeated from the record alone.

pub mod config;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{
    grid_oracle, solve_exponent, sweep_curve, write_curve_csv, ExponentQuery, ExponentResult,
    GridOptions, SolverOptions,
};
use crate::scheme::{index_length, string_decode, string_encode, SchemeParams};
use crate::sim::{
    empirical_exponent, exact_enumerate_guarded, simulate, theory_report, write_csv_rows, CsvRow,
    TrialPlan,
};
use config::{
    channel_rows, model_rows, parse, CodecCheckConfig, ExactConfig, ExponentConfig, FitConfig,
    SimulateConfig, SweepConfig, ValidateConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::CheckFailed(_) => EXIT_CHECK_FAILED,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Exponent,
    Sweep,
    Simulate,
    Exact,
    ExponentFit,
    Validate,
    CodecCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Exponent => "exponent",
            Command::Sweep => "sweep",
            Command::Simulate => "simulate",
            Command::Exact => "exact",
            Command::ExponentFit => "exponent-fit",
            Command::Validate => "validate",
            Command::CodecCheck => "codec-check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Command-line values that override the config file.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub resolution: Option<f64>,
}

/// What a command produced. A failed check still carries its record, so the
/// caller writes it before exiting with the check-failure status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub failure: Option<String>,
}

#[derive(Serialize)]
struct Record<'a, C, R> {
    command: &'a str,
    config: C,
    result: R,
}

fn json_record<C: Serialize, R: Serialize>(cmd: Command, config: &C, result: &R) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Record {
        command: cmd.name(),
        config,
        result,
    })?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(rows: &[CsvRow], header: bool) -> Result<String> {
    let mut buf = Vec::new();
    write_csv_rows(&mut buf, rows, header)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn curve_csv(curve: &[ExponentResult]) -> Result<String> {
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, curve)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn reject_flag(cmd: Command, flag: &str, given: bool) -> Result<()> {
    if given {
        return Err(Error::config(flag, format!("not accepted by `{}`", cmd.name())));
    }
    Ok(())
}

fn solver_options(seed: u64, u_alphabet: Option<usize>) -> SolverOptions {
    SolverOptions {
        seed,
        u_alphabet,
        ..SolverOptions::default()
    }
}

/// Runs `cmd` on the JSON `config_text`. `csv_header` is false when rows are
/// appended to an existing table.
pub fn run(cmd: Command, config_text: &str, ov: Overrides, format: Format, csv_header: bool) -> Result<Outcome> {
    let ok = |body| Outcome { body, failure: None };
    match cmd {
        Command::Exponent => {
            reject_flag(cmd, "--trials", ov.trials.is_some())?;
            let mut c: ExponentConfig = parse(config_text)?;
            if let Some(s) = ov.seed {
                c.seed = s;
            }
            if let Some(r) = ov.resolution {
                c.oracle_resolution = Some(r);
            }
            let model = c.model.model("model")?;
            c.model = model_rows(&model);
            let query = ExponentQuery::new(c.epsilon, c.rate)?;
            let solved = solve_exponent(&model, &query, &solver_options(c.seed, c.u_alphabet))?;
            let oracle = match c.oracle_resolution {
                Some(res) => Some(grid_oracle(
                    &model,
                    &query,
                    &GridOptions {
                        resolution: res,
                        u_alphabet: c.u_alphabet,
                        ..GridOptions::default()
                    },
                )?),
                None => None,
            };
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        solver: ExponentResult,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        oracle: Option<ExponentResult>,
                    }
                    json_record(cmd, &c, &Out { solver: solved, oracle }).map(ok)
                }
                Format::Csv => curve_csv(&[solved]).map(ok),
            }
        }
        Command::Sweep => {
            reject_flag(cmd, "--trials", ov.trials.is_some())?;
            reject_flag(cmd, "--resolution", ov.resolution.is_some())?;
            let mut c: SweepConfig = parse(config_text)?;
            if let Some(s) = ov.seed {
                c.seed = s;
            }
            let model = c.model.model("model")?;
            c.model = model_rows(&model);
            let curve = sweep_curve(&model, c.epsilon, &c.rates, &solver_options(c.seed, c.u_alphabet))?;
            if let Some(w) = curve.windows(2).find(|w| w[1].theta < w[0].theta) {
                return Err(Error::CheckFailed(format!(
                    "theta decreases from {} at R = {} to {} at R = {}",
                    w[0].theta, w[0].rate, w[1].theta, w[1].rate
                )));
            }
            match format {
                Format::Json => json_record(cmd, &c, &curve).map(ok),
                Format::Csv => curve_csv(&curve).map(ok),
            }
        }
        Command::Simulate => {
            reject_flag(cmd, "--resolution", ov.resolution.is_some())?;
            let mut c: SimulateConfig = parse(config_text)?;
            if let Some(s) = ov.seed {
                c.seed = s;
            }
            if let Some(t) = ov.trials {
                c.trials = t;
            }
            if c.trials == 0 {
                return Err(Error::config("trials", "must be at least 1"));
            }
            let model = c.model.model("model")?;
            let ch = c.test_channel.channel("test_channel", model.x_alphabet())?;
            c.model = model_rows(&model);
            c.test_channel = channel_rows(&ch);
            let params = SchemeParams::build(&model, &ch, c.scheme.clone())?;
            let plan = TrialPlan {
                hypotheses: c.hypotheses,
                num_trials: c.trials,
                master_seed: c.seed,
            };
            let report = simulate(&params, &plan);
            match format {
                Format::Json => json_record(cmd, &c, &report).map(ok),
                Format::Csv => csv_rows(&[CsvRow::from_report(&report, Some(params.i_uy()), c.seed)], csv_header).map(ok),
            }
        }
        Command::Exact => {
            reject_flag(cmd, "--trials", ov.trials.is_some())?;
            reject_flag(cmd, "--resolution", ov.resolution.is_some())?;
            let mut c: ExactConfig = parse(config_text)?;
            if let Some(s) = ov.seed {
                c.scheme.codebook_seed = s;
            }
            let model = c.model.model("model")?;
            let ch = c.test_channel.channel("test_channel", model.x_alphabet())?;
            c.model = model_rows(&model);
            c.test_channel = channel_rows(&ch);
            let params = SchemeParams::build(&model, &ch, c.scheme.clone())?;
            let report = exact_enumerate_guarded(&params, c.guard)?;
            match format {
                Format::Json => json_record(cmd, &c, &report).map(ok),
                Format::Csv => csv_rows(
                    &[CsvRow::from_report(&report, Some(params.i_uy()), c.scheme.codebook_seed)],
                    csv_header,
                )
                .map(ok),
            }
        }
        Command::ExponentFit => {
            reject_flag(cmd, "--trials", ov.trials.is_some())?;
            reject_flag(cmd, "--resolution", ov.resolution.is_some())?;
            let mut c: FitConfig = parse(config_text)?;
            if let Some(s) = ov.seed {
                c.seed = s;
            }
            let model = c.model.model("model")?;
            let ch = c.test_channel.channel("test_channel", model.x_alphabet())?;
            c.model = model_rows(&model);
            c.test_channel = channel_rows(&ch);
            let est = empirical_exponent(&model, &ch, c.epsilon, c.mu, &c.n_values, c.seed)?;
            match format {
                Format::Json => json_record(cmd, &c, &est).map(ok),
                Format::Csv => csv_rows(&CsvRow::from_estimate(&est, c.seed), csv_header).map(ok),
            }
        }
        Command::Validate => {
            reject_flag(cmd, "--resolution", ov.resolution.is_some())?;
            let mut c: ValidateConfig = parse(config_text)?;
            if let Some(s) = ov.seed {
                c.seed = s;
            }
            if ov.trials.is_some() {
                c.trials = ov.trials;
            }
            let model = c.model.model("model")?;
            let ch = c.test_channel.channel("test_channel", model.x_alphabet())?;
            c.model = model_rows(&model);
            c.test_channel = channel_rows(&ch);
            let params = SchemeParams::build(&model, &ch, c.scheme.clone())?;
            let rate = *c.rate.get_or_insert(params.design_rate());
            let measured = match c.trials {
                Some(0) => return Err(Error::config("trials", "must be at least 1")),
                Some(t) => simulate(&params, &TrialPlan::new(t, c.seed)),
                None => exact_enumerate_guarded(&params, crate::sim::EXACT_GUARD)?,
            };
            let query = ExponentQuery::new(c.scheme.epsilon, rate)?;
            let report = theory_report(&params, &measured, &query, &solver_options(c.seed, None), c.converse)?;
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|k| k.passed == Some(false))
                .map(|k| k.name.as_str())
                .collect();
            let failure = (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", ")));
            let body = match format {
                Format::Json => json_record(cmd, &c, &report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["check", "passed", "detail"])?;
                    for k in &report.checks {
                        let passed = match k.passed {
                            Some(true) => "pass",
                            Some(false) => "fail",
                            None => "inapplicable",
                        };
                        w.write_record([k.name.as_str(), passed, k.detail.as_str()])?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
                        .expect("csv output is utf-8")
                }
            };
            Ok(Outcome { body, failure })
        }
        Command::CodecCheck => {
            reject_flag(cmd, "--seed", ov.seed.is_some())?;
            reject_flag(cmd, "--trials", ov.trials.is_some())?;
            reject_flag(cmd, "--resolution", ov.resolution.is_some())?;
            let c: CodecCheckConfig = parse(config_text)?;
            let result = codec_check(c.max_index)?;
            let failure = result.first_failure.map(|m| format!("round trip fails at m = {m}"));
            let body = match format {
                Format::Json => json_record(cmd, &c, &result)?,
                Format::Csv => format!(
                    "max_index,checked,flag_reachable,first_failure\n{},{},{},{}\n",
                    c.max_index,
                    result.checked,
                    result.flag_reachable,
                    result.first_failure.map(|m| m.to_string()).unwrap_or_default()
                ),
            };
            Ok(Outcome { body, failure })
        }
    }
}

/// Guard on exhaustive codec checks.
pub const CODEC_CHECK_GUARD: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodecCheck {
    pub checked: u64,
    pub flag_reachable: bool,
    pub first_failure: Option<u64>,
}

/// Round-trips every index in `1..=max_index` and checks the length law.
pub fn codec_check(max_index: u64) -> Result<CodecCheck> {
    if max_index == 0 {
        return Err(Error::config("max_index", "must be at least 1"));
    }
    if max_index > CODEC_CHECK_GUARD {
        return Err(Error::GuardExceeded {
            what: "codec check",
            estimate: max_index as f64,
            limit: CODEC_CHECK_GUARD as f64,
        });
    }
    let mut flag_reachable = false;
    let mut first_failure = None;
    for m in 1..=max_index {
        let s = string_encode(m)?;
        flag_reachable |= s.is_flag();
        if s.len() != index_length(m) as usize || string_decode(&s).ok() != Some(m) {
            first_failure = Some(m);
            break;
        }
    }
    Ok(CodecCheck {
        checked: first_failure.map_or(max_index, |m| m - 1),
        flag_reachable,
        first_failure,
    })
}
