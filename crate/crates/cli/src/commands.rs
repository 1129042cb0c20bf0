use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use dfsqft::circuit::print_circuit;
use dfsqft::dfs::{
    dfs_report, logical_capacity, max_dfs_dimension_closed_form, min_physical_qubits, Ratio,
    MAX_BRUTE_FORCE_QUBITS,
};
use dfsqft::encoding::{logical_basis, registry, synth_encoded_qft, Encoding};
use dfsqft::noise::{Distribution, Granularity, NoiseExperiment, NoisePolicy, RunReport};
use dfsqft::verify::verify as run_verify;
use dfsqft::CollectiveModel;

use crate::report::{emit, envelope, to_json, Config, Csv};
use crate::{CliError, DistributionArg, Format, Policy};

pub struct Common {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub config_path: Option<PathBuf>,
}

impl Common {
    fn base_config(&self, format: Format) -> Config {
        let mut c = Config::new();
        c.insert("format", json!(format_name(format)));
        c.insert(
            "out",
            json!(self.out.as_ref().map(|p| p.display().to_string())),
        );
        c.insert(
            "config_file",
            json!(self.config_path.as_ref().map(|p| p.display().to_string())),
        );
        c
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        emit(self.out.as_deref(), text)
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn granularity(p: Policy) -> Granularity {
    match p {
        Policy::Elementary => Granularity::PerElementaryGate,
        Policy::Block => Granularity::PerLogicalBlock,
        Policy::Endpoints => Granularity::EndpointsOnly,
    }
}

/// Circuit text by default; `--format json` wraps it in a report.
pub fn synth(common: &Common, encoding: &str, n: usize) -> Result<(), CliError> {
    let started = Instant::now();
    let enc = registry().get(encoding)?;
    let blocked = synth_encoded_qft(enc, n)?;
    let text = print_circuit(&blocked.circuit);
    match common.format {
        None => common.emit(&text),
        Some(Format::Csv) => Err(CliError::Usage("synth writes text or json, not csv".into())),
        Some(Format::Json) => {
            let mut config = common.base_config(Format::Json);
            config.insert("encoding", json!(encoding));
            config.insert("n", json!(n));
            let result = json!({
                "n_physical": blocked.circuit.n_qubits(),
                "gates": blocked.circuit.len(),
                "boundaries": blocked.boundaries,
                "circuit": text,
            });
            common.emit(&to_json(&envelope(
                "synth", &config, None, started, result,
            ))?)
        }
    }
}

pub fn verify(common: &Common, encoding: &str, n: usize) -> Result<(), CliError> {
    let started = Instant::now();
    let report = run_verify(encoding, n)?;
    let format = common.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Json => {
            let mut config = common.base_config(format);
            config.insert("encoding", json!(encoding));
            config.insert("n", json!(n));
            to_json(&envelope("verify", &config, None, started, &report))?
        }
        Format::Csv => {
            let mut csv = Csv::new(&["check", "tolerance", "deviation", "passed"]);
            for c in &report.checks {
                csv.row([
                    c.name.clone(),
                    c.tolerance.to_string(),
                    c.deviation.to_string(),
                    c.passed.to_string(),
                ]);
            }
            csv.finish()
        }
    };
    common.emit(&text)?;
    match report.first_failure {
        None => Ok(()),
        Some(name) => Err(CliError::Failure(format!("check failed: {name}"))),
    }
}

pub struct BenchArgs {
    pub encoding: String,
    pub n: usize,
    pub input: Option<String>,
    pub trials: usize,
    pub seed: u64,
    pub policy: Policy,
    pub distribution: DistributionArg,
    pub sigma: Option<f64>,
}

#[derive(Serialize)]
struct Arm {
    encoding: &'static str,
    n_physical: usize,
    gates: usize,
    report: RunReport,
}

fn run_arm(
    enc: &dyn Encoding,
    n: usize,
    bits: &str,
    model: CollectiveModel,
    policy: &NoisePolicy,
) -> Result<Arm, CliError> {
    let qft = synth_encoded_qft(enc, n)?;
    let basis = enc.model().map(|_| logical_basis(enc, n)).transpose()?;
    let input = enc.logical_state(bits)?;
    let ideal = input.apply_circuit(&qft.circuit)?;
    let report = NoiseExperiment {
        circuit: &qft.circuit,
        input: &input,
        ideal_output: &ideal,
        model,
        boundaries: &qft.boundaries,
        code_space: basis.as_ref(),
    }
    .run(policy)?;
    Ok(Arm {
        encoding: enc.name(),
        n_physical: qft.circuit.n_qubits(),
        gates: qft.circuit.len(),
        report,
    })
}

/// Runs the encoded arm and a plain-qubit arm under the same noise.
pub fn noise_bench(common: &Common, args: BenchArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let enc = registry().get(&args.encoding)?;
    let model = enc.model().ok_or_else(|| {
        CliError::Usage(format!(
            "noise-bench needs a protecting encoding (wcd or scd), got {}",
            args.encoding
        ))
    })?;
    let distribution = match (args.distribution, args.sigma) {
        (DistributionArg::Uniform, None) => Distribution::Uniform,
        (DistributionArg::Uniform, Some(_)) => {
            return Err(CliError::Usage(
                "--sigma applies only to gaussian noise".into(),
            ))
        }
        (DistributionArg::Gaussian, Some(sigma)) => Distribution::Gaussian { sigma },
        (DistributionArg::Gaussian, None) => {
            return Err(CliError::Usage("gaussian noise needs --sigma".into()))
        }
    };
    let bits = args.input.clone().unwrap_or_else(|| "0".repeat(args.n));
    if bits.len() != args.n {
        return Err(CliError::Usage(format!(
            "input {bits:?} has {} bits, expected {}",
            bits.len(),
            args.n
        )));
    }
    let policy = NoisePolicy::new(granularity(args.policy), args.trials, args.seed)
        .with_distribution(distribution);
    policy.validate()?;

    let encoded = run_arm(enc, args.n, &bits, model, &policy)?;
    let unencoded = run_arm(registry().get("plain")?, args.n, &bits, model, &policy)?;

    let format = common.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new(&["arm", "trial", "fidelity", "leakage"]);
            for (arm, a) in [("encoded", &encoded), ("unencoded", &unencoded)] {
                for s in &a.report.samples {
                    csv.row([
                        arm.to_string(),
                        s.trial.to_string(),
                        s.fidelity.to_string(),
                        s.leakage.to_string(),
                    ]);
                }
            }
            csv.finish()
        }
        Format::Json => {
            let mut config = common.base_config(format);
            config.insert("encoding", json!(args.encoding));
            config.insert("n", json!(args.n));
            config.insert("input", json!(bits));
            config.insert("model", json!(model.name()));
            config.insert("trials", json!(args.trials));
            config.insert("policy", json!(granularity(args.policy)));
            config.insert(
                "distribution",
                serde_json::to_value(distribution).unwrap_or(Value::Null),
            );
            let result = json!({ "encoded": encoded, "unencoded": unencoded });
            to_json(&envelope(
                "noise-bench",
                &config,
                Some(args.seed),
                started,
                result,
            ))?
        }
    };
    common.emit(&text)
}

#[derive(Serialize)]
struct TableRow {
    model: CollectiveModel,
    n: usize,
    max_dim_brute_force: usize,
    max_dim_closed_form: usize,
    logical_qubits: usize,
    eta_max: String,
    eta_max_decimal: f64,
}

/// Rows `n = 1..=n_max`; exits 1 if brute force and closed form disagree.
pub fn dfs_table(common: &Common, model: &str, n_max: usize) -> Result<(), CliError> {
    let started = Instant::now();
    let model: CollectiveModel = model.parse()?;
    if n_max == 0 || n_max > MAX_BRUTE_FORCE_QUBITS {
        return Err(dfsqft::Error::OutOfRange {
            what: "n_max",
            value: n_max,
            min: 1,
            max: MAX_BRUTE_FORCE_QUBITS,
        }
        .into());
    }
    let r: Vec<usize> = (1..=3)
        .map(|m| min_physical_qubits(m, model))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let brute = dfs_report(n, model)?.max_dim;
        let closed = max_dfs_dimension_closed_form(n, model);
        if brute != closed {
            return Err(CliError::Failure(format!(
                "{model} n={n}: brute-force dimension {brute} != closed form {closed}"
            )));
        }
        let cap = logical_capacity(brute);
        let eta = Ratio::new(cap as u64, n as u64);
        rows.push(TableRow {
            model,
            n,
            max_dim_brute_force: brute,
            max_dim_closed_form: closed,
            logical_qubits: cap,
            eta_max: eta.to_string(),
            eta_max_decimal: eta.to_f64(),
        });
    }
    let format = common.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "model",
                "n",
                "max_dim_brute_force",
                "max_dim_closed_form",
                "logical_qubits",
                "eta_max",
                "eta_max_decimal",
                "r_m1",
                "r_m2",
                "r_m3",
            ]);
            for row in &rows {
                csv.row(
                    [
                        row.model.to_string(),
                        row.n.to_string(),
                        row.max_dim_brute_force.to_string(),
                        row.max_dim_closed_form.to_string(),
                        row.logical_qubits.to_string(),
                        row.eta_max.clone(),
                        row.eta_max_decimal.to_string(),
                    ]
                    .into_iter()
                    .chain(r.iter().map(|v| v.to_string())),
                );
            }
            csv.finish()
        }
        Format::Json => {
            let mut config = common.base_config(format);
            config.insert("model", json!(model.name()));
            config.insert("n_max", json!(n_max));
            let result = json!({ "rows": rows, "min_physical_qubits": { "m1": r[0], "m2": r[1], "m3": r[2] } });
            to_json(&envelope("dfs-table", &config, None, started, result))?
        }
    };
    common.emit(&text)
}
