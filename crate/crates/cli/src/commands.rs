use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use grprep_core::apps::{
    check_probabilities_log_concave, fourier_component_demo, fourier_component_direct,
    grover_search, interference_direct, interference_distribution, FourierComponent,
};
use grprep_core::dist::{check_log_concavity, Distribution, LogConcavityReport};
use grprep_core::fmt_f64;
use grprep_core::prepare::{
    compute_angles, decompose_circuit, discretize, gate_count_report, prepare_direct, synthesize,
    GateCounts,
};
use grprep_core::quantum::{
    apply_circuit, bit_string, fidelity, measure_histogram, qft, AmplitudeRow, Circuit, Statevector,
};
use serde_json::{json, Value};

use crate::config::{CommandName, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{artifact_path, comment_header, json_document, write_atomic, Csv};

/// Minimum fidelity between the circuit and the direct construction.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-9;
/// Tolerance for simulated against directly summed interference output.
pub const INTERFERENCE_TOLERANCE: f64 = 1e-12;
/// Tolerance for the uniform-prior Grover trace against its closed form.
pub const GROVER_TOLERANCE: f64 = 1e-9;
/// All-components Fourier output is quadratic in `2^n`.
const MAX_FOURIER_ALL_QUBITS: usize = 12;

#[derive(Default)]
struct Report {
    lines: Vec<String>,
    files: Vec<PathBuf>,
    failures: Vec<String>,
}

impl Report {
    fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(failure());
        }
    }

    fn write(&mut self, path: PathBuf, contents: &str) -> CliResult<()> {
        write_atomic(&path, contents)?;
        self.files.push(path);
        Ok(())
    }

    /// Writes `<prefix>[.<tag>].<json|csv>` in the configured format.
    fn emit(
        &mut self,
        config: &RunConfig,
        tag: Option<&str>,
        json: impl FnOnce() -> Value,
        csv: impl FnOnce() -> Csv,
    ) -> CliResult<()> {
        let ext = match config.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        let suffix = match tag {
            Some(t) => format!("{t}.{ext}"),
            None => ext.to_string(),
        };
        let text = match config.format {
            Format::Json => json_document(config, json()),
            Format::Csv => csv().finish(),
        };
        self.write(artifact_path(&config.output, &suffix), &text)
    }
}

pub fn run(config: &RunConfig) -> CliResult<()> {
    let dist = config.dist.build()?;
    let mut report = Report::default();
    match config.command {
        CommandName::Prepare => prepare(config, &dist, &mut report)?,
        CommandName::Synthesize => synthesize_cmd(config, &dist, &mut report)?,
        CommandName::Simulate => simulate(config, &dist, &mut report)?,
        CommandName::DemoGrover => demo_grover(config, &dist, &mut report)?,
        CommandName::DemoInterference => demo_interference(config, &dist, &mut report)?,
        CommandName::DemoFourier => demo_fourier(config, &dist, &mut report)?,
        CommandName::CheckLogconcave => check_logconcave(config, &dist, &mut report)?,
    }
    for line in &report.lines {
        println!("{line}");
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(report.failures.join("; ")))
    }
}

fn qubits(config: &RunConfig) -> usize {
    config.n.expect("resolved configs carry n for this command")
}

/// Amplitude rows; `probs` replaces `|a|²` when the exact masses are known.
fn amplitude_rows(state: &Statevector, probs: Option<&[f64]>) -> Vec<AmplitudeRow> {
    let mut rows = state.rows();
    if let Some(p) = probs {
        for (r, p) in rows.iter_mut().zip(p) {
            r.probability = *p;
        }
    }
    rows
}

fn state_csv(config: &RunConfig, notes: &[(&str, String)], rows: &[AmplitudeRow]) -> Csv {
    let mut csv = Csv::with_notes(
        config,
        notes,
        &["index", "bits", "real", "imag", "probability"],
    );
    for r in rows {
        csv.row([
            r.index.to_string(),
            r.bits.clone(),
            fmt_f64(r.real),
            fmt_f64(r.imag),
            fmt_f64(r.probability),
        ]);
    }
    csv
}

fn emit_counts(config: &RunConfig, state: &Statevector, report: &mut Report) -> CliResult<()> {
    let Some(shots) = config.shots else {
        return Ok(());
    };
    let counts = measure_histogram(state, shots, config.seed)?;
    let probs = state.probabilities();
    report.note(format!("sampled {shots} shots with seed {}", config.seed));
    report.emit(
        config,
        Some("counts"),
        || {
            let rows: Vec<Value> = counts
                .iter()
                .zip(&probs)
                .enumerate()
                .map(|(i, (c, p))| {
                    json!({"index": i, "bits": state.bit_string(i), "count": c, "probability": p})
                })
                .collect();
            json!({"shots": shots, "seed": config.seed, "counts": rows})
        },
        || {
            let mut csv = Csv::new(config, &["index", "bits", "count", "probability"]);
            for (i, (c, p)) in counts.iter().zip(&probs).enumerate() {
                csv.row([
                    i.to_string(),
                    state.bit_string(i),
                    c.to_string(),
                    fmt_f64(*p),
                ]);
            }
            csv
        },
    )
}

fn prepare(config: &RunConfig, dist: &Distribution, report: &mut Report) -> CliResult<()> {
    let n = qubits(config);
    let disc = discretize(dist, n, &config.backend)?;
    let state = disc.finest().to_state()?;
    let rows = amplitude_rows(&state, Some(disc.finest().masses()));
    report.note(format!(
        "prepared {n} qubits ({} amplitudes), integration error budget {:e}",
        state.dim(),
        disc.error_budget
    ));
    report.emit(
        config,
        None,
        || {
            json!({
                "num_qubits": n,
                "qubit_order": "msb-first",
                "error_budget": disc.error_budget,
                "amplitudes": rows,
            })
        },
        || {
            state_csv(
                config,
                &[("error_budget", fmt_f64(disc.error_budget))],
                &rows,
            )
        },
    )?;
    emit_counts(config, &state, report)
}

fn build_circuit(config: &RunConfig, dist: &Distribution) -> CliResult<(String, Circuit)> {
    let angles = compute_angles(dist, qubits(config), &config.backend)?;
    let mut circuit = synthesize(&angles)?;
    if config.decompose {
        circuit = decompose_circuit(&circuit)?;
    }
    Ok((angles.to_json(), circuit))
}

fn counts_json(c: &GateCounts) -> Value {
    serde_json::to_value(c).expect("gate counts serialize")
}

fn check_counts(config: &RunConfig, counts: &GateCounts, report: &mut Report) {
    if !config.decompose {
        return;
    }
    let n = qubits(config);
    let expected = ((1usize << n) - 1, (1usize << n) - 2);
    report.check((counts.ry, counts.cnot) == expected, || {
        format!(
            "decomposed gate counts ry={} cnot={}, expected {} and {}",
            counts.ry, counts.cnot, expected.0, expected.1
        )
    });
}

fn synthesize_cmd(config: &RunConfig, dist: &Distribution, report: &mut Report) -> CliResult<()> {
    let (angles, circuit) = build_circuit(config, dist)?;
    let counts = gate_count_report(&circuit, false)?;
    check_counts(config, &counts, report);
    report.note(format!(
        "circuit: {} gates (ry {}, cnot {}, multiplexed ry {}), depth {}",
        circuit.len(),
        counts.ry,
        counts.cnot,
        counts.multiplexed_ry,
        counts.depth
    ));
    let angle_doc: Value = serde_json::from_str(&angles).expect("angle table is valid json");
    report.write(
        artifact_path(&config.output, "angles.json"),
        &json_document(config, angle_doc),
    )?;
    report.write(
        artifact_path(&config.output, "circuit.txt"),
        &format!("{}{}", comment_header(config), circuit.to_text()),
    )?;
    report.emit(
        config,
        None,
        || json!({"gate_counts": counts_json(&counts)}),
        || {
            let mut csv = Csv::new(config, &["ry", "cnot", "multiplexed_ry", "other", "depth"]);
            csv.row(
                [
                    counts.ry,
                    counts.cnot,
                    counts.multiplexed_ry,
                    counts.other,
                    counts.depth,
                ]
                .map(|c| c.to_string()),
            );
            csv
        },
    )
}

fn simulate(config: &RunConfig, dist: &Distribution, report: &mut Report) -> CliResult<()> {
    let n = qubits(config);
    let (_, circuit) = build_circuit(config, dist)?;
    let counts = gate_count_report(&circuit, false)?;
    check_counts(config, &counts, report);
    let built = apply_circuit(&Statevector::zero(n)?, &circuit)?;
    let direct = prepare_direct(dist, n, &config.backend)?;
    let fid = fidelity(&built, &direct)?;
    report.note(format!("fidelity(circuit, direct) = {}", fmt_f64(fid)));
    report.check(fid >= FIDELITY_THRESHOLD, || {
        format!(
            "fidelity {} below {}",
            fmt_f64(fid),
            fmt_f64(FIDELITY_THRESHOLD)
        )
    });
    report.emit(
        config,
        None,
        || {
            json!({
                "num_qubits": n,
                "qubit_order": "msb-first",
                "fidelity": fid,
                "gate_counts": counts_json(&counts),
                "amplitudes": built.rows(),
            })
        },
        || state_csv(config, &[("fidelity", fmt_f64(fid))], &built.rows()),
    )?;
    emit_counts(config, &built, report)
}

fn demo_grover(config: &RunConfig, dist: &Distribution, report: &mut Report) -> CliResult<()> {
    let n = qubits(config);
    let prior = prepare_direct(dist, n, &config.backend)?;
    let marked: BTreeSet<usize> = config
        .marked
        .as_ref()
        .expect("resolved demo-grover configs carry marked")
        .iter()
        .copied()
        .collect();
    let p0: f64 = marked
        .iter()
        .map(|&m| prior.amplitudes()[m].norm_sqr())
        .sum();
    let half = (marked.len() as f64 / prior.dim() as f64).sqrt().asin();
    // enough rounds for both starting states to reach their first peak
    let optimal = |angle: f64| (FRAC_PI_4 / angle - 0.5).round().max(1.0) as usize;
    let iterations = match config.iterations {
        Some(t) => t,
        None if p0 > 0.0 => optimal(p0.sqrt().asin()).max(optimal(half)),
        None => {
            return Err(CliError::Usage(
                "--marked: marked states carry no prior mass; set --iterations".into(),
            ))
        }
    };
    let with_prior = grover_search(&prior, &marked, iterations)?;
    let uniform = grover_search(&Statevector::uniform(n)?, &marked, iterations)?;
    let closed: Vec<f64> = (0..=iterations)
        .map(|t| ((2 * t + 1) as f64 * half).sin().powi(2))
        .collect();
    let deviation = uniform
        .success_trace
        .iter()
        .zip(&closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.check(deviation <= GROVER_TOLERANCE, || {
        format!("uniform trace deviates from closed form by {deviation:e}")
    });
    let reach = |t: Option<usize>| t.map_or("not reached".to_string(), |t| t.to_string());
    report.note(format!(
        "initial success: prior {}, uniform {}",
        fmt_f64(p0),
        fmt_f64(uniform.success_trace[0])
    ));
    report.note(format!(
        "iterations to 0.99: prior {}, uniform {}",
        reach(with_prior.iterations_to_reach(0.99)),
        reach(uniform.iterations_to_reach(0.99))
    ));
    report.emit(
        config,
        None,
        || {
            json!({
                "prior": with_prior.summary(),
                "uniform": uniform.summary(),
                "closed_form": closed,
                "closed_form_max_deviation": deviation,
                "iterations_to_0_99": {
                    "prior": with_prior.iterations_to_reach(0.99),
                    "uniform": uniform.iterations_to_reach(0.99),
                },
            })
        },
        || {
            let mut csv = Csv::new(
                config,
                &[
                    "iteration",
                    "prior_success",
                    "uniform_success",
                    "closed_form",
                ],
            );
            let traces = with_prior.success_trace.iter().zip(&uniform.success_trace);
            for (t, ((p, u), c)) in traces.zip(&closed).enumerate() {
                csv.row([t.to_string(), fmt_f64(*p), fmt_f64(*u), fmt_f64(*c)]);
            }
            csv
        },
    )
}

fn verdict(r: &LogConcavityReport) -> String {
    format!(
        "{} (worst second difference {:e} at {})",
        if r.passes {
            "log-concave"
        } else {
            "not log-concave"
        },
        r.worst_value,
        r.worst_point
    )
}

/// A check that may be undecidable because too few grid points carry
/// positive density. Returns the JSON value and a one-line verdict.
fn optional_verdict(result: grprep_core::Result<LogConcavityReport>) -> CliResult<(Value, String)> {
    match result {
        Ok(r) => Ok((json!(r), verdict(&r))),
        Err(grprep_core::Error::Degenerate(why)) => Ok((
            json!({"evaluable": false, "reason": why}),
            format!("not evaluable ({why})"),
        )),
        Err(e) => Err(e.into()),
    }
}

fn demo_interference(
    config: &RunConfig,
    dist: &Distribution,
    report: &mut Report,
) -> CliResult<()> {
    let n = qubits(config);
    let r = interference_distribution(dist, n, &config.backend)?;
    let direct = interference_direct(&r.input);
    let (input_json, input_verdict) =
        optional_verdict(check_log_concavity(dist, config.grid_points))?;
    let (output_json, output_verdict) =
        optional_verdict(check_probabilities_log_concave(&r.output))?;
    report.check(r.max_deviation <= INTERFERENCE_TOLERANCE, || {
        format!(
            "interference output deviates from direct sum by {:e}",
            r.max_deviation
        )
    });
    report.note(format!("q_0 = {}", fmt_f64(r.output[0])));
    report.note(format!(
        "max deviation from direct sum {:e}",
        r.max_deviation
    ));
    report.note(format!("input density: {input_verdict}"));
    report.note(format!("output distribution: {output_verdict}"));
    report.emit(
        config,
        None,
        || {
            json!({
                "num_qubits": n,
                "input": r.input,
                "output": r.output,
                "direct": direct,
                "max_deviation": r.max_deviation,
                "input_log_concavity": input_json,
                "output_log_concavity": output_json,
            })
        },
        || {
            let mut csv = Csv::with_notes(
                config,
                &[("max_deviation", fmt_f64(r.max_deviation))],
                &["j", "bits", "input", "output", "direct"],
            );
            let columns = r.input.iter().zip(&r.output).zip(&direct);
            for (j, ((p, q), d)) in columns.enumerate() {
                csv.row([
                    j.to_string(),
                    bit_string(j, n),
                    fmt_f64(*p),
                    fmt_f64(*q),
                    fmt_f64(*d),
                ]);
            }
            csv
        },
    )
}

fn demo_fourier(config: &RunConfig, dist: &Distribution, report: &mut Report) -> CliResult<()> {
    let n = qubits(config);
    let components: Vec<FourierComponent> = match config.k {
        Some(k) => vec![fourier_component_demo(dist, n, k, &config.backend)?],
        None => {
            if n > MAX_FOURIER_ALL_QUBITS {
                return Err(CliError::Usage(format!(
                    "--k is required above {MAX_FOURIER_ALL_QUBITS} qubits"
                )));
            }
            let state = prepare_direct(dist, n, &config.backend)?;
            let transformed = qft(&state);
            transformed
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(k, a)| FourierComponent {
                    k,
                    magnitude: a.norm(),
                    reference: fourier_component_direct(&state, k),
                })
                .collect()
        }
    };
    let worst = components
        .iter()
        .map(|c| (c.magnitude - c.reference).abs())
        .fold(0.0, f64::max);
    for c in &components {
        report.check(c.agrees(), || {
            format!(
                "component {}: simulated {} vs direct {}",
                c.k, c.magnitude, c.reference
            )
        });
    }
    if let [c] = components.as_slice() {
        report.note(format!("|F_{}| = {}", c.k, fmt_f64(c.magnitude)));
    }
    report.note(format!("max deviation from direct sum {worst:e}"));
    report.emit(
        config,
        None,
        || json!({"num_qubits": n, "max_deviation": worst, "components": components}),
        || {
            let mut csv = Csv::new(config, &["k", "magnitude", "reference"]);
            for c in &components {
                csv.row([c.k.to_string(), fmt_f64(c.magnitude), fmt_f64(c.reference)]);
            }
            csv
        },
    )
}

fn check_logconcave(config: &RunConfig, dist: &Distribution, report: &mut Report) -> CliResult<()> {
    let r = check_log_concavity(dist, config.grid_points)?;
    report.note(verdict(&r));
    report.emit(
        config,
        None,
        || json!({"log_concavity": r}),
        || {
            let mut csv = Csv::new(
                config,
                &[
                    "passes",
                    "worst_point",
                    "worst_value",
                    "evaluated",
                    "skipped",
                ],
            );
            csv.row([
                r.passes.to_string(),
                fmt_f64(r.worst_point),
                fmt_f64(r.worst_value),
                r.evaluated.to_string(),
                r.skipped.to_string(),
            ]);
            csv
        },
    )
}
