//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grprep_core::apps::{
    check_probabilities_log_concave, fourier_component_direct, grover_search,
    interference_distribution,
};
use grprep_core::dist::{check_log_concavity, Distribution, IntegrationBackend};
use grprep_core::prepare::{
    compute_angles, decompose_circuit, discretize, gate_count_report, prepare_direct, synthesize,
};
use grprep_core::quantum::{apply_circuit, fidelity, measure_histogram, qft, Statevector};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn target_state_correctness() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    let mut slowest = Duration::ZERO;
    for fam in common::standard_families() {
        let d = fam.build();
        for n in [4, 8, 10] {
            let exact = fam.cell_masses(n);
            for (tol, backend) in [
                (1e-9, IntegrationBackend::analytic()),
                (1e-6, IntegrationBackend::adaptive(1e-10)),
            ] {
                let start = Instant::now();
                let state = prepare_direct(&d, n, &backend).map_err(|e| e.to_string())?;
                let elapsed = start.elapsed();
                slowest = slowest.max(elapsed);
                let tv = common::tv(&state.probabilities(), &exact);
                ensure(tv <= tol, || {
                    format!(
                        "{} n={n} {:?}: TV {tv:e} > {tol:e}",
                        fam.name(),
                        backend.method
                    )
                })?;
                ensure(elapsed < Duration::from_secs(5), || {
                    format!(
                        "{} n={n} {:?}: took {elapsed:?}",
                        fam.name(),
                        backend.method
                    )
                })?;
                if tol == 1e-9 {
                    worst.0 = worst.0.max(tv);
                } else {
                    worst.1 = worst.1.max(tv);
                }
            }
        }
    }
    Ok(format!(
        "max TV analytic {:.2e}, adaptive {:.2e}, slowest case {:.2?}",
        worst.0, worst.1, slowest
    ))
}

fn coarse_graining() -> Outcome {
    let mut checked = 0;
    for (name, d) in common::all_distributions() {
        for backend in [
            IntegrationBackend::analytic(),
            IntegrationBackend::adaptive(1e-10),
            IntegrationBackend::monte_carlo(2000, 11),
        ] {
            let disc = discretize(&d, 10, &backend).map_err(|e| e.to_string())?;
            for (m, pair) in disc.levels.windows(2).enumerate() {
                let (coarse, fine) = (pair[0].masses(), pair[1].masses());
                for (i, p) in coarse.iter().enumerate() {
                    let sum = fine[2 * i] + fine[2 * i + 1];
                    ensure(sum.to_bits() == p.to_bits(), || {
                        format!("{name} level {m} region {i}: {sum:e} != {p:e}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} parent/child sums bitwise equal"))
}

fn path_equivalence() -> Outcome {
    let backend = IntegrationBackend::analytic();
    let mut worst = 1.0f64;
    let mut cases = 0;
    for (name, d) in common::all_distributions() {
        for n in 1..=12 {
            let direct = prepare_direct(&d, n, &backend).map_err(|e| e.to_string())?;
            let circuit = synthesize(&compute_angles(&d, n, &backend).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let lowered = decompose_circuit(&circuit).map_err(|e| e.to_string())?;
            let zero = Statevector::zero(n).map_err(|e| e.to_string())?;
            for (label, c) in [("intact", &circuit), ("decomposed", &lowered)] {
                let built = apply_circuit(&zero, c).map_err(|e| e.to_string())?;
                let f = fidelity(&direct, &built).map_err(|e| e.to_string())?;
                worst = worst.min(f);
                ensure(f >= 1.0 - 1e-9, || {
                    format!("{name} n={n} {label}: fidelity {f}")
                })?;
            }
            let counts = gate_count_report(&circuit, true).map_err(|e| e.to_string())?;
            let expected = ((1 << n) - 1, (1usize << n).saturating_sub(2));
            ensure((counts.ry, counts.cnot) == expected, || {
                format!(
                    "{name} n={n}: counts {:?} expected {expected:?}",
                    (counts.ry, counts.cnot)
                )
            })?;
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} cases, min fidelity 1 - {:.1e}",
        1.0 - worst
    ))
}

fn interference() -> Outcome {
    let backend = IntegrationBackend::analytic();
    let mut worst = 0.0f64;
    for (name, d) in common::all_distributions() {
        for n in 1..=10 {
            let r = interference_distribution(&d, n, &backend).map_err(|e| e.to_string())?;
            let oracle = common::walsh_probabilities(&r.input);
            let gap = r
                .output
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(gap);
            ensure(gap <= 1e-12, || format!("{name} n={n}: deviation {gap:e}"))?;
        }
    }
    let normal = Distribution::gaussian(0.0, 1.0).map_err(|e| e.to_string())?;
    let r = interference_distribution(&normal, 6, &backend).map_err(|e| e.to_string())?;
    let input = check_log_concavity(&normal, 64).map_err(|e| e.to_string())?;
    let output = check_probabilities_log_concave(&r.output).map_err(|e| e.to_string())?;
    ensure(input.passes, || {
        format!("input density fails: worst {:e}", input.worst_value)
    })?;
    ensure(!output.passes, || {
        "interference output passes the check".into()
    })?;
    Ok(format!(
        "max deviation {worst:.1e}; n=6 normal input passes, output fails (worst second difference {:.3e})",
        output.worst_value
    ))
}

fn log_concavity() -> Outcome {
    let normal = Distribution::gaussian(0.0, 1.0).map_err(|e| e.to_string())?;
    let expo = Distribution::exponential_on(1.0, 0.0, 10.0).map_err(|e| e.to_string())?;
    let mixture = Distribution::mixture(&[(0.5, -3.0, 1.0), (0.5, 3.0, 1.0)], -8.0, 8.0)
        .map_err(|e| e.to_string())?;
    let grid = 512;
    let mut summary = Vec::new();
    for (name, d, want) in [
        ("normal", &normal, true),
        ("exponential", &expo, true),
        ("mixture", &mixture, false),
    ] {
        let a = check_log_concavity(d, grid).map_err(|e| e.to_string())?;
        let b = check_log_concavity(d, grid).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name}: repeated runs differ"))?;
        ensure(a.passes == want, || {
            format!(
                "{name}: passes={} worst {:e} at {}",
                a.passes, a.worst_value, a.worst_point
            )
        })?;
        summary.push(format!(
            "{name} {}",
            if a.passes { "passes" } else { "fails" }
        ));
    }
    Ok(summary.join(", "))
}

fn grover() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let dim = 1usize << n;
        let uniform = Statevector::uniform(n).map_err(|e| e.to_string())?;
        for size in [1usize, 2, 3, dim / 4, dim - 1] {
            if size == 0 || size > dim {
                continue;
            }
            let marked: BTreeSet<usize> = (0..size).map(|k| (k * 7919 + 3) % dim).collect();
            if marked.len() != size {
                continue;
            }
            let half = ((size as f64) / dim as f64).sqrt().asin();
            let iterations = (std::f64::consts::FRAC_PI_4 / half).ceil() as usize + 3;
            let run = grover_search(&uniform, &marked, iterations).map_err(|e| e.to_string())?;
            for (t, p) in run.success_trace.iter().enumerate() {
                let closed = ((2 * t + 1) as f64 * half).sin().powi(2);
                let gap = (p - closed).abs();
                worst = worst.max(gap);
                ensure(gap <= 1e-9, || {
                    format!("N={dim} |M|={size} t={t}: {p} vs {closed}")
                })?;
            }
        }
    }

    let n = 6;
    let target = 32usize;
    let mean = -5.0 + 10.0 * (target as f64 + 0.5) / 64.0;
    let prior_dist = Distribution::gaussian_on(mean, 0.25, -5.0, 5.0).map_err(|e| e.to_string())?;
    let prior = prepare_direct(&prior_dist, n, &IntegrationBackend::analytic())
        .map_err(|e| e.to_string())?;
    let marked = BTreeSet::from([target]);
    let uniform = Statevector::uniform(n).map_err(|e| e.to_string())?;
    let with_prior = grover_search(&prior, &marked, 12).map_err(|e| e.to_string())?;
    let flat = grover_search(&uniform, &marked, 12).map_err(|e| e.to_string())?;
    let (a, b) = (
        with_prior.iterations_to_reach(0.99),
        flat.iterations_to_reach(0.99),
    );
    ensure(with_prior.success_trace[0] > flat.success_trace[0], || {
        "prior overlap not larger than uniform".into()
    })?;
    match (a, b) {
        (Some(a), Some(b)) if a < b => Ok(format!(
            "closed form max gap {worst:.1e}; Gaussian prior reaches 0.99 in {a} iterations vs {b} uniform"
        )),
        _ => Err(format!("iterations to 0.99: prior {a:?}, uniform {b:?}")),
    }
}

fn fourier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let backend = IntegrationBackend::analytic();
    for n in 1..=10 {
        let dim = 1usize << n;
        let raw: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let random = Statevector::from_amplitudes(raw.iter().map(|a| a / norm).collect())
            .map_err(|e| e.to_string())?;
        let mut states = vec![random];
        for (_, d) in common::all_distributions() {
            states.push(prepare_direct(&d, n, &backend).map_err(|e| e.to_string())?);
        }
        for s in &states {
            let simulated = qft(s);
            let oracle = common::dft(s.amplitudes());
            for (k, (sim, reference)) in simulated.amplitudes().iter().zip(&oracle).enumerate() {
                let gap = (sim.norm() - reference.norm()).abs();
                let direct = (fourier_component_direct(s, k) - reference.norm()).abs();
                worst = worst.max(gap).max(direct);
                ensure(gap <= 1e-9 && direct <= 1e-9, || {
                    format!("n={n} k={k}: gap {gap:e}, direct {direct:e}")
                })?;
            }
        }
    }
    Ok(format!("max magnitude gap {worst:.1e}"))
}

fn sampling() -> Outcome {
    let shots = 1_000_000u64;
    let backend = IntegrationBackend::analytic();
    let mut report = Vec::new();
    for (name, d, n) in [
        ("normal", Distribution::gaussian(0.0, 1.0), 8),
        (
            "exponential",
            Distribution::exponential_on(1.0, 0.0, 10.0),
            6,
        ),
    ] {
        let d = d.map_err(|e| e.to_string())?;
        let state = prepare_direct(&d, n, &backend).map_err(|e| e.to_string())?;
        let a = measure_histogram(&state, shots, 42).map_err(|e| e.to_string())?;
        let b = measure_histogram(&state, shots, 42).map_err(|e| e.to_string())?;
        ensure(a == b, || {
            format!("{name}: histograms differ under the same seed")
        })?;
        ensure(a.iter().sum::<u64>() == shots, || {
            format!("{name}: counts do not sum to shots")
        })?;
        let mut worst = 0.0f64;
        for (i, (&c, p)) in a.iter().zip(state.probabilities()).enumerate() {
            let expected = shots as f64 * p;
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            let dev = (c as f64 - expected).abs();
            ensure(dev <= 5.0 * sigma, || {
                format!("{name} bin {i}: count {c}, expected {expected:.3}, sigma {sigma:.3}")
            })?;
            if sigma > 0.0 {
                worst = worst.max(dev / sigma);
            }
        }
        report.push(format!("{name} max {worst:.2} sigma"));
    }
    Ok(report.join(", "))
}

fn monte_carlo() -> Outcome {
    let n = 6;
    let mut report = Vec::new();
    for fam in common::standard_families() {
        let d = fam.build();
        let exact = prepare_direct(&d, n, &IntegrationBackend::analytic())
            .map_err(|e| e.to_string())?
            .probabilities();
        let backend = IntegrationBackend::monte_carlo(10_000, 5);
        let disc = discretize(&d, n, &backend).map_err(|e| e.to_string())?;
        let tv = common::tv(disc.finest().masses(), &exact);
        let budget = disc.error_budget;
        ensure(tv <= 5.0 * budget, || {
            format!("{}: TV {tv:e} > 5 x budget {budget:e}", fam.name())
        })?;
        let again = prepare_direct(&d, n, &backend).map_err(|e| e.to_string())?;
        let first = disc.finest().to_state().map_err(|e| e.to_string())?;
        ensure(first == again, || {
            format!("{}: same seed, different state", fam.name())
        })?;
        report.push(format!(
            "{} TV/budget {:.2}",
            fam.name(),
            tv / budget.max(f64::MIN_POSITIVE)
        ));
    }
    Ok(report.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("target-state correctness", target_state_correctness),
        ("coarse-graining exactness", coarse_graining),
        ("path equivalence and gate counts", path_equivalence),
        ("interference distribution", interference),
        ("log-concavity checker", log_concavity),
        ("Grover with a prior", grover),
        ("Fourier magnitudes", fourier),
        ("statistical sampling", sampling),
        ("Monte Carlo backend", monte_carlo),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
