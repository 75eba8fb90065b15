//! One function per subcommand. Each returns a JSON report, optional text for
//! stdout, and whether the check it performs passed.

use std::path::Path;

use lyapcheck_core::consensus::{
    check_assumption1, check_assumption2, detect_consensus, simulate, span_norm, variance, AssumptionConfig,
    ConsensusOutcome, GraphSequence, Trajectory,
};
use lyapcheck_core::field::TOL_PSD;
use lyapcheck_core::interchange::{exact_mats, mat_to_json, vec_to_json, AnyMat, AnyVec};
use lyapcheck_core::lyapunov::counterexample::counterexample;
use lyapcheck_core::lyapunov::{
    check_class_q, check_class_q_approx, common_pi, enumerate_class_a, invariant_form_decompose,
    left_eigenvector, pi_weighted_lyapunov, symmetrize, symmetrize_closed_form, weighted_contraction_check,
    LyapunovCandidate, Provenance,
};
use lyapcheck_core::psd::psd_check_exact;
use lyapcheck_core::search::{
    find_common_lyapunov, rationalize_certificate, symmetry_reduced_verdict, verify_certificate_exact,
    FeasibilityProblem, Outcome, SearchConfig, Verdict,
};
use lyapcheck_core::{Field, Mat, Rat, Vector};
use serde_json::{json, Value};

use crate::io::{input, read_matrices, read_matrix, read_sequence, read_vector, write_text, CliError};

pub struct Report {
    pub json: Value,
    /// Printed instead of the JSON when present.
    pub text: Option<String>,
    pub passed: bool,
}

impl Report {
    fn json(json: Value, passed: bool) -> Self {
        Report { json, text: None, passed }
    }
}

fn trajectory_summary<T: Field + lyapcheck_core::interchange::JsonScalar>(
    traj: &Trajectory<T>,
    tol: &T,
) -> Value {
    let last = traj.states.last().expect("initial state");
    let consensus = match detect_consensus(traj, tol) {
        ConsensusOutcome::Converged { limit, t_hit } => json!({"status": "converged", "limit": limit.to_json(), "t_hit": t_hit}),
        ConsensusOutcome::NotConverged { final_span } => json!({"status": "not_converged", "final_span": final_span.to_json()}),
    };
    json!({
        "steps": traj.states.len() - 1,
        "final_state": vec_to_json(last),
        "final_span": span_norm(last).to_json(),
        "final_variance": variance(last).to_json(),
        "consensus": consensus,
    })
}

pub fn simulate_cmd(sequence: &Path, x0: &Path, steps: usize, csv: Option<&Path>, tol: f64) -> Result<Report, CliError> {
    let seq = read_sequence(sequence)?;
    let (summary, text) = match read_vector(x0)? {
        AnyVec::Exact(x) => {
            let traj = simulate(&seq, &x, steps)?;
            let tol = Rat::approximate(tol, u64::MAX).ok_or_else(|| CliError::Input(format!("bad tolerance {tol}")))?;
            (trajectory_summary(&traj, &tol), traj.to_csv())
        }
        AnyVec::Approx(x) => {
            let traj = simulate(&seq, &x, steps)?;
            (trajectory_summary(&traj, &tol), traj.to_csv())
        }
    };
    if let Some(path) = csv {
        write_text(path, &text)?;
    }
    Ok(Report::json(json!({"command": "simulate", "n": seq.n(), "trajectory": summary}), true))
}

/// Horizon long enough to see every window alignment of a non-finite
/// sequence at least once.
fn default_windows(seq: &GraphSequence, b: usize) -> usize {
    match (seq.horizon(), seq.distinct_windows()) {
        (Some(h), _) => h / b,
        (None, Some(p)) => p,
        (None, None) => 1,
    }
}

pub fn check_assumptions_cmd(
    sequence: &Path,
    alpha: &str,
    b: usize,
    windows: Option<usize>,
) -> Result<Report, CliError> {
    let seq = read_sequence(sequence)?;
    let alpha: Rat = alpha.parse().map_err(input("--alpha"))?;
    let cfg = AssumptionConfig::new(alpha, b)?;
    let windows = windows.unwrap_or_else(|| default_windows(&seq, b)).max(1);
    let horizon = windows * b + 1;
    let a1 = check_assumption1(&seq, &cfg, horizon);
    let a2 = check_assumption2(&seq, &cfg, windows - 1);
    let passed = a1.passed && a2.passed;
    Ok(Report::json(
        json!({
            "command": "check-assumptions",
            "alpha": cfg.alpha().to_string(),
            "B": b,
            "assumption1": a1,
            "assumption2": a2,
            "passed": passed,
        }),
        passed,
    ))
}

pub fn counterexample_cmd(n: usize, transcript: Option<&Path>) -> Result<Report, CliError> {
    if n < 8 {
        return Err(CliError::Input(format!("counterexample requires n >= 8 (got n = {n})")));
    }
    let ce = counterexample(n)?;
    let text = ce.transcript();
    if let Some(path) = transcript {
        write_text(path, &text)?;
    }
    let json = json!({
        "command": "counterexample",
        "n": n,
        "x": vec_to_json(&ce.x),
        "y": vec_to_json(&ce.y),
        "vx": ce.vx.to_string(),
        "vy": ce.vy.to_string(),
        "verified": ce.verified(),
    });
    Ok(Report { json, text: Some(text), passed: ce.verified() })
}

pub fn check_lyapunov_cmd(matrix: &Path, against: &Path) -> Result<Report, CliError> {
    let m = read_matrix(matrix)?;
    let list = read_matrices(against)?;
    match (&m, list.iter().all(|a| matches!(a, AnyMat::Exact(_)))) {
        (AnyMat::Exact(m), true) => {
            let candidate = LyapunovCandidate::new(m.clone(), Provenance::UserSupplied)?;
            let report = check_class_q(&candidate, &exact_mats(&list)?)?;
            let passed = report.member;
            Ok(Report::json(json!({"command": "check-lyapunov", "mode": "exact", "report": report}), passed))
        }
        _ => {
            let approx: Vec<Mat<f64>> = list.iter().map(AnyMat::to_f64).collect();
            let report = check_class_q_approx(&m.to_f64(), &approx, TOL_PSD)?;
            let passed = report.member;
            Ok(Report::json(
                json!({"command": "check-lyapunov", "mode": "approx", "tolerance": TOL_PSD, "report": report}),
                passed,
            ))
        }
    }
}

pub fn symmetrize_cmd(matrix: &Path, closed_form: bool) -> Result<Report, CliError> {
    let m = read_matrix(matrix)?;
    let m = m.exact().map_err(|_| CliError::Input("symmetrize needs an exact (rational string) matrix".into()))?;
    let z = if closed_form { symmetrize_closed_form(m)? } else { symmetrize(m)? };
    let decomposition = if m.is_symmetric() && m.rows() >= 2 {
        serde_json::to_value(invariant_form_decompose(&z)?).expect("serializable")
    } else {
        Value::Null
    };
    Ok(Report::json(
        json!({
            "command": "symmetrize",
            "method": if closed_form { "closed_form" } else { "explicit_sum" },
            "z": mat_to_json(&z),
            "decomposition": decomposition,
        }),
        true,
    ))
}

pub fn construct_pi_cmd(matrices: &Path) -> Result<Report, CliError> {
    let list = exact_mats(&read_matrices(matrices)?)
        .map_err(|_| CliError::Input("construct-pi needs exact (rational string) matrices".into()))?;
    let individual: Vec<Value> = list
        .iter()
        .map(|a| match left_eigenvector(a) {
            Ok(pi) => vec_to_json(&pi),
            Err(e) => json!({"error": e.to_string()}),
        })
        .collect();
    let Some(pi) = common_pi(&list)? else {
        return Ok(Report::json(
            json!({
                "command": "construct-pi",
                "common_pi": null,
                "individual_pi": individual,
                "message": "no positive vector is fixed by every matrix",
            }),
            false,
        ));
    };
    let w = pi_weighted_lyapunov(&pi)?;
    let checks = list
        .iter()
        .map(|a| {
            let weighted = weighted_contraction_check(a, &pi)?.is_psd();
            let decrease = psd_check_exact(&w.m.sub(&w.m.congruence(a)?)?)?.is_psd();
            Ok((weighted, decrease))
        })
        .collect::<lyapcheck_core::Result<Vec<_>>>()?;
    let m_e_zero = w.m.mul_vec(&Vector::ones(pi.len()))?.iter().all(Rat::is_zero);
    let m_psd = psd_check_exact(&w.m)?.is_psd();
    let passed = m_e_zero && m_psd && checks.iter().all(|&(a, b)| a && b);
    Ok(Report::json(
        json!({
            "command": "construct-pi",
            "common_pi": vec_to_json(&pi),
            "individual_pi": individual,
            "d": mat_to_json(&w.d),
            "h": mat_to_json(&w.h),
            "m": mat_to_json(&w.m),
            "verification": {
                "m_e_is_zero": m_e_zero,
                "m_is_psd": m_psd,
                "rank": w.m.rank(),
                "per_matrix": checks.iter().enumerate().map(|(k, &(a, b))| json!({
                    "index": k, "d_minus_atda_psd": a, "m_minus_atma_psd": b,
                })).collect::<Vec<_>>(),
            },
            "passed": passed,
        }),
        passed,
    ))
}

/// Writes one JSON object per line as graphs are produced.
pub fn enumerate_cmd(n: usize, cap: Option<usize>, seed: u64, out: &mut dyn std::io::Write) -> Result<usize, CliError> {
    let cap = match cap {
        Some(c) => c,
        None if n <= lyapcheck_core::lyapunov::class_a::EXHAUSTIVE_LIMIT => usize::MAX,
        None => return Err(CliError::Input(format!("n = {n} is sampled, not enumerated: pass --cap"))),
    };
    let mut count = 0;
    for (g, a) in enumerate_class_a(n, cap, seed)? {
        let line = json!({"edges": g.edges(), "matrix": mat_to_json(&a)});
        writeln!(out, "{line}").map_err(input("writing output"))?;
        count += 1;
    }
    Ok(count)
}

pub fn search_cmd(matrices: &Path, cfg: SearchConfig) -> Result<Report, CliError> {
    let list = read_matrices(matrices)?;
    let problem = FeasibilityProblem::new(list.iter().map(AnyMat::to_f64).collect())?;
    let report = find_common_lyapunov(&problem, &cfg)?;
    let mut json = json!({"command": "search", "n": problem.n(), "matrices": list.len(), "report": report});
    if let Outcome::Feasible { m, .. } = &report.outcome {
        let certificate = rationalize_certificate(m);
        let mut cert = json!({"m": mat_to_json(&certificate)});
        if let Ok(exact) = exact_mats(&list) {
            let ok = verify_certificate_exact(&certificate, &exact)?;
            cert["exact_checks_passed"] = json!(ok.iter().filter(|&&b| b).count());
            cert["exact_checks_total"] = json!(ok.len());
        }
        json["rational_certificate"] = cert;
    }
    Ok(Report::json(json, report.is_feasible()))
}

pub fn verdict_cmd(n: usize) -> Result<Report, CliError> {
    let verdict = symmetry_reduced_verdict(n)?;
    let text = match &verdict {
        Verdict::Empty { transcript, .. } => Some(transcript.clone()),
        Verdict::NoCounterexampleFound { .. } => None,
    };
    let mut json = json!({"command": "verdict", "n": n, "verdict": verdict});
    if let Some(obj) = json["verdict"].as_object_mut() {
        obj.remove("transcript");
    }
    Ok(Report { json, text, passed: true })
}
