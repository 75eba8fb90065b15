//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the budget. Exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lyapcheck_core::consensus::{
    check_assumption1, check_assumption2, detect_consensus, equal_neighbor_matrix, random_sequence, simulate,
    variance, AssumptionConfig, ConsensusOutcome,
};
use lyapcheck_core::lyapunov::counterexample::{counterexample, expected_y, HUB};
use lyapcheck_core::lyapunov::{
    check_class_q, common_pi, enumerate_class_a, invariant_form_decompose, is_class_a_member, left_eigenvector,
    pi_weighted_lyapunov, symmetrize, symmetrize_closed_form, variance_matrix, LyapunovCandidate, Proportionality,
};
use lyapcheck_core::psd::psd_check_exact;
use lyapcheck_core::random::{birkhoff_mixture, random_centered_symmetric, random_irreducible_stochastic};
use lyapcheck_core::search::{
    exact_excess, find_common_lyapunov, rationalize_certificate, verify_certificate_exact, FeasibilityProblem,
    Outcome, SearchConfig,
};
use lyapcheck_core::{Graph, Mat, Permutation, Rat, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

fn ints(v: &[i64]) -> Vector<Rat> {
    Vector::new(v.iter().map(|&x| Rat::from_int(x)).collect())
}

fn doubly_stochastic_set() -> Vec<Mat<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2005);
    (0..100).map(|_| birkhoff_mixture(8, 5, &mut rng)).collect()
}

fn counterexample_reproduction() -> Check {
    let ce = counterexample(8).map_err(|e| e.to_string())?;
    ensure(ce.x == ints(&[5, 2, 2, 2, 0, -3, -3, -5]), format!("x = {}", ce.x))?;
    let y = Vector::new(vec![r(11, 5), r(7, 2), r(7, 2), r(7, 2), r(0, 1), r(-4, 1), r(-4, 1), r(-11, 4)]);
    ensure(ce.a.mul_vec(&ce.x).map_err(|e| e.to_string())? == y, format!("Ax = {}", ce.y))?;
    ensure(variance(&ce.x) == Rat::from_int(80), format!("V(x) = {}", ce.vx))?;
    ensure(variance(&y) == r(258167, 3200), format!("V(y) = {}", ce.vy))?;
    ensure(variance(&y) > variance(&ce.x), "V(y) <= V(x)")?;
    // two printed decimals of the quoted 80.68
    ensure((ce.vy.to_f64() * 100.0).round() == 8068.0, "V(y) does not round to 80.68")?;
    let out = Command::new(env!("CARGO_BIN_EXE_lyapcheck"))
        .args(["counterexample", "--n", "8"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
    ensure(text.contains("V(x) = 80") && text.contains("V(y) = 258167/3200"), "transcript values missing")?;
    Ok(format!("V(x) = {}, V(y) = {} ≈ {:.4}", ce.vx, ce.vy, ce.vy.to_f64()))
}

fn counterexample_scaling() -> Check {
    for n in 8..=16 {
        let ce = counterexample(n).map_err(|e| e.to_string())?;
        ensure(ce.graph.strongly_connected(), format!("n = {n}: disconnected"))?;
        ensure(ce.y.entries()[8..].iter().all(Rat::is_zero), format!("n = {n}: tail of y nonzero"))?;
        ensure(ce.y == expected_y(n), format!("n = {n}: y = {}", ce.y))?;
        ensure(ce.graph.in_degree(HUB) == 3 + (n - 8), format!("n = {n}: hub degree"))?;
        ensure(ce.vy > ce.vx, format!("n = {n}: V(y) = {} <= V(x) = {}", ce.vy, ce.vx))?;
    }
    Ok("n = 8..16 all increase".into())
}

fn symmetrization_structure() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2003);
    for k in 0..50 {
        let n = if k % 2 == 0 { 3 } else { 5 };
        let psd = k % 4 < 2;
        let m = random_centered_symmetric(n, psd, &mut rng);
        let z = symmetrize(&m).map_err(|e| e.to_string())?;
        ensure(z == symmetrize_closed_form(&m).map_err(|e| e.to_string())?, format!("sample {k}: closed form differs"))?;
        for _ in 0..20 {
            let p: Mat<Rat> = Permutation::random(n, &mut rng).matrix();
            ensure(z.congruence(&p).map_err(|e| e.to_string())? == z, format!("sample {k}: not invariant"))?;
        }
        let Proportionality::Proportional { alpha } = invariant_form_decompose(&z).map_err(|e| e.to_string())? else {
            return Err(format!("sample {k}: not proportional to C"));
        };
        if psd && !m.is_zero() {
            ensure(alpha.is_positive(), format!("sample {k}: alpha = {alpha}"))?;
        }
    }
    Ok("50 samples, 20 relabelings each".into())
}

fn single_matrix_construction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2004);
    for k in 0..100 {
        let n = 2 + k % 7;
        let a = random_irreducible_stochastic(n, &mut rng);
        let pi = left_eigenvector(&a).map_err(|e| format!("sample {k}: {e}"))?;
        let w = pi_weighted_lyapunov(&pi).map_err(|e| e.to_string())?;
        ensure(w.m.mul_vec(&Vector::ones(n)).map_err(|e| e.to_string())?.iter().all(Rat::is_zero), format!("sample {k}: Me != 0"))?;
        ensure(w.m.rank() == n - 1, format!("sample {k}: rank {}", w.m.rank()))?;
        ensure(w.h.mul(&a).map_err(|e| e.to_string())? == a.mul(&w.h).map_err(|e| e.to_string())?, format!("sample {k}: HA != AH"))?;
        let gap = w.m.sub(&w.m.congruence(&a).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(psd_check_exact(&gap).map_err(|e| e.to_string())?.is_psd(), format!("sample {k}: M - AᵀMA not PSD"))?;
    }
    Ok("100 matrices, n = 2..8".into())
}

fn doubly_stochastic_class() -> Check {
    let set = doubly_stochastic_set();
    ensure(set.iter().all(|a| a.is_doubly_stochastic().unwrap_or(false)), "sample not doubly stochastic")?;
    let report = check_class_q(&LyapunovCandidate::variance(8), &set).map_err(|e| e.to_string())?;
    ensure(report.member, format!("{} matrices fail", report.failed_matrices().count()))?;
    Ok("C admissible for all 100 mixtures".into())
}

fn no_common_pi() -> Check {
    let star: Mat<Rat> = equal_neighbor_matrix(&Graph::star(3));
    let path: Mat<Rat> = equal_neighbor_matrix(&Graph::path(3));
    let common = common_pi(&[star.clone(), path.clone()]).map_err(|e| e.to_string())?;
    ensure(common.is_none(), "unexpected common vector")?;
    let ps = left_eigenvector(&star).map_err(|e| e.to_string())?;
    let pp = left_eigenvector(&path).map_err(|e| e.to_string())?;
    ensure(ps == Vector::new(vec![r(3, 7), r(2, 7), r(2, 7)]), format!("star π = {ps}"))?;
    ensure(pp == Vector::new(vec![r(2, 7), r(3, 7), r(2, 7)]), format!("path π = {pp}"))?;
    Ok(format!("star π = {ps}, path π = {pp}"))
}

fn feasibility_search() -> Check {
    let cfg = SearchConfig::default();

    let set = doubly_stochastic_set();
    let problem = FeasibilityProblem::from_exact(&set).map_err(|e| e.to_string())?;
    let report = find_common_lyapunov(&problem, &cfg).map_err(|e| e.to_string())?;
    let Outcome::Feasible { m, residual } = &report.outcome else {
        return Err("doubly stochastic set not found feasible".into());
    };
    ensure(*residual <= 1e-8, format!("residual {residual:e}"))?;
    let certificate = rationalize_certificate(m);
    let verified = verify_certificate_exact(&certificate, &set).map_err(|e| e.to_string())?.iter().filter(|&&b| b).count();
    ensure(verified >= 95, format!("only {verified}/100 exact checks pass"))?;

    let a = counterexample(8).map_err(|e| e.to_string())?.a;
    let mut rng = ChaCha8Rng::seed_from_u64(2007);
    let mut obstruction = vec![a.clone()];
    obstruction.extend((0..50).map(|_| Permutation::random(8, &mut rng).conjugate(&a)));
    obstruction.push(equal_neighbor_matrix(&Graph::complete(8)));
    let problem = FeasibilityProblem::from_exact(&obstruction).map_err(|e| e.to_string())?;
    let report = find_common_lyapunov(&problem, &cfg).map_err(|e| e.to_string())?;
    let Outcome::NumericallyInfeasible { best_residual, witnesses, .. } = &report.outcome else {
        return Err("obstruction set reported feasible".into());
    };
    let c: Mat<Rat> = variance_matrix(8);
    let certified = witnesses
        .iter()
        .filter(|w| exact_excess(&c, &obstruction[w.matrix_index], &w.x).is_ok_and(|e| e.is_positive()))
        .count();
    ensure(certified >= 1, "no witness certifies a variance increase")?;
    Ok(format!(
        "(a) residual {residual:.1e}, {verified}/100 exact; (b) best residual {best_residual:.2e}, {certified} certified witnesses"
    ))
}

fn consensus_empirics() -> Check {
    let (n, b, steps) = (6, 5, 10_000);
    let cfg = AssumptionConfig::new(r(1, 6), b).map_err(|e| e.to_string())?;
    let mut worst = 0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        let seq = random_sequence(n, steps + 1, 0.15, Some(b), false, &mut rng);
        ensure(check_assumption1(&seq, &cfg, steps).passed, format!("seed {seed}: coefficient bound fails"))?;
        let a2 = check_assumption2(&seq, &cfg, steps / b);
        ensure(a2.passed, format!("seed {seed}: window {:?} disconnected", a2.first_failure))?;
        let x0 = Vector::new((0..n).map(|_| rng.gen_range(-10.0..10.0)).collect::<Vec<f64>>());
        let traj = simulate(&seq, &x0, steps).map_err(|e| e.to_string())?;
        match detect_consensus(&traj, &1e-6) {
            ConsensusOutcome::Converged { t_hit, .. } => worst = worst.max(t_hit),
            ConsensusOutcome::NotConverged { final_span } => {
                return Err(format!("seed {seed}: span {final_span:e} after {steps} steps"))
            }
        }
    }
    Ok(format!("20 runs, slowest reached span <= 1e-6 at t = {worst}"))
}

/// Connected edge subsets counted by union-find, independent of the library.
fn brute_force_count(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len())
        .filter(|mask| {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let root = find(p, p[x]);
                    p[x] = root;
                }
                p[x]
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
            let root = find(&mut parent, 0);
            (0..n).all(|v| find(&mut parent, v) == root)
        })
        .count()
}

fn enumeration_counts() -> Check {
    for (n, expected) in [(2, 1), (3, 4), (4, 38)] {
        let oracle = brute_force_count(n);
        ensure(oracle == expected, format!("n = {n}: brute force gives {oracle}"))?;
        let items: Vec<_> = enumerate_class_a(n, usize::MAX, 0).map_err(|e| e.to_string())?.collect();
        ensure(items.len() == expected, format!("n = {n}: enumerated {}", items.len()))?;
        ensure(items.iter().all(|(_, a)| is_class_a_member(a)), format!("n = {n}: non-member emitted"))?;
    }
    Ok("1, 4, 38".into())
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: "1", name: "counterexample reproduction (exact)", budget: Duration::from_secs(1), run: counterexample_reproduction },
        Criterion { id: "2", name: "counterexample scaling n = 8..16", budget: Duration::from_secs(1), run: counterexample_scaling },
        Criterion { id: "3", name: "symmetrization structure", budget: Duration::from_secs(30), run: symmetrization_structure },
        Criterion { id: "4", name: "single-matrix weighted construction", budget: Duration::from_secs(60), run: single_matrix_construction },
        Criterion { id: "5", name: "doubly stochastic class admits C", budget: Duration::from_secs(60), run: doubly_stochastic_class },
        Criterion { id: "6", name: "no common positive fixed vector", budget: Duration::from_secs(1), run: no_common_pi },
        Criterion { id: "7", name: "numeric feasibility search", budget: Duration::from_secs(300), run: feasibility_search },
        Criterion { id: "8", name: "consensus under bounded intervals", budget: Duration::from_secs(30), run: consensus_empirics },
        Criterion { id: "9", name: "connected graph enumeration counts", budget: Duration::from_secs(10), run: enumeration_counts },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("[{status}] {}. {} ({:.3}s / {}s): {detail}", c.id, c.name, elapsed.as_secs_f64(), c.budget.as_secs());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
