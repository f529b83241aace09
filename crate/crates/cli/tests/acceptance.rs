//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use degen_core::asymptotics::{
    alternating_binomial_identity, bonferroni_bounds, expected_isolated_asym,
    expected_isolated_sym, factorial_moment_from_indicators, indicator_product_sum,
};
use degen_core::models::{matrix_distinctness, sample_mask, sample_values, DEFAULT_DISTINCT_TOL};
use degen_core::polynomial::{discriminant, discriminant_from_roots};
use degen_core::{BipartiteMask, Polynomial, Rational, SparseRegime, ValueDistribution};

const TOL_THEOREM: f64 = 0.02;
const TOL_TV: f64 = 0.03;
const TOL_GAP: f64 = 0.01;
const TOL_FLOAT_DISC: f64 = 1e-8;
const RUNTIME_LIMIT: Duration = Duration::from_secs(120);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn degen(args: &[&str], threads: Option<&str>) -> (i32, String, Duration) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_degen"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("DEGEN_THREADS", t),
        None => cmd.env_remove("DEGEN_THREADS"),
    };
    let started = Instant::now();
    let out = cmd.output().expect("degen runs");
    let elapsed = started.elapsed();
    if !out.status.success() {
        eprintln!("{}", String::from_utf8_lossy(&out.stderr));
    }
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        elapsed,
    )
}

fn json(args: &[&str]) -> Option<(Value, Duration)> {
    let (code, out, t) = degen(args, None);
    (code == 0).then(|| (serde_json::from_str(&out).expect("json"), t))
}

fn estimate_within(args: &[&str], target: f64) -> (bool, String, Duration) {
    match json(args) {
        Some((v, t)) => {
            let est = v["estimate"].as_f64().unwrap();
            let ok = (est - target).abs() <= TOL_THEOREM;
            let checks = v["value_checks"].as_u64().unwrap_or(0);
            (
                ok,
                format!(
                    "estimate {est:.5} vs {target:.5} (±{TOL_THEOREM}, {checks} spectral checks)"
                ),
                t,
            )
        }
        None => (false, format!("simulate {args:?} failed"), Duration::ZERO),
    }
}

fn criterion_1() -> Outcome {
    let args = [
        "simulate", "--model", "asym", "--n", "1000", "--c", "0", "--trials", "20000", "--seed",
        "42", "--target", "cond41",
    ];
    let (ok, detail, t) = estimate_within(&args, 3.0 * (-2f64).exp());
    outcome(
        ok && t < RUNTIME_LIMIT,
        format!("{detail}, {:.1} s", t.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (q, target) in [("0.5", 1.5 * (-0.5f64).exp()), ("0", 2.0 * (-1f64).exp())] {
        let args = [
            "simulate", "--model", "sym", "--n", "1000", "--c", "0", "--q", q, "--trials", "20000",
            "--seed", "43", "--target", "cond41",
        ];
        let (ok, detail, _) = estimate_within(&args, target);
        pass &= ok;
        details.push(format!("q={q}: {detail}"));
    }
    outcome(pass, details.join("; "))
}

fn criterion_3() -> Outcome {
    let args = [
        "simulate", "--model", "asym", "--n", "1000", "--c", "0", "--trials", "20000", "--seed",
        "44", "--target", "pm",
    ];
    let (ok, detail, _) = estimate_within(&args, (-2f64).exp());
    outcome(ok, detail)
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for extra in [
        &["--model", "asym"][..],
        &["--model", "sym", "--q", "0"][..],
    ] {
        let mut args = vec![
            "simulate",
            "--n",
            "1000",
            "--c",
            "0",
            "--trials",
            "20000",
            "--seed",
            "45",
            "--target",
            "histogram",
        ];
        args.extend_from_slice(extra);
        match json(&args) {
            Some((v, _)) => {
                let tv = v["total_variation"].as_f64().unwrap();
                pass &= tv < TOL_TV;
                details.push(format!("{}: TV {tv:.4} (< {TOL_TV})", extra[1]));
            }
            None => {
                pass = false;
                details.push(format!("{} failed", extra[1]));
            }
        }
    }
    outcome(pass, details.join("; "))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for extra in [
        &["--model", "asym"][..],
        &["--model", "sym", "--q", "0.5"][..],
    ] {
        let mut args = vec![
            "simulate", "--n", "1000", "--c", "0", "--trials", "10000", "--seed", "46", "--target",
            "gap_rate",
        ];
        args.extend_from_slice(extra);
        match json(&args) {
            Some((v, _)) => {
                let r = v["estimate"].as_f64().unwrap();
                pass &= r < TOL_GAP;
                details.push(format!("{}: rate {r:.5} (< {TOL_GAP})", extra[1]));
            }
            None => {
                pass = false;
                details.push(format!("{} failed", extra[1]));
            }
        }
    }
    outcome(pass, details.join("; "))
}

fn criterion_6() -> Outcome {
    let Some((v, _)) = json(&["oracle", "--max-n", "3", "--samples", "25", "--seed", "47"]) else {
        return outcome(false, "oracle reported disagreements or failed");
    };
    let total = v["total_disagreements"].as_u64().unwrap();
    let masks: Vec<String> = v["summaries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            let n3 = &s["levels"][2];
            format!(
                "{} n=3: {} masks",
                s["model"].as_str().unwrap(),
                n3["masks"]
            )
        })
        .collect();
    let asym_all = v["summaries"][0]["levels"][2]["masks"] == 512;
    outcome(
        total == 0 && asym_all,
        format!("{total} disagreements; {}", masks.join(", ")),
    )
}

fn criterion_7() -> Outcome {
    let Some((v, _)) = json(&["threshold", "--max-n", "4"]) else {
        return outcome(false, "threshold scan reported a violation or failed");
    };
    let holds = v["holds"].as_bool().unwrap();
    let examples = v["levels"][2]["boundary_examples"].as_array().unwrap();
    // rows 0..3 of the counterexample: row 2 full, (1, 0) set
    let reproduced = examples.iter().any(|e| e == "000/100/111");
    outcome(
        holds && reproduced,
        format!(
            "no violations for n <= 4: {holds}; n=3 boundary counterexample found among {} masks: {reproduced}",
            examples.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let mut exact_ok = 0;
    for _ in 0..1000 {
        let deg = rng.random_range(1..=6);
        let roots: Vec<Rational> = (0..deg)
            .map(|_| {
                Rational::new(
                    BigInt::from(rng.random_range(-9..=9)),
                    BigInt::from(rng.random_range(1..=5)),
                )
            })
            .collect();
        let p = Polynomial::from_roots(&roots).unwrap();
        if discriminant(&p).unwrap() == discriminant_from_roots(&roots).unwrap() {
            exact_ok += 1;
        }
    }
    let mut float_ok = 0;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let deg = rng.random_range(1..=8);
        let coeffs: Vec<f64> = (0..deg).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let p = Polynomial::new(coeffs).unwrap();
        let d = discriminant(&p).unwrap();
        let roots: Vec<Complex64> = p.roots().unwrap();
        let via = discriminant_from_roots(&roots).unwrap();
        let err = (Complex64::new(d, 0.0) - via).norm() / d.abs().max(1.0);
        worst = worst.max(err);
        if err < TOL_FLOAT_DISC {
            float_ok += 1;
        }
    }
    outcome(
        exact_ok == 1000 && float_ok == 1000,
        format!("exact {exact_ok}/1000, float {float_ok}/1000 (worst relative error {worst:.2e})"),
    )
}

fn choose(x: u32, k: usize) -> f64 {
    if k as u32 > x {
        return 0.0;
    }
    (0..k as u32).fold(1.0, |acc, i| acc * (x - i) as f64 / (i + 1) as f64)
}

fn criterion_9() -> Outcome {
    let identity = (0..=40u64).all(|n| {
        (0..=40u64).all(|m| {
            let (l, r) = alternating_binomial_identity(n, m);
            l == r
        })
    });

    let mut rng = ChaCha8Rng::seed_from_u64(49);
    let mut sandwich = 0;
    for _ in 0..10_000 {
        let w: Vec<i64> = (0..7).map(|_| rng.random_range(0..20)).collect();
        let total: i64 = w.iter().sum::<i64>().max(1);
        let pmf: Vec<Rational> = w
            .iter()
            .map(|&x| Rational::new(x.into(), total.into()))
            .collect();
        let betas: Vec<Rational> = (0..7u32)
            .map(|k| {
                pmf.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (x, p)| {
                        acc + p * Rational::from_integer(degen_core::asymptotics::binomial(
                            x as u64, k as u64,
                        ))
                    })
            })
            .collect();
        let ok = (0..7).all(|j| {
            (0..3).filter(|&l| j + 2 * l + 1 < 7).all(|l| {
                let (lo, hi) = bonferroni_bounds(&betas, j, l).unwrap();
                lo <= pmf[j] && pmf[j] <= hi
            })
        });
        sandwich += ok as u32;
    }

    let m = 10;
    let weights: Vec<f64> = (0..1 << m).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let joint: Vec<(f64, u64)> = weights
        .iter()
        .enumerate()
        .map(|(b, w)| (w / total, b as u64))
        .collect();
    let sums: Vec<f64> = (0..=m)
        .map(|k| indicator_product_sum(&joint, m, k))
        .collect();
    let moments = (0..=m).all(|k| {
        let direct: f64 = joint
            .iter()
            .map(|&(p, b)| p * choose(b.count_ones(), k))
            .sum();
        (factorial_moment_from_indicators(&sums, k) - direct).abs() < 1e-9
    });

    let mut enumeration = true;
    for n in 1..=3usize {
        for p in [0.3f64, 0.7] {
            let mut law = vec![0.0; 2 * n + 1];
            for code in 0u64..1 << (n * n) {
                let g = BipartiteMask::from_code(n, code);
                let e = g.edge_count() as i32;
                law[g.isolated_count()] += p.powi(e) * (1.0 - p).powi((n * n) as i32 - e);
            }
            let mut sym_law = vec![0.0; n + 1];
            let q = 0.4f64;
            for code in 0u64..1 << (n * (n + 1) / 2) {
                let g = BipartiteMask::symmetric_from_code(n, code);
                let diag = (0..n).filter(|&j| g.contains(j, j)).count() as i32;
                let off = ((g.edge_count() as i32) - diag) / 2;
                let pairs = (n * (n - 1) / 2) as i32;
                sym_law[g.isolated_count()] += q.powi(diag)
                    * (1.0 - q).powi(n as i32 - diag)
                    * p.powi(off)
                    * (1.0 - p).powi(pairs - off);
            }
            for k in 0..=2 * n {
                let direct: f64 = law
                    .iter()
                    .enumerate()
                    .map(|(x, w)| w * choose(x as u32, k))
                    .sum();
                enumeration &= (expected_isolated_asym(n, p, k) - direct).abs() < 1e-12;
            }
            for k in 0..=n {
                let direct: f64 = sym_law
                    .iter()
                    .enumerate()
                    .map(|(x, w)| w * choose(x as u32, k))
                    .sum();
                enumeration &= (expected_isolated_sym(n, p, q, k) - direct).abs() < 1e-12;
            }
        }
    }
    outcome(
        identity && sandwich == 10_000 && moments && enumeration,
        format!(
            "identity n,m <= 40: {identity}; Bonferroni {sandwich}/10000; \
             10-indicator moments: {moments}; enumeration n <= 3: {enumeration}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut degenerate = 0;
    let mut exceptions = 0;
    let mut trial = 0u64;
    while degenerate < 1000 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial ^ 0x5eed);
        let n = 2 + (trial % 5) as usize;
        let p = [0.15, 0.3, 0.5, 0.7][(trial / 5 % 4) as usize];
        let symmetric = trial % 2 == 1;
        let mask = sample_mask(n, &SparseRegime::fixed(p, p).unwrap(), symmetric, &mut rng);
        let s = sample_values(&mask, ValueDistribution::Uniform01, &mut rng);
        let r = matrix_distinctness(s.values(), symmetric, DEFAULT_DISTINCT_TOL).unwrap();
        if !r.distinct {
            degenerate += 1;
            let band = DEFAULT_DISTINCT_TOL * (1.0 + r.scale);
            exceptions += r.repeated_at.iter().filter(|z| z.norm() >= band).count();
        }
        trial += 1;
    }
    outcome(
        exceptions == 0,
        format!("{degenerate} degenerate of {trial} sampled matrices, {exceptions} repeated eigenvalues off zero"),
    )
}

fn criterion_11() -> Outcome {
    let runs = [
        &[
            "simulate", "--model", "asym", "--n", "300", "--c", "0", "--trials", "3000", "--seed",
            "7", "--target", "cond41",
        ][..],
        &[
            "simulate",
            "--model",
            "sym",
            "--n",
            "300",
            "--c",
            "0.5",
            "--q",
            "0.3",
            "--trials",
            "3000",
            "--seed",
            "7",
            "--target",
            "histogram",
        ][..],
    ];
    let mut identical = true;
    for args in runs {
        let outputs: Vec<String> = ["1", "2", "4"]
            .iter()
            .map(|t| degen(args, Some(t)).1)
            .collect();
        identical &= !outputs[0].is_empty() && outputs.iter().all(|o| o == &outputs[0]);
    }
    outcome(
        identical,
        "DEGEN_THREADS in {1, 2, 4}, cond41 and histogram reports",
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("asym distinct-eigenvalue probability", criterion_1),
        ("sym distinct-eigenvalue probability", criterion_2),
        ("perfect matching probability", criterion_3),
        ("isolated points are Poisson", criterion_4),
        ("vanishing gap rate", criterion_5),
        ("graph/spectrum oracle equivalence", criterion_6),
        ("edge-count thresholds", criterion_7),
        ("discriminant identity", criterion_8),
        ("moment toolkit", criterion_9),
        ("degeneracy at zero", criterion_10),
        ("thread-count determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, o.detail);
        failed += !o.pass as u32;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
