use degen_core::asymptotics::{
    alternating_binomial_identity, bonferroni_bounds, expected_isolated_asym,
    expected_isolated_sym, factorial_moment_from_indicators, gen_binomial, indicator_product_sum,
    lambda_of, mu_of, p_of_n, poisson_pmf, predict_distinct,
};
use degen_core::{BipartiteMask, Model, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn pascal(rows: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::one()]];
    for n in 1..=rows {
        let prev = &t[n - 1];
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        t.push(row);
    }
    t
}

fn choose(x: u64, k: u64) -> f64 {
    if k > x {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (x - i) as f64 / (i + 1) as f64)
}

#[test]
fn closed_forms() {
    assert_eq!(lambda_of(0.0), 2.0);
    assert!((lambda_of(2f64.ln()) - 1.0).abs() < 1e-15);
    assert!(lambda_of(800.0) == 0.0);
    assert_eq!(mu_of(0.0, 0.5).unwrap(), 0.5);
    assert!(mu_of(0.0, 1.5).is_err());
    assert_eq!(poisson_pmf(0.0, 0), 1.0);
    assert!((poisson_pmf(2.0, 0) - 0.135335).abs() < 1e-6);
    assert!((poisson_pmf(2.0, 1) - 0.270671).abs() < 1e-6);
    let asym = predict_distinct(0.0, Model::Asym, 0.0).unwrap();
    assert!((asym.p_distinct - 3.0 * (-2f64).exp()).abs() < 1e-15);
    let sym = predict_distinct(0.0, Model::Sym, 0.5).unwrap();
    assert_eq!(sym.mu, Some(0.5));
    assert!((sym.p_distinct - 0.909796).abs() < 1e-6);
    let sym0 = predict_distinct(0.0, Model::Sym, 0.0).unwrap();
    assert!((sym0.p_distinct - 2.0 * (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn alternating_binomial_sums() {
    let t = pascal(41);
    for n in 0..=40u64 {
        for m in 0..=40u64 {
            let (lhs, rhs) = alternating_binomial_identity(n, m);
            assert_eq!(lhs, rhs, "n={n} m={m}");
            let mut direct = BigInt::zero();
            for k in 0..=m.min(n + 1) {
                let term = &t[n as usize + 1][k as usize];
                direct = if k % 2 == 0 {
                    direct + term
                } else {
                    direct - term
                };
            }
            assert_eq!(lhs, direct);
        }
    }
}

#[test]
fn generalized_binomial_at_integers() {
    let t = pascal(12);
    for n in 0..=12i64 {
        for k in 0..=12i64 {
            let expect = if k <= n {
                t[n as usize][k as usize].clone()
            } else {
                BigInt::zero()
            };
            let got = gen_binomial(&Rational::from_integer(BigInt::from(n)), k).unwrap();
            assert_eq!(got, Rational::from_integer(expect));
        }
    }
    // C(−1, k) = (−1)^k
    let got = gen_binomial(&Rational::from_integer(BigInt::from(-1)), 5).unwrap();
    assert_eq!(got, -Rational::one());
}

fn distribution() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(0u32..20, 7)
        .prop_filter("nonzero", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: u32 = w.iter().sum();
            w.iter()
                .map(|&x| Rational::new(BigInt::from(x), BigInt::from(total)))
                .collect()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn bonferroni_sandwich(pmf in distribution()) {
        let t = pascal(7);
        let betas: Vec<Rational> = (0..7)
            .map(|k| {
                pmf.iter()
                    .enumerate()
                    .filter(|&(x, _)| x >= k)
                    .map(|(x, p)| p * Rational::from_integer(t[x][k].clone()))
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect();
        for (j, mass) in pmf.iter().enumerate().take(7) {
            for ell in 0..3 {
                if j + 2 * ell + 1 >= 7 {
                    continue;
                }
                let (lo, hi) = bonferroni_bounds(&betas, j, ell).unwrap();
                prop_assert!(&lo <= mass && mass <= &hi, "j={} ell={}", j, ell);
            }
        }
    }
}

proptest! {
    #[test]
    fn factorial_moments_of_indicators(
        (m, weights) in (1usize..=10).prop_flat_map(|m| (Just(m), prop::collection::vec(0u32..5, 1 << m)))
    ) {
        prop_assume!(weights.iter().any(|&w| w > 0));
        let total: u32 = weights.iter().sum();
        let joint: Vec<(f64, u64)> = weights
            .iter()
            .enumerate()
            .map(|(bits, &w)| (w as f64 / total as f64, bits as u64))
            .collect();
        for k in 0..=m {
            let sums: Vec<f64> = (0..=m).map(|i| indicator_product_sum(&joint, m, i)).collect();
            let direct: f64 =
                joint.iter().map(|&(p, bits)| p * choose(bits.count_ones() as u64, k as u64)).sum();
            let via = factorial_moment_from_indicators(&sums, k);
            prop_assert!((via - direct).abs() < 1e-9 * (1.0 + direct), "k={} {} vs {}", k, via, direct);
        }
    }
}

/// Law of (isolated count, indicator pattern) over all masks of order n.
fn enumerate_isolated(n: usize, p: f64, q: f64, symmetric: bool) -> Vec<(f64, u64)> {
    let bits = if symmetric { n * (n + 1) / 2 } else { n * n };
    (0u64..1 << bits)
        .map(|code| {
            let g = if symmetric {
                BipartiteMask::symmetric_from_code(n, code)
            } else {
                BipartiteMask::from_code(n, code)
            };
            let mut prob = 1.0;
            let mut bit = 0;
            for j in 0..n {
                for l in 0..n {
                    if symmetric && l < j {
                        continue;
                    }
                    let on = code >> bit & 1 == 1;
                    let pr = if symmetric && l == j { q } else { p };
                    prob *= if on { pr } else { 1.0 - pr };
                    bit += 1;
                }
            }
            let (rows, cols) = g.isolated_points();
            let mut pattern = 0u64;
            for j in rows {
                pattern |= 1 << j;
            }
            if !symmetric {
                for l in cols {
                    pattern |= 1 << (n + l);
                }
            }
            (prob, pattern)
        })
        .collect()
}

#[test]
fn isolated_moments_match_enumeration() {
    for n in 1..=3 {
        for p in [0.2, 0.5, 0.9] {
            let joint = enumerate_isolated(n, p, 0.0, false);
            let sums: Vec<f64> = (0..=2 * n)
                .map(|k| indicator_product_sum(&joint, 2 * n, k))
                .collect();
            for k in 0..=2 * n {
                let direct: f64 = joint
                    .iter()
                    .map(|&(pr, bits)| pr * choose(bits.count_ones() as u64, k as u64))
                    .sum();
                let formula = expected_isolated_asym(n, p, k);
                assert!((formula - direct).abs() < 1e-12, "n={n} p={p} k={k}");
                assert!((factorial_moment_from_indicators(&sums, k) - direct).abs() < 1e-12);
            }
            for q in [0.0, 0.3] {
                let joint = enumerate_isolated(n, p, q, true);
                for k in 0..=n {
                    let direct: f64 = joint
                        .iter()
                        .map(|&(pr, bits)| pr * choose(bits.count_ones() as u64, k as u64))
                        .sum();
                    let formula = expected_isolated_sym(n, p, q, k);
                    assert!(
                        (formula - direct).abs() < 1e-12,
                        "sym n={n} p={p} q={q} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn isolated_moments_approach_poisson() {
    let lambda = lambda_of(0.0);
    for k in 1..=3usize {
        let limit = lambda.powi(k as i32) / (1..=k).product::<usize>() as f64;
        let errs: Vec<f64> = [1_000usize, 10_000, 100_000]
            .iter()
            .map(|&n| (expected_isolated_asym(n, p_of_n(n, 0.0), k) - limit).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "k={k} {errs:?}");
        assert!(errs[2] < 0.05 * limit, "k={k} {errs:?}");
    }
}

proptest! {
    #[test]
    fn prediction_is_poisson_mass_below_two(c in -3.0f64..5.0, q in 0.0f64..=1.0) {
        let a = predict_distinct(c, Model::Asym, 0.0).unwrap();
        let l = lambda_of(c);
        prop_assert_eq!(a.p_distinct, poisson_pmf(l, 0) + poisson_pmf(l, 1));
        let s = predict_distinct(c, Model::Sym, q).unwrap();
        let m = mu_of(c, q).unwrap();
        prop_assert_eq!(s.p_distinct, poisson_pmf(m, 0) + poisson_pmf(m, 1));
        prop_assert!((0.0..=1.0).contains(&s.p_distinct));
    }
}
