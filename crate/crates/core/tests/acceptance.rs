//! Acceptance criteria, one line of output each.
//!
//! Run with `cargo test -p gue-moments --test acceptance`; the PASS/FAIL table goes
//! to stderr.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gue_moments::asymptotics::{
    a_pair, a_pair_by_sum, catalan, correlation_limit, degree_formula, leading_general,
    semicircle_moment, semicircle_quadrature, subleading_multi, subleading_single, LimitValue,
    SqrtRational, TraceVariableSpec,
};
use gue_moments::bipoly::{BivariatePolynomial, UnivariatePolynomial};
use gue_moments::cli;
use gue_moments::mc::cross_check_with_retry;
use gue_moments::moments::{
    finite_n_statistics, moment_by_enumeration, moment_nu, Correlation, IndexMultiset, MomentCache,
};
use gue_moments::numeric::double_factorial_odd;
use gue_moments::ribbon::{ContractionCase, EdgeId, Permutation, RibbonGraph};
use gue_moments::EnumerationCap;

struct Verdict {
    id: u8,
    name: &'static str,
    failures: Vec<String>,
    detail: String,
}

impl Verdict {
    fn new(id: u8, name: &'static str) -> Self {
        Verdict {
            id,
            name,
            failures: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_SWEEP_SUM: u32 = 14;
const MAX_SWEEP_ZEROS: usize = 2;

/// Partitions of `total` into positive parts, parts in non-increasing order.
fn partitions(total: u32, largest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=largest.min(total)).rev() {
        prefix.push(part);
        partitions(total - part, part, prefix, out);
        prefix.pop();
    }
}

/// Every nonempty multiset with entry sum at most 14 and at most two zero entries.
fn sweep() -> Vec<IndexMultiset> {
    let mut out = Vec::new();
    for total in 0..=MAX_SWEEP_SUM {
        let mut parts = Vec::new();
        partitions(total, total, &mut Vec::new(), &mut parts);
        for p in parts {
            for zeros in 0..=MAX_SWEEP_ZEROS {
                let ks: Vec<u32> = p
                    .iter()
                    .copied()
                    .chain(std::iter::repeat_n(0, zeros))
                    .collect();
                if !ks.is_empty() {
                    out.push(IndexMultiset::new(ks));
                }
            }
        }
    }
    out
}

fn nu_poly(terms: &[(u32, i64)]) -> UnivariatePolynomial {
    UnivariatePolynomial::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
}

fn criterion_1(cache: &MomentCache, cases: &[IndexMultiset]) -> Verdict {
    let mut v = Verdict::new(1, "recursion equals chord enumeration, sum <= 14");
    let start = Instant::now();
    for ks in cases {
        let enumerated = moment_by_enumeration(ks, EnumerationCap::default()).expect("within cap");
        let recursed = cache.moment(ks);
        v.check(*recursed == enumerated, || {
            format!("{ks}: {recursed} vs {enumerated}")
        });
    }
    let elapsed = start.elapsed();
    v.check(elapsed < Duration::from_secs(120), || {
        format!("sweep took {elapsed:?}")
    });
    v.detail = format!("{} multisets in {:.1}s", cases.len(), elapsed.as_secs_f64());
    v
}

fn criterion_2(cache: &MomentCache) -> Verdict {
    let mut v = Verdict::new(2, "worked examples and the all-ones and all-twos families");
    let nu = |ks: &[u32]| moment_nu(&IndexMultiset::new(ks.iter().copied()), cache);
    v.check(nu(&[2]) == nu_poly(&[(2, 1)]), || "p_2".into());
    v.check(nu(&[1, 3]) == nu_poly(&[(2, 3)]), || "p_1,3".into());
    v.check(nu(&[2, 2]) == nu_poly(&[(4, 1), (2, 2)]), || "p_2,2".into());
    for n in 1..=6u32 {
        let ones = IndexMultiset::new(std::iter::repeat_n(1, 2 * n as usize));
        let expected = BivariatePolynomial::monomial(n, n, double_factorial_odd(n as u64));
        let got = cache.moment(&ones);
        v.check(*got == expected, || format!("all ones, n={n}: {got}"));

        let twos = IndexMultiset::new(std::iter::repeat_n(2, n as usize));
        let expected = (0..n).fold(BivariatePolynomial::one(), |acc, j| {
            acc * (BivariatePolynomial::monomial(0, 2, 1)
                + BivariatePolynomial::monomial(1, 0, 2 * j))
        });
        let got = cache.moment(&twos);
        v.check(*got == expected, || format!("all twos, n={n}: {got}"));
    }
    v.detail = "p_2, p_1,3, p_2,2 and both families for n <= 6".into();
    v
}

fn criterion_3(cache: &MomentCache, cases: &[IndexMultiset]) -> Verdict {
    let mut v = Verdict::new(3, "degree in v equals m + q");
    let mut checked = 0;
    for ks in cases.iter().filter(|ks| ks.total() % 2 == 0) {
        let degree = moment_nu(ks, cache).degree_nu();
        let expected = degree_formula(ks).expect("even total");
        v.check(degree == Some(expected), || {
            format!("{ks}: {degree:?} vs {expected}")
        });
        checked += 1;
    }
    v.detail = format!("{checked} even-sum multisets");
    v
}

fn criterion_4(cache: &MomentCache, cases: &[IndexMultiset]) -> Verdict {
    let mut v = Verdict::new(4, "leading coefficients");
    for n in 0..=7u64 {
        let lead = moment_nu(&IndexMultiset::new([2 * n as u32]), cache).leading_coeff();
        v.check(lead.as_ref() == Ok(&catalan(n)), || {
            format!("p_{}: {lead:?}", 2 * n)
        });
    }
    let mut mixed = 0;
    for ks in cases.iter().filter(|ks| ks.total() % 2 == 0) {
        let evens: Vec<u64> = ks
            .ks()
            .iter()
            .filter(|k| *k % 2 == 0)
            .map(|&k| k as u64 / 2)
            .collect();
        let odds: Vec<u64> = ks
            .ks()
            .iter()
            .filter(|k| *k % 2 == 1)
            .map(|&k| k as u64 / 2)
            .collect();
        let predicted = leading_general(&evens, &odds);
        let actual = moment_nu(ks, cache).leading_coeff();
        v.check(
            predicted.is_ok() && predicted.clone().ok() == actual.clone().ok(),
            || format!("{ks}: {predicted:?} vs {actual:?}"),
        );
        mixed += 1;
    }
    let mut pairs = 0;
    for i in 0..=12u64 {
        for j in 0..=12 - i {
            v.check(a_pair(i, j) == a_pair_by_sum(i, j), || format!("A_{i},{j}"));
            pairs += 1;
        }
    }
    v.detail = format!("C_n for n <= 7, {mixed} multisets, {pairs} A_i,j pairs");
    v
}

fn criterion_5(cache: &MomentCache, cases: &[IndexMultiset]) -> Verdict {
    let mut v = Verdict::new(5, "subleading coefficients of even multisets");
    let mut checked = 0;
    for ks in cases.iter().filter(|ks| ks.ks().iter().all(|k| k % 2 == 0)) {
        let is: Vec<u64> = ks.ks().iter().map(|&k| k as u64 / 2).collect();
        let p = moment_nu(ks, cache);
        let degree = p.degree_nu().expect("nonzero");
        let actual = degree
            .checked_sub(2)
            .map(|d| p.coeff_of_nu(d))
            .unwrap_or_else(BigInt::zero);
        let predicted = subleading_multi(&is);
        v.check(actual == predicted, || {
            format!("{ks}: {predicted} vs {actual}")
        });
        if ks.len() == 1 {
            v.check(subleading_single(is[0]) == actual, || {
                format!("single {ks}")
            });
        }
        checked += 1;
    }
    let c = |k: u32| {
        let p = moment_nu(&IndexMultiset::new([k]), cache);
        p.coeff_of_nu(p.degree_nu().unwrap() - 2)
    };
    v.check(
        c(4) == BigInt::from(1) && subleading_single(2) == BigInt::from(1),
        || "C_2(1)".into(),
    );
    v.check(
        c(6) == BigInt::from(10) && subleading_single(3) == BigInt::from(10),
        || "C_3(1)".into(),
    );
    v.detail = format!("{checked} even multisets, C_2(1) = 1, C_3(1) = 10");
    v
}

const SHOWCASE: &str = "25081904924688737847061935982290890890757044619026344345600000";

fn criterion_6() -> Verdict {
    let mut v = Verdict::new(6, "62-digit leading coefficient showcase");
    let start = Instant::now();
    let out = cli::run([
        "gue-moments",
        "asympt",
        "--evens",
        "5,21",
        "--odds",
        "7,21,23,31",
        "--which",
        "leading",
    ]);
    let elapsed = start.elapsed();
    v.check(out.code == 0, || format!("exit code {}", out.code));
    v.check(out.stdout.trim() == SHOWCASE, || {
        format!("printed {}", out.stdout.trim())
    });
    v.check(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    });
    v.detail = format!("{} digits in {:.3}s", SHOWCASE.len(), elapsed.as_secs_f64());
    v
}

fn exact_limit(f: &TraceVariableSpec, g: &TraceVariableSpec) -> LimitValue {
    correlation_limit(f, g).expect("well-posed").value
}

fn criterion_7(cache: &MomentCache) -> Verdict {
    let mut v = Verdict::new(7, "finite-N correlations converge to the large-N limits");
    let sizes = [100u64, 1_000, 10_000];
    let mut worst_error = 0.0f64;
    let mut ratios = Vec::new();
    let mut undefined = 0;
    for i in 0..=2u64 {
        for j in 0..=2u64 {
            let rat = |n: u64, d: u64| BigRational::new(BigInt::from(n), BigInt::from(d));
            let odd_closed =
                SqrtRational::new(rat(1, i + j + 1), rat((2 * i + 1) * (2 * j + 1), 1));
            let families = [
                (
                    TraceVariableSpec::odd_trace(i),
                    TraceVariableSpec::odd_trace(j),
                    Some(odd_closed),
                ),
                (
                    TraceVariableSpec::even_trace(i),
                    TraceVariableSpec::even_trace(j),
                    (i > 0 && j > 0).then(|| SqrtRational::new(rat(2, i + j), rat(i * j, 1))),
                ),
            ];
            for (f, g, closed) in families {
                let limit = exact_limit(&f, &g);
                let label = format!("{} vs {}", f.to_multiset(), g.to_multiset());
                let Some(closed) = closed else {
                    // Tr X^0 = N has zero variance at every size
                    v.check(limit == LimitValue::Undefined, || {
                        format!("{label}: limit defined")
                    });
                    for &n in &sizes {
                        let stats =
                            finite_n_statistics(&f.to_multiset(), &g.to_multiset(), n, cache);
                        v.check(stats.correlation == Correlation::Undefined, || {
                            format!("{label}: finite N={n} defined")
                        });
                    }
                    undefined += 1;
                    continue;
                };
                v.check(limit == LimitValue::Exact(closed.clone()), || {
                    format!("{label}: limit {limit:?} vs closed form {closed}")
                });
                let target = closed.approx();
                let errors: Vec<f64> = sizes
                    .iter()
                    .map(|&n| {
                        let stats =
                            finite_n_statistics(&f.to_multiset(), &g.to_multiset(), n, cache);
                        stats.correlation.approx().expect("defined") - target
                    })
                    .collect();
                worst_error = worst_error.max(errors[1].abs());
                v.check(errors[1].abs() <= 1e-3, || {
                    format!("{label}: error at 10^3 {}", errors[1])
                });
                // the same variable on both sides has correlation exactly 1
                if errors.iter().all(|e| e.abs() < 1e-14) {
                    continue;
                }
                for w in errors.windows(2) {
                    let ratio = w[0] / w[1];
                    ratios.push(ratio);
                    v.check((25.0..=400.0).contains(&ratio), || {
                        format!("{label}: error ratio {ratio} ({errors:?})")
                    });
                }
            }
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    v.detail = format!(
        "max |error(10^3)| = {worst_error:.2e}, error ratios in [{lo:.1}, {hi:.1}], {undefined} undefined pairs"
    );
    v
}

const MC_SEEDS: [u64; 2] = [0x5eed_0001, 0x5eed_0002];

fn criterion_8(cache: &MomentCache) -> Verdict {
    let mut v = Verdict::new(8, "Monte Carlo agrees with exact moments at 4 sigma");
    let battery: [&[u32]; 6] = [&[2], &[4], &[2, 2], &[1, 3], &[6], &[1, 1, 1, 1]];
    let start = Instant::now();
    let mut retries = 0;
    let mut worst = 0.0f64;
    for ks in battery {
        let ks = IndexMultiset::new(ks.iter().copied());
        for n in [4usize, 8] {
            let check =
                cross_check_with_retry(&ks, n, 100_000, MC_SEEDS, 4.0, cache).expect("valid");
            retries += check.retry.is_some() as usize;
            worst = worst.max(check.last().deviation());
            v.check(check.passed(), || format!("{}", check.last()));
        }
    }
    let elapsed = start.elapsed();
    v.check(elapsed < Duration::from_secs(60), || {
        format!("battery took {elapsed:?}")
    });
    v.detail = format!(
        "12 checks, worst {worst:.2} std errors, {retries} retries, {:.1}s",
        elapsed.as_secs_f64()
    );
    v
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new(9, "semicircle moments, exact and by quadrature");
    let mut worst = 0.0f64;
    for i in 0..=20usize {
        let mut q = vec![BigRational::zero(); 2 * i + 1];
        q[2 * i] = BigRational::one();
        let exact = semicircle_moment(&q);
        v.check(
            exact == BigRational::from_integer(catalan(i as u64)),
            || format!("x^{}", 2 * i),
        );
        if i <= 8 {
            let mut qf = vec![0.0; 2 * i + 1];
            qf[2 * i] = 1.0;
            let numeric = semicircle_quadrature(&qf, 1e-12).expect("converges");
            let err = (numeric - catalan(i as u64).to_string().parse::<f64>().unwrap()).abs();
            worst = worst.max(err);
            v.check(err <= 1e-8, || {
                format!("quadrature x^{}: error {err}", 2 * i)
            });
        }
    }
    let out = cli::run([
        "gue-moments",
        "semicircle",
        "--poly",
        &x36(),
        "--mode",
        "exact",
    ]);
    v.check(out.stdout.trim() == "exact: 477638700", || {
        format!("x^36 printed {}", out.stdout)
    });
    v.detail = format!("i <= 20 exact, i <= 8 quadrature error <= {worst:.1e}, x^36 -> 477638700");
    v
}

fn x36() -> String {
    let mut coeffs = vec!["0"; 37];
    coeffs[36] = "1";
    coeffs.join(",")
}

/// Contraction written directly on the vertex permutation: a half-edge's successor
/// skips over the contracted half-edges by jumping across the edge.
fn contract_directly(graph: &RibbonGraph, h: usize) -> (Vec<usize>, Vec<usize>) {
    let sigma = graph.sigma();
    let kappa = graph.kappa();
    let h_prime = kappa.apply(h);
    let in_edge = |x: usize| x == h || x == h_prime;
    let relabel = |x: usize| x - (x > h) as usize - (x > h_prime) as usize;
    let mut new_sigma = vec![0; graph.half_edges() - 2];
    let mut new_kappa = vec![0; graph.half_edges() - 2];
    for x in (0..graph.half_edges()).filter(|&x| !in_edge(x)) {
        let mut y = sigma.apply(x);
        while in_edge(y) {
            y = sigma.apply(kappa.apply(y));
        }
        new_sigma[relabel(x)] = relabel(y);
        new_kappa[relabel(x)] = relabel(kappa.apply(x));
    }
    (new_sigma, new_kappa)
}

fn criterion_10() -> Verdict {
    let mut v = Verdict::new(10, "ribbon graph invariants and contraction");
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut contractions = 0;
    let mut loops = 0;
    for _ in 0..10_000 {
        let edges = rng.random_range(0..=8);
        let graph = RibbonGraph::random(&mut rng, edges);
        let inv = graph.invariants().expect("valid graph");
        v.check(
            2 * inv.genus + inv.boundaries == inv.vertices + inv.edges,
            || format!("{graph}"),
        );
        v.check(
            inv.euler_characteristic == 2 - inv.vertices as i64 - inv.edges as i64,
            || format!("chi of {graph}"),
        );
        for e in graph.edges().collect::<Vec<EdgeId>>() {
            let case: ContractionCase = graph.contraction_case(e).expect("edge exists");
            let contracted = graph.contract_edge(e).expect("edge exists");
            let after = contracted.invariants().expect("valid graph");
            let db = after.boundaries as i64 - inv.boundaries as i64;
            let dg = after.genus as i64 - inv.genus as i64;
            v.check(
                db == case.boundary_delta() && dg == case.genus_delta(),
                || {
                    format!(
                        "{graph} edge {}: {case:?} predicted ({}, {}), got ({db}, {dg})",
                        e.0,
                        case.boundary_delta(),
                        case.genus_delta()
                    )
                },
            );
            let (sigma, kappa) = contract_directly(&graph, e.0);
            v.check(
                contracted.sigma() == &Permutation::from_images(sigma).unwrap()
                    && contracted.kappa() == &Permutation::from_images(kappa).unwrap(),
                || format!("{graph} edge {}: direct contraction differs", e.0),
            );
            contractions += 1;
            loops += case.is_loop() as usize;
        }
    }
    v.detail = format!("10000 graphs, {contractions} contractions ({loops} loops)");
    v
}

#[test]
fn acceptance_criteria() {
    let cache = MomentCache::new();
    let cases = sweep();
    let verdicts = vec![
        criterion_1(&cache, &cases),
        criterion_2(&cache),
        criterion_3(&cache, &cases),
        criterion_4(&cache, &cases),
        criterion_5(&cache, &cases),
        criterion_6(),
        criterion_7(&cache),
        criterion_8(&cache),
        criterion_9(),
        criterion_10(),
    ];
    let mut table = String::from("\n");
    for v in &verdicts {
        let status = if v.passed() { "PASS" } else { "FAIL" };
        table.push_str(&format!(
            "criterion {:>2} {status}  {}: {}\n",
            v.id, v.name, v.detail
        ));
        for failure in v.failures.iter().take(5) {
            table.push_str(&format!("    {failure}\n"));
        }
    }
    // written past the test harness's capture so the table shows in every run
    std::io::stderr().write_all(table.as_bytes()).unwrap();
    let failed: Vec<u8> = verdicts
        .iter()
        .filter(|v| !v.passed())
        .map(|v| v.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
