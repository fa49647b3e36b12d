mod common;

use cliquecolor::params::{
    assemble_lambda, default_epsilon, inequality_check, janson_delta_assembly, janson_exponent_raw, lambda_terms, log_base_ratio,
    phi, pi_series, predicted_bounds, refined_delta_ln, tau, ParamSchedule, ScheduleCase, SumOrder, ALPHA,
};
use common::close;

/// Plain left-to-right sum of the Π series with every term exponentiated
/// directly; only usable where no term under- or overflows.
fn naive_pi(sch: &ParamSchedule, cutoff: f64) -> f64 {
    let km = (sch.k - sch.m) as f64;
    let mut sum = 0.0;
    let mut i = 2u64;
    loop {
        let r = (sch.zeta * i as f64).exp();
        if r * sch.p > cutoff {
            break;
        }
        let x = sch.ln_n / (phi(r - 1.0).unwrap() * sch.p);
        sum += x * (r * sch.p).powf(km) * ((sch.zeta * km).exp() - 1.0);
        i += 1;
    }
    sum
}

#[test]
fn s_is_the_exact_floor() {
    for (n, p, d) in [(1e6, 0.1, 0.5), (1e4, 0.2, 0.5), (3000.0, 0.15, 0.3), (1e9, 0.01, 0.77)] {
        let sch = ParamSchedule::build(n, p, None).unwrap().with_delta(d).unwrap();
        let l = -(1.0f64 - p).ln();
        let s = sch.s as f64;
        assert!(s * l <= d * n.ln() && d * n.ln() < (s + 1.0) * l);
    }
    assert_eq!(ParamSchedule::build(1e6, 0.1, None).unwrap().with_delta(0.5).unwrap().s, 65);
}

#[test]
fn schedule_case_and_sizes() {
    let ln_n = 1e6f64.ln();
    let d = ParamSchedule::from_rho(ln_n, 0.01, None).unwrap();
    assert_eq!((d.case, d.m, d.k), (ScheduleCase::Dense, 66, 101));
    assert_eq!(ParamSchedule::from_rho(ln_n, 0.35, None).unwrap().k, 3);
    assert_eq!(ParamSchedule::from_rho(ln_n, 0.2, None).unwrap().k, 6);
    for rho in [0.005, 0.0099, 0.0101, 0.05, 0.3] {
        let sch = ParamSchedule::from_rho(ln_n, rho, None).unwrap();
        assert_eq!(sch.m >= 2, sch.p >= (-0.01 * ln_n).exp(), "rho {rho}");
    }
}

#[test]
fn dense_delta_and_sparse_delta_formulas() {
    let ln_n = 50.0;
    let d = ParamSchedule::from_rho(ln_n, 0.005, None).unwrap();
    assert!(close(d.delta_formula, 0.5 - 0.015 - 9.0 * ln_n.ln() / ln_n, 1e-12));
    let s = ParamSchedule::from_rho(ln_n, 0.2, Some(0.003)).unwrap();
    assert_eq!(s.delta_formula, 0.003f64.min(0.005));
    assert_eq!(default_epsilon(0.35), 0.4 - 0.35);
}

#[test]
fn tau_is_the_larger_term() {
    let (ln_n, p, d) = (1e5f64.ln(), 0.2, 0.5);
    let n = 1e5;
    let a = 2.0 * ln_n / (n * p);
    let b = (32.0 * ln_n * ln_n / (n.powf(1.0 - d) * p * (1.0 - ln_n / (n * p)))).sqrt();
    assert!(close(tau(ln_n, p, d), a.max(b), 1e-12));
}

#[test]
fn pi_series_matches_naive_summation() {
    for (n, p) in [(1e3, 0.3), (1e4, 0.5), (1e3, 0.05)] {
        let sch = ParamSchedule::build(n, p, None).unwrap();
        let (pa, _) = pi_series(&sch, ALPHA, SumOrder::Forward).unwrap();
        assert!(close(pa, naive_pi(&sch, ALPHA), 1e-9), "n {n} p {p}");
        let (pl, _) = pi_series(&sch, 1.0 / sch.ln_n, SumOrder::Reverse).unwrap();
        assert!(close(pl, naive_pi(&sch, 1.0 / sch.ln_n), 1e-9));
    }
}

#[test]
fn lambda_assembly_is_bitwise() {
    for (n, p) in [(1e4, 0.9), (1e5, 0.01), (1e3, 0.2)] {
        let sch = ParamSchedule::build(n, p, None).unwrap();
        let t = lambda_terms(&sch, SumOrder::Forward).unwrap();
        let expected = match sch.case {
            ScheduleCase::Dense => t.lambda0 + t.pi_alpha,
            ScheduleCase::Sparse => t.lambda0 + (t.pi_inv_log + 0.7),
        };
        assert_eq!(t.lambda.to_bits(), expected.to_bits());
        assert_eq!(assemble_lambda(sch.case, t.lambda0, t.pi_alpha, t.pi_inv_log), t.lambda);
    }
}

#[test]
fn refined_delta_identity() {
    let eps = 0.02;
    let rho: f64 = 0.4 - eps;
    assert!(close((1.0 - 2.5 * rho).min(rho), 2.5 * eps, 1e-12));
    let ln_n = 10f64.exp();
    assert!(close(refined_delta_ln(ln_n, eps).unwrap(), 0.05 - 90.0 / 10f64.exp(), 1e-12));
}

#[test]
fn k_bound_needs_ln_n_at_least_k() {
    for ln_n in [100.0, 102.0] {
        let d = ParamSchedule::from_rho(ln_n, 0.01, None).unwrap();
        assert_eq!(d.k, 101);
    }
    let sch = ParamSchedule::build(1e4, 0.3, None).unwrap();
    let flags = inequality_check(&sch).unwrap();
    assert_eq!(flags.k_bound, sch.m + 2 <= sch.k && sch.k as f64 <= sch.ln_n);
}

#[test]
fn janson_bounds_on_grid() {
    for p in [0.05, 0.2, 0.5, 0.9] {
        for a in [9u64, 30, 120] {
            let j = janson_exponent_raw(3, 1, p, 0.1, a, a);
            assert!(j.improved.unwrap() >= j.general);
        }
    }
    let j = janson_exponent_raw(4, 2, 1.0, 0.1, 16, 16);
    assert!(close(j.general, 0.1 / (4.0 * 16.0), 1e-12));
    assert!(j.improved.is_none());
}

/// Ordered pairs of candidates sharing at least two vertices, each weighted
/// by p to the number of distinct pairs spanned, over the concrete family
/// {(k−m)-subsets of A} × B_1 × … × B_m.
fn brute_pair_sum(k: usize, m: usize, a: usize, b: usize, p: f64) -> f64 {
    let km = k - m;
    let mut fam: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..1 << a {
        if mask.count_ones() as usize != km {
            continue;
        }
        let base: Vec<usize> = (0..a).filter(|&v| mask >> v & 1 == 1).collect();
        for pick in 0..b.pow(m as u32) {
            let mut c = base.clone();
            let mut code = pick;
            for j in 0..m {
                c.push(a + j * b + code % b);
                code /= b;
            }
            fam.push(c);
        }
    }
    let pairs = |r: usize| (r * r.saturating_sub(1) / 2) as i32;
    let mut total = 0.0;
    for x in &fam {
        for y in &fam {
            let r = x.iter().filter(|v| y.contains(v)).count();
            if r >= 2 {
                total += p.powi(2 * pairs(k) - pairs(r));
            }
        }
    }
    total
}

#[test]
fn janson_assembly_dominates_brute_pair_sum() {
    for (k, m, a, b) in [(3, 1, 5, 2), (4, 1, 6, 3), (4, 2, 5, 2), (3, 0, 6, 1)] {
        for p in [0.1, 0.5, 1.0] {
            let fam = cliquecolor::lower::binomial_f64(a as u64, (k - m) as u64) * (b as f64).powi(m as i32);
            let asm = janson_delta_assembly(k as u64, m as u64, a as u64, b as u64, p, fam);
            let brute = brute_pair_sum(k, m, a, b, p);
            assert!(asm >= brute * (1.0 - 1e-12), "k {k} m {m} a {a} b {b} p {p}: {asm} < {brute}");
            if b == 1 {
                assert!(close(asm, brute, 1e-12));
            }
        }
    }
}

#[test]
fn predictions_at_reference_points() {
    let b = predicted_bounds(1e4, 0.2).unwrap();
    assert!(close(b[0].value, 1e4f64.ln() / 0.2, 1e-12));
    assert!(close(b[1].value, 0.5 * 1e4f64.ln() / 0.2, 1e-12));
    assert!((46.05..46.06).contains(&b[0].value));
    let n = 1e10f64;
    assert!(predicted_bounds(n, n.powf(-0.4)).unwrap()[2].value.abs() < 1e-9);
    // (ln n/p) / log_{1/(1−p)} n = −ln(1−p)/p, independent of n.
    for p in [0.7, 0.8, 0.95] {
        let ratio = log_base_ratio(p);
        assert!(ratio > 1.0);
        let direct = (1e6f64.ln() / p) / (1e6f64.ln() / -(1.0 - p).ln());
        assert!(close(ratio, direct, 1e-12));
    }
}

#[test]
fn phi_shape_on_grid() {
    let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| phi(x).unwrap()).collect();
    assert_eq!(ys[0], 0.0);
    for w in ys.windows(3) {
        assert!(w[1] > w[0] && w[2] - w[1] >= w[1] - w[0] - 1e-12);
    }
}
