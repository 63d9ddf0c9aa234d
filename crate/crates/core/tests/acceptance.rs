//! Acceptance criteria. Each test prints one `criterion N ... PASS|FAIL`
//! line; run with `--nocapture` to see them all.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use kuramoto_core::experiments::{
    run_fig1, run_fig2, run_fig3, run_fig4, Fig1Options, Fig2Options, Fig4Options,
    RandomGraphVariant, SweepOptions,
};
use kuramoto_core::*;
use num_complex::Complex64;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {id} [{name}]: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} [{name}] failed: {detail}");
}

fn max_wrapped(a: &Trajectory, b: &Trajectory) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .flat_map(|(x, y)| {
            x.as_slice()
                .iter()
                .zip(y.as_slice())
                .map(|(p, q)| wrapped_distance(*p, *q))
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_k3_pi_over_16_bound() {
    let bound = PI / 16.0;
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    for seed in 0..100u64 {
        let run = run_fig1(&Fig1Options {
            seed,
            t_end: 10.0,
            ..Fig1Options::default()
        })
        .unwrap();
        let dev = run.report.max_wrapped_deviation;
        worst = worst.max(dev);
        if !(dev < bound) {
            failing.push(seed);
        }
    }
    report(
        1,
        "K3 numerical vs analytic within pi/16 over 10 s, 100 seeds",
        failing.is_empty(),
        format!(
            "{} of 100 seeds exceed {bound:.4}; worst deviation {worst:.4} rad",
            failing.len()
        ),
    );
}

#[test]
fn criterion_2_spectral_oracle_equivalence() {
    let mut worst: f64 = 0.0;
    for n in 3..=64 {
        for k in 1..=n / 2 {
            let cdt = cdt_eigenvalues(&ring_generating_vector(n, k).unwrap()).unwrap();
            let mut cdt: Vec<f64> = cdt.iter().map(|l| l.re).collect();
            cdt.sort_by(|a, b| b.total_cmp(a));
            let num = eigendecompose_symmetric(&gen_ring(n, k).unwrap()).unwrap();
            for (a, b) in cdt.iter().zip(&num.eigenvalues) {
                worst = worst.max((a - b.re).abs());
            }
        }
    }
    let mut worst_kn: f64 = 0.0;
    for n in 2..=64 {
        let es = eigendecompose_symmetric(&gen_complete(n).unwrap()).unwrap();
        worst_kn = worst_kn.max((es.eigenvalues[0].re - (n as f64 - 1.0)).abs());
        for l in &es.eigenvalues[1..] {
            worst_kn = worst_kn.max((l.re + 1.0).abs());
        }
    }
    report(
        2,
        "CDT eigenvalues == Jacobi eigenvalues on rings; K_n spectrum",
        worst <= 1e-9 && worst_kn <= 1e-9,
        format!("ring max gap {worst:e}, K_n max error {worst_kn:e}"),
    );
}

fn real_matvec(n: usize, a: &[f64], x: &[Complex64]) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| a[i * n + j] != 0.0)
                .fold(Complex64::new(0.0, 0.0), |acc, j| acc + a[i * n + j] * x[j])
        })
        .collect()
}

/// Σ_{k=0}^{4} (sA)^k x / k!, by repeated matrix-vector products.
fn taylor4(n: usize, a: &[f64], s: f64, x0: &[Complex64]) -> Vec<Complex64> {
    let mut term = x0.to_vec();
    let mut sum = x0.to_vec();
    for k in 1..=4 {
        term = real_matvec(n, a, &term)
            .into_iter()
            .map(|v| v * s / k as f64)
            .collect();
        for (acc, t) in sum.iter_mut().zip(&term) {
            *acc += t;
        }
    }
    sum
}

#[test]
fn criterion_3_propagator_correctness() {
    let scales = [0.1, 0.05, 0.01];
    let mut per_scale = [0.0f64; 3];
    let mut worst_semigroup: f64 = 0.0;
    for i in 0..20u64 {
        let n = 4 + (i as usize * 7) % 29;
        let p = 0.15 + 0.04 * (i % 10) as f64;
        let graph = gen_erdos_renyi(n, p, 1000 + i).unwrap();
        let a = graph.to_f64();
        let es = eigendecompose_symmetric(&graph).unwrap();
        let x0 = initial_phases(n, 2000 + i).to_complex();

        // ‖A‖ as the induced ∞-norm (max row sum), an upper bound on |λ|.
        let norm = (0..n).map(|r| graph.degree(r) as f64).fold(1.0, f64::max);
        let gamma = 0.7;
        for (slot, scale) in per_scale.iter_mut().zip(scales) {
            let t = scale / (gamma * norm);
            let exact = apply_propagator(&es, gamma, t, &x0, OverflowGuard::Off).unwrap();
            let oracle = taylor4(n, &a, gamma * t, &x0);
            for (e, o) in exact.iter().zip(&oracle) {
                *slot = slot.max((e - o).norm());
            }
        }

        let (t1, t2) = (0.3, 0.45);
        let direct = apply_propagator(&es, gamma, t1 + t2, &x0, OverflowGuard::Off).unwrap();
        let mid = apply_propagator(&es, gamma, t1, &x0, OverflowGuard::Off).unwrap();
        let composed = apply_propagator(&es, gamma, t2, &mid, OverflowGuard::Off).unwrap();
        let scale = direct.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (d, c) in direct.iter().zip(&composed) {
            worst_semigroup = worst_semigroup.max((d - c).norm() / scale);
        }
    }
    report(
        3,
        "propagator: 4th-order Taylor oracle (gamma t |A| <= 0.1) and semigroup, 20 random graphs",
        per_scale.iter().all(|e| *e <= 1e-8) && worst_semigroup <= 1e-8,
        format!(
            "taylor max error at gamma t |A| = {scales:?}: {:?}; semigroup max relative error {worst_semigroup:e}",
            per_scale.map(|e| format!("{e:.2e}"))
        ),
    );
}

fn fig1_numerical(seed: u64, dt: f64, base: f64, integrator: Integrator) -> Trajectory {
    run_fig1(&Fig1Options {
        seed,
        dt,
        integrator,
        record_every: (base / dt).round() as usize,
        ..Fig1Options::default()
    })
    .unwrap()
    .numerical
}

fn halving_ratio(seed: u64, base: f64, integrator: Integrator) -> f64 {
    let a = fig1_numerical(seed, base, base, integrator);
    let b = fig1_numerical(seed, base / 2.0, base, integrator);
    let c = fig1_numerical(seed, base / 4.0, base, integrator);
    max_wrapped(&a, &b) / max_wrapped(&b, &c)
}

#[test]
fn criterion_4_integrator_convergence_orders() {
    let mut euler = Vec::new();
    let mut rk4 = Vec::new();
    for seed in 0..5 {
        euler.push(halving_ratio(seed, 1e-3, Integrator::Euler));
        // At 1 ms RK4 already sits at the rounding floor; 40 ms keeps the
        // discrepancies well above it.
        rk4.push(halving_ratio(seed, 0.04, Integrator::Rk4));
    }
    let ok_e = euler.iter().all(|r| (1.7..=2.3).contains(r));
    let ok_r = rk4.iter().all(|r| (12.0..=20.0).contains(r));
    report(
        4,
        "dt-halving ratios: Euler in [1.7, 2.3], RK4 in [12, 20]",
        ok_e && ok_r,
        format!("euler {euler:.3?}, rk4 {rk4:.3?}"),
    );
}

/// Pool-adjacent-violators fit of a non-decreasing sequence.
fn isotonic(y: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::new();
    for &v in y {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a <= b {
                break;
            }
            blocks.pop();
            let last = blocks.last_mut().unwrap();
            *last = ((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(v, c)| std::iter::repeat(v).take(c))
        .collect()
}

#[test]
fn criterion_5_synchronization_transition() {
    let opts = SweepOptions::default();
    assert_eq!((opts.n, opts.points, opts.realizations), (200, 100, 10));
    let res = run_fig3(&opts).unwrap();
    let low = res.mean_abs_r_numerical[0];
    let high = *res.mean_abs_r_numerical.last().unwrap();
    let gap = res.mean_curve_gap();
    let fit = isotonic(&res.mean_abs_r_numerical);
    let residual = res
        .mean_abs_r_numerical
        .iter()
        .zip(&fit)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let bounded = res
        .mean_abs_r_numerical
        .iter()
        .chain(&res.mean_abs_r_analytic)
        .all(|v| (0.0..=1.0).contains(v));
    report(
        5,
        "K200 sweep: mean |r| < 0.3 at kappa=1e-3, > 0.9 at kappa=10, curve gap < 0.1",
        low < 0.3 && high > 0.9 && gap < 0.1 && residual <= 0.1 && bounded,
        format!(
            "kappa[0]={} r={low:.4}, kappa[99]={} r={high:.4}, mean gap {gap:.4}, isotonic residual {residual:.4}",
            res.kappas[0],
            res.kappas[99]
        ),
    );
}

#[test]
fn criterion_6_random_graph_pipeline() {
    let mut er_sync = 0;
    let mut er_rs = Vec::new();
    let mut ws_ok = 0;
    for seed in 0..20u64 {
        let er = run_fig4(&Fig4Options {
            seed,
            ..Fig4Options::new(RandomGraphVariant::Er)
        })
        .unwrap();
        let r = *er.report.order_param_numerical.last().unwrap();
        er_rs.push(r);
        if r > 0.9 {
            er_sync += 1;
        }
        let ws = run_fig4(&Fig4Options {
            seed,
            ..Fig4Options::new(RandomGraphVariant::Ws)
        })
        .unwrap();
        let series = &ws.report.order_param_numerical;
        if series.last().unwrap() > &series[0] {
            ws_ok += 1;
        }
    }
    let min_er = er_rs.iter().copied().fold(1.0, f64::min);
    report(
        6,
        "ER |r(1s)| > 0.9 for >= 18/20 seeds; WS final |r| > initial |r| for every seed",
        er_sync >= 18 && ws_ok == 20,
        format!("ER {er_sync}/20 synchronized (min {min_er:.4}), WS {ws_ok}/20 increased"),
    );
}

fn run_cli(args: &[&str], out: &Path) -> i32 {
    let mut full = vec!["kuramoto".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.push("--out".into());
    full.push(out.display().to_string());
    kuramoto_core::cli::run(full)
}

fn artifact_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.to_string_lossy().ends_with(".manifest.json"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn criterion_7_property_suites() {
    let mut failures: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    // Graph invariants.
    for n in [2usize, 3, 7, 20, 41] {
        for k in 1..=n / 2 {
            check(gen_ring(n, k).unwrap().is_simple_undirected(), "ring simple");
            if k < n / 2 {
                for q in [0.0, 0.3, 1.0] {
                    let ws = gen_watts_strogatz(n, k, q, n as u64 + k as u64).unwrap();
                    check(ws.is_simple_undirected(), "ws simple");
                    check(ws.edge_count() == n * k, "ws edge count");
                }
            }
        }
        for p in [0.0, 0.2, 0.9, 1.0] {
            check(gen_erdos_renyi(n, p, 3).unwrap().is_simple_undirected(), "er simple");
        }
    }

    // Phase wrapping.
    for i in -2000..=2000 {
        let x = i as f64 * 0.0137 * PI;
        let w = wrap_phase(x).unwrap();
        check(w > -PI && w <= PI, "wrap range");
        check(wrap_phase(w).unwrap() == w, "wrap idempotent");
        check(((x - w) / (2.0 * PI)).fract().abs().min(1.0 - ((x - w) / (2.0 * PI)).fract().abs()) < 1e-9, "wrap congruent");
    }

    // Order parameter identities.
    check((order_parameter(&[1.3; 9]).norm() - 1.0).abs() < 1e-15, "|r| = 1 synchronized");
    let splay: Vec<f64> = (0..9).map(|j| wrap_phase(2.0 * PI * j as f64 / 9.0).unwrap()).collect();
    check(order_parameter(&splay).norm() <= 1e-12, "r = 0 splay");

    // Phase-shift equivariance, numerical and analytic (ω = 0).
    let graph = Arc::new(gen_watts_strogatz(30, 3, 0.2, 5).unwrap());
    let es = eigendecompose_symmetric(&graph).unwrap();
    let mut cfg = SimulationConfig::new(graph.clone(), 0.4);
    cfg.t_end = 0.5;
    let th0 = initial_phases(30, 9);
    let shift = 1.234;
    let shifted = PhaseState::new(th0.as_slice().iter().map(|t| t + shift).collect()).unwrap();
    for (label, a, b) in [
        (
            "numerical equivariance",
            integrate_numerical(&cfg, &th0).unwrap(),
            integrate_numerical(&cfg, &shifted).unwrap(),
        ),
        (
            "analytic equivariance",
            analytic_trajectory(&es, &cfg, &th0).unwrap(),
            analytic_trajectory(&es, &cfg, &shifted).unwrap(),
        ),
    ] {
        let worst = a
            .states
            .iter()
            .zip(&b.states)
            .flat_map(|(x, y)| {
                x.as_slice()
                    .iter()
                    .zip(y.as_slice())
                    .map(|(p, q)| wrapped_distance(p + shift, *q))
            })
            .fold(0.0, f64::max);
        check(worst < 1e-9, label);
    }

    // Bit-reproducibility of CLI artifacts.
    let tmp = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 4] = [
        &["graph", "ws", "--n", "40", "--k", "3", "--q", "0.2", "--seed", "4"],
        &["simulate", "--graph", "er", "--n", "30", "--p", "0.3", "--kappa", "0.5", "--method", "analytic", "--raster", "--seed", "2"],
        &["spectrum", "--graph", "ring", "--n", "16", "--k", "3", "--mode", "both"],
        &["figure", "1", "--seed", "3"],
    ];
    for (i, cmd) in commands.iter().enumerate() {
        let a = tmp.path().join(format!("a{i}"));
        let b = tmp.path().join(format!("b{i}"));
        check(run_cli(cmd, &a) == 0 && run_cli(cmd, &b) == 0, "cli exit 0");
        check(artifact_bytes(&a) == artifact_bytes(&b), "cli bit-reproducible");
    }

    report(
        7,
        "graph invariants, wrap, order parameter, equivariance, reproducibility",
        failures.is_empty(),
        if failures.is_empty() {
            "all properties hold".to_string()
        } else {
            format!("violated: {failures:?}")
        },
    );
}

#[test]
fn criterion_8_fig2_order_parameter_gap() {
    let mut gaps = Vec::new();
    for seed in 0..20u64 {
        let run = run_fig2(&Fig2Options {
            seed,
            ..Fig2Options::default()
        })
        .unwrap();
        gaps.push(run.report.mean_abs_order_gap);
    }
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    report(
        8,
        "K200 kappa=6/N mean |r| gap numerical vs analytic < 0.1 (seeds 0..20)",
        worst < 0.1,
        format!("worst gap {worst:.4}"),
    );
}
