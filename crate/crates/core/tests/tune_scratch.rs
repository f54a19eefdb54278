// Scratch calibration runs (deleted before delivery).

use oger_core::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn low_rank(rng: &mut ChaCha8Rng, n: usize, m: usize, rank: usize) -> Matrix {
    let l = Matrix::from_fn(n, rank, |_, _| rng.random_range(-1.0..1.0));
    let r = Matrix::from_fn(m, rank, |_, _| rng.random_range(-1.0..1.0));
    let prod = l.matmul(&r.transpose());
    let maxabs = prod.data().iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    prod.scale(1.0 / maxabs)
}

#[test]
#[ignore]
fn tune_monotone_lagrangian() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let y = low_rank(&mut rng, 32, 32, 3);
    let mask = make_mask(&MaskSpec::Random { missing_fraction: 0.4, seed: 1 }, 32, 32).unwrap();
    for (alpha, lam) in [(1.0, 0.1), (0.5, 0.05), (2.0, 0.3), (1.0, 0.01)] {
        for rho in [0.6, 5.0] {
            let mut cfg = SolverConfig::new(alpha, lam, RankSurrogate::Nuclear);
            cfg.rho = rho;
            let (_, traces) = solve(&y, &mask, &cfg, None).unwrap();
            let mut violations = 0usize;
            let mut worst = 0.0_f64;
            for w in traces.windows(2) {
                if w[0].iteration >= 2 && w[1].lagrangian > w[0].lagrangian + 1e-6 {
                    violations += 1;
                    worst = worst.max(w[1].lagrangian - w[0].lagrangian);
                }
            }
            let last = traces.last().unwrap();
            let tail = &traces[traces.len().saturating_sub(10)..];
            let smoothed: Vec<f64> = (0..8)
                .map(|k| {
                    tail.iter().map(|t| t.diff_norms.named()[k].1).sum::<f64>()
                        / tail.len() as f64
                })
                .collect();
            let max_smoothed = smoothed.iter().cloned().fold(0.0_f64, f64::max);
            println!(
                "alpha={alpha} lam={lam} rho={rho}: iters={} re={:.2e} violations={violations} worst={worst:.2e} max_smoothed_diff={max_smoothed:.2e}",
                last.iteration, last.re
            );
        }
    }
}

#[test]
#[ignore]
fn tune_exact_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let y = low_rank(&mut rng, 64, 64, 2);
    let mask = make_mask(&MaskSpec::Random { missing_fraction: 0.4, seed: 2 }, 64, 64).unwrap();
    for alpha in [0.01, 0.05, 0.2, 1.0] {
        for lam in [0.02, 0.1, 0.5] {
            for tol in [1e-7] {
                let mut cfg = SolverConfig::new(alpha, lam, RankSurrogate::Nuclear);
                cfg.tol = tol;
                cfg.max_iterations = 2000;
                let t = Instant::now();
                let (recovered, traces) = solve(&y, &mask, &cfg, None).unwrap();
                let rel = recovered.sub(&y).frobenius_norm() / y.frobenius_norm();
                println!(
                    "alpha={alpha} lam={lam} tol={tol:.0e}: iters={} rel={rel:.3e} time={:?}",
                    traces.len(),
                    t.elapsed()
                );
            }
        }
    }
}

fn synth_natural_image(rows: usize, cols: usize) -> Matrix {
    use std::f64::consts::PI;
    Matrix::from_fn(rows, cols, |i, j| {
        let u = i as f64 / rows as f64;
        let v = j as f64 / cols as f64;
        let mut val = 0.45
            + 0.25 * (PI * u).sin() * (PI * v).sin()
            + 0.12 * (3.0 * PI * u).cos()
            + 0.08 * (2.0 * PI * v).cos();
        if u > 0.15 && u < 0.45 && v > 0.55 && v < 0.9 {
            val += 0.25;
        }
        let (du, dv) = (u - 0.65, v - 0.3);
        if du * du + dv * dv < 0.02 {
            val -= 0.3;
        }
        if (u + v - 0.9).abs() < 0.03 {
            val += 0.2;
        }
        val += 0.02 * ((17.0 * u).sin() * (23.0 * v).sin());
        val.clamp(0.0, 1.0)
    })
}

#[test]
#[ignore]
fn tune_directional_reproduction() {
    let y = synth_natural_image(256, 256);
    let mask = make_mask(&MaskSpec::Random { missing_fraction: 0.2, seed: 3 }, 256, 256).unwrap();
    for (alpha, lam, p, tau) in [
        (1.0, 0.1, 0.5, 1.0),
        (1.0, 0.05, 0.5, 2.0),
        (0.5, 0.1, 0.7, 1.0),
    ] {
        let scp = RankSurrogate::SchattenCappedP { p, tau };
        let t = Instant::now();
        let cfg = SolverConfig::new(alpha, lam, scp.clone());
        let (rec, traces) = solve(&y, &mask, &cfg, Some(&y)).unwrap();
        let with_oger = psnr(&y, &rec).unwrap();
        let t1 = t.elapsed();

        let t = Instant::now();
        let cfg0 = SolverConfig::new(alpha, 0.0, scp);
        let (rec0, traces0) = solve(&y, &mask, &cfg0, Some(&y)).unwrap();
        let baseline = psnr(&y, &rec0).unwrap();
        println!(
            "alpha={alpha} lam={lam} p={p} tau={tau}: OGER psnr={with_oger:.3} ({} iters, {t1:?}) vs lam=0 psnr={baseline:.3} ({} iters, {:?})",
            traces.len(),
            traces0.len(),
            t.elapsed()
        );
    }
}

#[test]
#[ignore]
fn tune_diff_decay_profile() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let y = low_rank(&mut rng, 32, 32, 3);
    let mask = make_mask(&MaskSpec::Random { missing_fraction: 0.4, seed: 1 }, 32, 32).unwrap();
    for rho in [0.6, 5.0] {
        let mut cfg = SolverConfig::new(1.0, 0.1, RankSurrogate::Nuclear);
        cfg.rho = rho;
        cfg.tol = 1e-30;
        cfg.max_iterations = 500;
        let (_, traces) = solve(&y, &mask, &cfg, None).unwrap();
        for probe in [20, 50, 100, 200, 300, 400, 500] {
            if probe > traces.len() { break; }
            let tail = &traces[probe - 10..probe];
            let max_smoothed = (0..8)
                .map(|k| tail.iter().map(|t| t.diff_norms.named()[k].1).sum::<f64>() / 10.0)
                .fold(0.0_f64, f64::max);
            let re = traces[probe - 1].re;
            println!("rho={rho} iter={probe}: re={re:.2e} max_smoothed_diff={max_smoothed:.2e}");
        }
    }
}

#[test]
#[ignore]
fn check_mm_k1_against_exact_soft_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let params = OgerParams::new(1).unwrap();
    let d = Matrix::from_fn(6, 6, |_, _| rng.random_range(-2.0..2.0));
    let (lam, rho) = (0.7, 1.3);
    let cfg = MmProxConfig::new(60, lam, rho);
    let out = mm_prox(&d, &d, &params, &cfg);
    let exact = d.map(|v| {
        let t = lam / rho;
        if v > t { v - t } else if v < -t { v + t } else { 0.0 }
    });
    let gap = out.sub(&exact).frobenius_norm();
    let j = |m: &Matrix| lam * oger_value(m, &params) + 0.5 * rho * m.sub(&d).frobenius_norm_sq();
    println!("K=1 MM vs exact soft threshold: gap={gap:.3e} J(mm)={} J(exact)={}", j(&out), j(&exact));
}
