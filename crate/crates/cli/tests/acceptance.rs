//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use anharm2d_core::exact::{excited_residual, ground_residual};
use anharm2d_core::{
    assemble, build_grid, convergence_table, excited_solve, ground_peak_radius, lowest_eigenvalues,
    node_positions, richardson_extrapolate, squared_norm, AngularChannel, Error,
    DEFAULT_TAIL_THRESHOLD,
};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn anharm2d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anharm2d"))
        .args(args)
        .env_remove("ANHARM_TAIL_THRESHOLD")
        .output()
        .expect("failed to launch anharm2d")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn json_stdout(out: &Output) -> Result<Value, String> {
    check(out.status.success(), || {
        format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn csv_stdout(out: &Output) -> Result<Vec<(f64, f64)>, String> {
    check(out.status.success(), || {
        format!("exit {:?}", out.status.code())
    })?;
    let text = String::from_utf8(out.stdout.clone()).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    check(lines.next() == Some("r,R"), || "missing r,R header".into())?;
    lines
        .map(|l| {
            let (r, v) = l.split_once(',').ok_or("row without comma")?;
            Ok((
                r.parse().map_err(|e| format!("{e}: {r}"))?,
                v.parse().map_err(|e| format!("{e}: {v}"))?,
            ))
        })
        .collect()
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// `K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt` by the trapezoid rule in `t`.
fn bessel_k(nu: f64, x: f64) -> f64 {
    let step = 1e-3f64;
    let mut sum = 0.5 * (-x).exp();
    let mut t = step;
    loop {
        let term = (-x * t.cosh()).exp() * (nu * t).cosh();
        if term < 1e-300 {
            break;
        }
        sum += term;
        t += step;
    }
    sum * step
}

/// K₁(2√2)/√2 from an arbitrary-precision evaluation.
const UNIT_CASE_GROUND_NORM: f64 = 0.034_916_868_503_823_285_714_379_903_121_6;

fn criterion_1() -> Outcome {
    let doc = json_stdout(&anharm2d(&["solve", "--a", "1.0", "--m", "0"]))?;
    let expected = [
        ("c", 4.0),
        ("b", -12.0),
        ("kappa", -1.5),
        ("kappa1", 0.5),
        ("a2", 1.0),
        ("a3", -2.0),
        ("E0", -2.0),
        ("E1", 6.0),
    ];
    for (key, want) in expected {
        let got = doc[key].as_f64().ok_or(format!("{key} missing"))?;
        check(got == want, || {
            format!("{key} = {got}, expected exactly {want}")
        })?;
    }

    let calls = 10_000;
    let mut worst = Duration::ZERO;
    for _ in 0..calls {
        let t = Instant::now();
        let sol = excited_solve(std::hint::black_box(1.0), AngularChannel(0))
            .map_err(|e| e.to_string())?;
        std::hint::black_box(sol);
        worst = worst.max(t.elapsed());
    }
    check(worst < Duration::from_millis(1), || {
        format!("solve took {worst:?}")
    })?;
    Ok(format!(
        "all eight values exact; slowest of {calls} solves {worst:?}"
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let sol = excited_solve(1.0, AngularChannel(0)).map_err(|e| e.to_string())?;
    let table = convergence_table(
        &sol.params,
        sol.m,
        &[500, 1000, 2000, 4000],
        DEFAULT_TAIL_THRESHOLD,
    )
    .map_err(|e| e.to_string())?;
    let exact = [-2.0, 6.0];
    let (coarse, fine) = (&table.points[2], &table.points[3]);
    check(fine.grid.n == 4000 && coarse.grid.n == 2000, || {
        "unexpected resolutions".into()
    })?;

    let mut detail = Vec::new();
    for (level, want) in exact.into_iter().enumerate() {
        let raw = (fine.spectrum.eigenvalues[level] - want).abs();
        check(raw <= 1e-3, || {
            format!("|E{level} error| = {raw:e} > 1e-3 at n = 4000")
        })?;
        let extrapolated = richardson_extrapolate(
            coarse.h(),
            coarse.spectrum.eigenvalues[level],
            fine.h(),
            fine.spectrum.eigenvalues[level],
        );
        let rich = (extrapolated - want).abs();
        check(rich <= 1e-4, || {
            format!("Richardson |E{level} error| = {rich:e} > 1e-4")
        })?;
        detail.push(format!("E{level}: raw {raw:.2e}, Richardson {rich:.2e}"));
    }
    let q = table.order(0);
    check((1.8..=2.2).contains(&q), || {
        format!("order {q} outside [1.8, 2.2]")
    })?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{}; order {q:.4}; {elapsed:?}", detail.join("; ")))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut configs = 0;
    for a in [0.25, 1.0, 4.0, 10.0] {
        for m in [0, 1] {
            let sol = excited_solve(a, AngularChannel(m)).map_err(|e| e.to_string())?;
            let p = sol.params;
            for r in log_spaced(0.1, 10.0, 100) {
                let g = ground_residual(&sol.ground, &p, sol.m, r).map_err(|e| e.to_string())?;
                let e = excited_residual(&sol.excited, &p, sol.m, r).map_err(|e| e.to_string())?;
                let rg = g.abs() / sol.ground.residual_scale(&p, r);
                let re = e.abs() / sol.excited.residual_scale(&p, r);
                check(rg <= 1e-12 && re <= 1e-12, || {
                    format!("a = {a}, m = {m}, r = {r}: relative residuals {rg:e}, {re:e}")
                })?;
                worst = worst.max(rg).max(re);
            }
            configs += 1;
        }
    }
    Ok(format!(
        "{configs} configurations x 100 radii x 2 states; worst relative residual {worst:.2e}"
    ))
}

fn criterion_4() -> Outcome {
    let doc = json_stdout(&anharm2d(&[
        "verify", "--a", "1", "--m", "0", "--grid-n", "4000",
    ]))?;
    let overlap = doc["overlap_01"].as_f64().ok_or("overlap_01 missing")?;
    check(overlap.abs() <= 1e-8, || format!("overlap {overlap:e}"))?;
    let nodes = (
        doc["node_counts"][0].as_u64(),
        doc["node_counts"][1].as_u64(),
    );
    check(nodes == (Some(0), Some(1)), || {
        format!("node counts {nodes:?}")
    })?;

    let sol = excited_solve(1.0, AngularChannel(0)).map_err(|e| e.to_string())?;
    let grid = build_grid(&sol.params, sol.m, 4000).map_err(|e| e.to_string())?;
    let spec =
        lowest_eigenvalues(&assemble(&sol.params, sol.m, &grid), 2).map_err(|e| e.to_string())?;
    let positions = node_positions(&spec.eigenvectors[1], &grid);
    check(positions.len() == 1, || {
        format!("excited nodes at {positions:?}")
    })?;
    let target = 2f64.powf(0.25);
    let miss = (positions[0] - target).abs();
    check(miss <= grid.h, || {
        format!("node at {} is {miss:e} from {target}", positions[0])
    })?;
    Ok(format!(
        "overlap {overlap:.2e}; nodes (0, 1); excited node at {:.6} (|Δ| = {miss:.1e} ≤ h = {:.1e})",
        positions[0], grid.h
    ))
}

fn criterion_5() -> Outcome {
    // the closed form (√c/√a)^{ν/2} K_ν(2 (ac)^{1/4}) with ν = κ + 1/2 = −1, a = 1, c = 4
    let closed = 2f64.powf(-0.5) * bessel_k(1.0, 2.0 * 4f64.powf(0.25));
    check(
        (closed - UNIT_CASE_GROUND_NORM).abs() <= 1e-12 * UNIT_CASE_GROUND_NORM,
        || format!("trapezoid Bessel-K oracle {closed} disagrees with {UNIT_CASE_GROUND_NORM}"),
    )?;
    let sol = excited_solve(1.0, AngularChannel(0)).map_err(|e| e.to_string())?;
    let grid = build_grid(&sol.params, sol.m, 4000).map_err(|e| e.to_string())?;
    let got = squared_norm(&sol.ground, &grid).map_err(|e| e.to_string())?;
    let rel = (got - closed).abs() / closed;
    check(rel <= 1e-8, || {
        format!("quadrature {got} vs closed form {closed}: rel {rel:e}")
    })?;
    Ok(format!(
        "quadrature {got:.12} vs K1(2*sqrt2)/sqrt2 = {closed:.12}, rel {rel:.1e} \
         (K1(4)/2 = {:.9} corresponds to exponent c r^-2 instead of sqrt(c) r^-2)",
        bessel_k(1.0, 4.0) / 2.0
    ))
}

fn criterion_6() -> Outcome {
    let sol = excited_solve(1.0, AngularChannel(0)).map_err(|e| e.to_string())?;

    let ground = csv_stdout(&anharm2d(&[
        "eval",
        "--state",
        "ground",
        "--a",
        "1",
        "--m",
        "0",
        "--samples",
        "1000",
    ]))?;
    check(ground.len() == 1000, || {
        format!("{} ground rows", ground.len())
    })?;
    check(ground.windows(2).all(|w| w[0].0 < w[1].0), || {
        "r not increasing".into()
    })?;
    check(ground.iter().all(|(_, v)| v.is_finite()), || {
        "non-finite R".into()
    })?;
    let maxima: Vec<usize> = (1..ground.len() - 1)
        .filter(|&i| ground[i].1 > ground[i - 1].1 && ground[i].1 >= ground[i + 1].1)
        .collect();
    check(maxima.len() == 1, || {
        format!("{} interior maxima", maxima.len())
    })?;
    let spacing = ground[1].0 - ground[0].0;
    let peak = ground_peak_radius(&sol.ground).map_err(|e| e.to_string())?;
    check((peak - 0.9224).abs() < 5e-5, || {
        format!("analytic peak {peak}")
    })?;
    let r_peak = ground[maxima[0]].0;
    check((r_peak - peak).abs() <= spacing, || {
        format!("CSV peak at {r_peak}, analytic {peak}")
    })?;

    let excited = csv_stdout(&anharm2d(&[
        "eval", "--state", "excited", "--a", "1", "--m", "0",
    ]))?;
    check(excited.iter().all(|(_, v)| v.is_finite()), || {
        "non-finite R".into()
    })?;
    let crossings: Vec<usize> = (1..excited.len())
        .filter(|&i| excited[i - 1].1 != 0.0 && excited[i].1 != 0.0)
        .filter(|&i| (excited[i - 1].1 < 0.0) != (excited[i].1 < 0.0))
        .collect();
    check(crossings.len() == 1, || {
        format!("{} sign changes", crossings.len())
    })?;
    let (lo, hi) = (excited[crossings[0] - 1].0, excited[crossings[0]].0);
    let node = 2f64.powf(0.25);
    check(lo <= node && node <= hi, || {
        format!("sign change in [{lo}, {hi}], node {node}")
    })?;
    Ok(format!(
        "ground: one maximum at r = {r_peak:.4} (analytic {peak:.6}); excited: one sign change in [{lo:.4}, {hi:.4}]"
    ))
}

fn criterion_7() -> Outcome {
    match excited_solve(1.0, AngularChannel(2)) {
        Err(Error::Unsolvable { m: 2 }) => {}
        other => return Err(format!("excited_solve(1, 2) returned {other:?}")),
    }
    let out = anharm2d(&["solve", "--a", "1.0", "--m", "2"]);
    check(out.status.code() == Some(3), || {
        format!("solve m = 2 exit {:?}", out.status.code())
    })?;
    let msg = String::from_utf8_lossy(&out.stderr);
    check(msg.contains("m = 2"), || {
        format!("unhelpful message: {msg}")
    })?;

    let rejected = [
        vec![
            "eval", "--state", "ground", "--a", "1", "--c", "4", "--b", "0", "--m", "0",
        ],
        vec![
            "eval", "--state", "excited", "--a", "1", "--c", "4", "--b", "-11.9", "--m", "0",
        ],
        vec![
            "eval", "--state", "excited", "--a", "1", "--c", "4", "--m", "1",
        ],
        vec![
            "normalize",
            "--state",
            "ground",
            "--a",
            "2",
            "--c",
            "4",
            "--b",
            "-12",
        ],
    ];
    for args in &rejected {
        let code = anharm2d(args).status.code();
        check(code == Some(3), || {
            format!("{args:?} exited {code:?}, expected 3")
        })?;
    }
    Ok(format!(
        "m = 2 rejected (exit 3); {} constraint-violating inputs exit 3",
        rejected.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 parameter reproduction (a = 1, m = 0)", criterion_1),
        ("2 spectral oracle, Richardson, order", criterion_2),
        ("3 analytic residual suite", criterion_3),
        ("4 orthogonality and nodes", criterion_4),
        ("5 normalization vs Bessel-K closed form", criterion_5),
        ("6 curve shapes from emitted CSV", criterion_6),
        ("7 negative controls", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
