//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roaming::model::demand_residuals;
use roaming::{
    closed_form_ne, closed_form_rstar, default_init, find_rstar, fonc_residual, price_cap, solve_demand, solve_ne,
    sweep_utilities_vs_r, utilities_full, utilities_simplified, Congestion, GameParams, Mode, PricePair,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn params(delta: f64, phi: f64, r: f64) -> GameParams {
    GameParams::builder().delta(delta).phi(phi).r(r).build().unwrap()
}

fn time_limited(limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut result = body();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            result.ok = false;
        }
        result.detail = format!("{} [{:.3}s / limit {:.0}s]", result.detail, elapsed.as_secs_f64(), limit.as_secs_f64());
    } else {
        result.detail = format!("{} [{:.3}s]", result.detail, elapsed.as_secs_f64());
    }
    result
}

/// 1. Numerical NE at delta=1, phi=0.9, r=0.8.
fn closed_form_reproduction() -> Outcome {
    let p = params(1.0, 0.9, 0.8);
    let ne = solve_ne(&p, Mode::Simplified, default_init(&p)).unwrap();
    let exact = closed_form_ne(&p).unwrap();
    let vs_reported = (ne.prices.p1 - 0.38).abs().max((ne.prices.p2 - 0.38).abs());
    let vs_exact = (ne.prices.p1 - exact.p1).abs().max((ne.prices.p2 - exact.p2).abs());
    outcome(
        ne.converged && vs_reported < 5e-3 && vs_exact < 1e-6 && (exact.p1 - 0.38245).abs() < 1e-5,
        format!("p* = ({:.8}, {:.8}); |p - 0.38| = {vs_reported:.2e}; |p - closed| = {vs_exact:.2e}", ne.prices.p1, ne.prices.p2),
    )
}

/// 2. Oracle equivalence on the 75-point (delta, phi, delta r phi) grid.
fn oracle_grid() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut count = 0;
    for delta in [0.5, 1.0, 2.0] {
        for phi in [0.0, 0.25, 0.5, 0.75, 0.9] {
            for k in [0.0, 0.5, 1.0, 1.5, 1.9] {
                count += 1;
                let r = if phi > 0.0 { k / (delta * phi) } else { k / delta };
                let p = params(delta, phi, r);
                let ne = solve_ne(&p, Mode::Simplified, default_init(&p)).unwrap();
                let exact = closed_form_ne(&p).unwrap();
                let err = (ne.prices.p1 - exact.p1).abs().max((ne.prices.p2 - exact.p2).abs());
                worst = worst.max(err);
                let positive = ne.utilities.u1 > 0.0 && ne.utilities.u2 > 0.0;
                let symmetric = (ne.prices.p1 - ne.prices.p2).abs() < 1e-8;
                if !(ne.converged && err < 1e-6 && ne.soc_ok && positive && symmetric) {
                    failures.push(format!("(delta={delta}, phi={phi}, k={k}): err={err:.2e} soc={} pos={positive} sym={symmetric}", ne.soc_ok));
                }
            }
        }
    }
    outcome(
        failures.is_empty() && count == 75,
        if failures.is_empty() {
            format!("{count} points, max |numeric - closed| = {worst:.2e}, SOC and positivity hold")
        } else {
            failures.join("; ")
        },
    )
}

/// 3. Fair roaming charge.
fn fair_roaming_charge() -> Outcome {
    let base = find_rstar(&params(1.0, 0.9, 0.0), Mode::Simplified).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let phis = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
    for delta in [0.5, 1.0, 2.0] {
        for phi in phis {
            let p = params(delta, phi, 0.0);
            let found = find_rstar(&p, Mode::Simplified).unwrap();
            worst = worst.max((found.r_star - closed_form_rstar(&p)).abs());
            count += 1;
        }
    }
    outcome(
        (base.r_star - 1.30178).abs() < 1e-4 && worst < 1e-6,
        format!("r*(1, 0.9) = {:.8}; {count} cases, max |root - closed| = {worst:.2e}", base.r_star),
    )
}

fn figure_sweep() -> (Vec<f64>, Vec<[f64; 3]>) {
    let p = params(1.0, 0.9, 0.0);
    let upper = 20.0 / 9.0;
    let n = 1000;
    let grid: Vec<f64> = (0..n).map(|i| upper * i as f64 / n as f64).collect();
    let table = sweep_utilities_vs_r(&p, &grid, Mode::Simplified).unwrap();
    let rows = table
        .rows
        .iter()
        .map(|row| [row[3].unwrap(), row[4].unwrap(), row[5].unwrap()])
        .collect();
    (grid, rows)
}

/// 4. Utilities positive, nonincreasing, vanishing at the right edge.
fn figure_two_shape(grid: &[f64], rows: &[[f64; 3]]) -> Outcome {
    let positive = rows.iter().all(|r| r[0] > 0.0 && r[1] > 0.0);
    let rises = |k: usize| rows.windows(2).position(|w| w[1][k] > w[0][k]);
    let (u1_rise, u2_rise) = (rises(0), rises(1));
    let last = rows.last().unwrap();
    let r_last = *grid.last().unwrap();
    let mut detail = format!(
        "{} points; positive={positive}; at r = {r_last:.6}: U1 = {:.3e}, U2 = {:.3e}",
        rows.len(),
        last[0],
        last[1]
    );
    for (name, k, rise) in [("U1", 0, u1_rise), ("U2", 1, u2_rise)] {
        match rise {
            None => detail.push_str(&format!("; {name} nonincreasing")),
            Some(i) => {
                let peak = (0..rows.len()).max_by(|&a, &b| rows[a][k].total_cmp(&rows[b][k])).unwrap();
                detail.push_str(&format!(
                    "; {name} increases from r = {:.6} ({:.6}) up to its peak {:.6} at r = {:.6}",
                    grid[i], rows[i][k], rows[peak][k], grid[peak]
                ));
            }
        }
    }
    outcome(positive && u1_rise.is_none() && u2_rise.is_none() && last[0] < 1e-6 && last[1] < 1e-6, detail)
}

/// 5. Gap negative below r*, positive above.
fn figure_three_shape(grid: &[f64], rows: &[[f64; 3]]) -> Outcome {
    let rstar = closed_form_rstar(&params(1.0, 0.9, 0.0));
    let mut bad = Vec::new();
    for (&r, row) in grid.iter().zip(rows) {
        let gap = row[2];
        if (r < rstar && gap >= 0.0) || (r > rstar && gap <= 0.0) {
            bad.push(format!("r={r:.5} gap={gap:.3e}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("sign(gap) = sign(r - {rstar:.6}) on all {} points", grid.len()) } else { bad.join("; ") })
}

/// 6. No boundary equilibria.
fn boundary_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    let mut min_slope = f64::INFINITY;
    for _ in 0..200 {
        let delta = rng.gen_range(0.5..2.0);
        let phi: f64 = rng.gen_range(0.0..0.95);
        let r = rng.gen_range(0.0..1.9) / (delta * phi.max(1e-3));
        let p = params(delta, phi, r);
        let cap = price_cap(&p);
        let p1 = rng.gen_range(0.01..0.99) * cap;
        let (_, slope) = fonc_residual(PricePair::new(p1, 0.0).unwrap(), &p, Mode::Simplified).unwrap();
        min_slope = min_slope.min(slope);
        ok &= slope > 0.0;
        let p2 = rng.gen_range(0.0..cap);
        let u = utilities_simplified(PricePair::new(0.0, p2).unwrap(), &p);
        ok &= u.u1 == 0.0 && u.u2 == 0.0;
    }
    outcome(ok, format!("200 draws; min dU2/dp2 at p2=0 = {min_slope:.3e}; U(0, p2) = (0, 0)"))
}

fn random_params(rng: &mut ChaCha8Rng, congestion: Congestion) -> GameParams {
    let b1 = rng.gen_range(1.0..20.0);
    let b2 = b1 * rng.gen_range(0.05..1.0);
    let gamma = b2 * rng.gen_range(0.01..0.9);
    GameParams::builder()
        .delta(rng.gen_range(0.2..3.0))
        .d_max(b1 * rng.gen_range(0.1..3.0))
        .r(rng.gen_range(0.0..3.0))
        .b1(b1)
        .b2(b2)
        .gamma(gamma)
        .congestion(congestion)
        .build()
        .unwrap()
}

/// 7. Demand fixed-point correctness.
fn demand_fixed_point() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_residual: f64 = 0.0;
    let mut worst_scan: f64 = 0.0;
    let mut ok = true;
    let mut binding = 0;
    for model in [Congestion::None, Congestion::Linear, Congestion::MM1] {
        for _ in 0..1000 {
            let p = random_params(&mut rng, model);
            let hi = 2.0 / p.delta();
            let prices = PricePair::new(rng.gen_range(0.0..hi), rng.gen_range(0.0..hi)).unwrap();
            let d = solve_demand(prices, &p).unwrap();
            let (r1, r2) = demand_residuals(prices, d, &p);
            let residual = r1.abs().max(r2.abs()) / p.d_max();
            let (s1, s2) = common::demand_by_scan(prices, &p);
            let scan = (d.d1 - s1).abs().max((d.d2 - s2).abs());
            let (a1, a2) = common::amplitudes_ref(prices, &p);
            if d.d1 < 0.99 * a1 || d.d2 < 0.99 * a2 {
                binding += 1;
            }
            worst_residual = worst_residual.max(residual);
            worst_scan = worst_scan.max(scan);
            ok &= residual < 1e-9 && scan < 1e-6 && d.d1 >= 0.0 && d.d2 >= 0.0;
        }
    }
    outcome(
        ok,
        format!("3 x 1000 draws ({binding} congestion-limited); max residual/Dmax = {worst_residual:.2e}; max |solve - scan| = {worst_scan:.2e}"),
    )
}

/// 8. Full and simplified utilities coincide without op-ex and congestion.
fn simplified_full_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = random_params(&mut rng, Congestion::None);
        let hi = 2.0 / p.delta();
        let prices = PricePair::new(rng.gen_range(0.0..hi), rng.gen_range(0.0..hi)).unwrap();
        let full = utilities_full(prices, &p).unwrap();
        let simple = utilities_simplified(prices, &p);
        for (a, b) in [(full.u1, simple.u1), (full.u2, simple.u2)] {
            let scale = a.abs().max(b.abs());
            if scale > 0.0 {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    outcome(worst < 1e-12, format!("1000 price pairs; max relative difference = {worst:.2e}"))
}

/// 9. Repeated `sweep` runs give identical CSV bodies.
fn sweep_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("sweep{i}.csv"));
        let args = ["roaming", "sweep", "--r", "0.8", "-o", path.to_str().unwrap()];
        let code = roaming::cli::run(args, &mut Vec::new(), &mut Vec::new());
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&path).unwrap();
        let body: String =
            text.lines().filter(|l| !l.starts_with("# timestamp")).map(|l| format!("{l}\n")).collect();
        bodies.push(body);
    }
    outcome(bodies[0] == bodies[1] && bodies[0].lines().count() > 200, format!("{} bytes, identical = {}", bodies[0].len(), bodies[0] == bodies[1]))
}

type Criterion<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

fn main() -> ExitCode {
    let (grid, rows) = figure_sweep();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 closed-form NE reproduction", Box::new(|| time_limited(Some(Duration::from_secs(1)), closed_form_reproduction))),
        ("2 oracle equivalence grid", Box::new(|| time_limited(Some(Duration::from_secs(10)), oracle_grid))),
        ("3 fair roaming charge", Box::new(|| time_limited(Some(Duration::from_secs(10)), fair_roaming_charge))),
        ("4 utilities-vs-r shape", Box::new(|| figure_two_shape(&grid, &rows))),
        ("5 fairness-gap sign structure", Box::new(|| figure_three_shape(&grid, &rows))),
        ("6 no boundary equilibria", Box::new(|| time_limited(None, boundary_property))),
        ("7 demand fixed point", Box::new(|| time_limited(None, demand_fixed_point))),
        ("8 simplified/full consistency", Box::new(simplified_full_consistency)),
        ("9 sweep determinism", Box::new(sweep_determinism)),
    ];

    let mut failed = 0;
    for (name, check) in criteria {
        let result = check();
        let tag = if result.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", result.detail);
        if !result.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
