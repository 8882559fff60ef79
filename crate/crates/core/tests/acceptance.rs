//! Acceptance checks, one line of output per criterion.
//!
//! Run with `cargo test --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use group_decomp::cli;
use group_decomp::group::{build_cyclic, build_dihedral, build_product, build_symmetric};
use group_decomp::montecarlo::{sweep, Simulator, SweepSettings, Variant};
use group_decomp::oracle::{exact_p, exact_pair_means, exact_point_miss, exact_single_mean, SharedAxis, MAX_PAIR_ORDER};
use group_decomp::rational::{exact, to_f64};
use group_decomp::structure::commute_probability;
use group_decomp::suen::{delta_cap, pair_mean, single_mean, suen_generic, suen_point, DependencyGraph, Intersections};
use group_decomp::theta::{dihedral_sandwich, f_eval, solve_theta, theta_bounds};
use group_decomp::{Exact, Group};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn moments_agree() -> Check {
    let (mut singles, mut pairs) = (0u64, 0u64);
    for e in common::catalog() {
        let g = &e.group;
        let ix = Intersections::new(g);
        for x in 0..g.order() {
            let want = exact_single_mean(g, x).map_err(|err| err.to_string())?;
            ensure(single_mean(g.profile(), x).unwrap() == want, || format!("{} single x={x}", e.name))?;
            singles += 1;
            if g.order() > MAX_PAIR_ORDER {
                continue;
            }
            let rows = exact_pair_means(g, x, SharedAxis::Row).unwrap();
            let cols = exact_pair_means(g, x, SharedAxis::Column).unwrap();
            for y in 0..g.order() {
                let closed = pair_mean(&ix, x, y).unwrap();
                ensure(closed == rows[y] && closed == cols[y], || format!("{} pair x={x} y={y}", e.name))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{singles} single and {pairs} pair moments equal the enumeration"))
}

fn class_equations() -> Check {
    let catalog = common::catalog();
    for e in &catalog {
        let p = e.group.profile();
        p.check_invariants().map_err(|err| format!("{}: {err}", e.name))?;
        let r = Exact::new(p.class_count() as i128, e.group.order() as i128);
        ensure(commute_probability(&e.group) == r, || format!("{}: Pr[ab = ba] != R/n", e.name))?;
    }
    Ok(format!("{} groups", catalog.len()))
}

fn theta_correct() -> Check {
    let mut worst_cyclic = 0f64;
    for m in 3..=64 {
        let t = solve_theta(build_cyclic(m).unwrap().profile()).unwrap().theta;
        worst_cyclic = worst_cyclic.max((t - 1.0).abs());
    }
    ensure(worst_cyclic <= 1e-10, || format!("cyclic Θ off by {worst_cyclic:e}"))?;
    for m in 3..=64 {
        let g = build_dihedral(m).unwrap();
        let t = solve_theta(g.profile()).unwrap().theta;
        let (lo, hi) = dihedral_sandwich(g.order());
        ensure(lo <= t && t <= hi, || format!("D{}: Θ = {t} outside [{lo}, {hi}]", 2 * m))?;
    }
    let catalog = common::catalog();
    for e in &catalog {
        let p = e.group.profile();
        let t = solve_theta(p).unwrap().theta;
        let b = theta_bounds(p).unwrap();
        ensure(b.contains(t, 1e-10), || format!("{}: Θ = {t}, bounds {b:?}", e.name))?;
    }
    Ok(format!("max |Θ(C_m) - 1| = {worst_cyclic:.1e}; {} groups inside their bounds", catalog.len()))
}

fn bracketing() -> Check {
    let catalog = common::catalog();
    for e in &catalog {
        let p = e.group.profile();
        let n = p.order() as f64;
        let lo = f_eval(p, 0.5).unwrap();
        let hi = f_eval(p, 1.0).unwrap();
        ensure(lo <= -n.ln() / n, || format!("{}: f(1/2) = {lo}", e.name))?;
        ensure(hi >= -1e-12, || format!("{}: f(1) = {hi}", e.name))?;
        let mut prev = lo;
        for i in 1..=1000 {
            let v = f_eval(p, 0.5 + 0.5 * i as f64 / 1000.0).unwrap();
            ensure(v >= prev - 1e-12, || format!("{}: f decreases at step {i}", e.name))?;
            prev = v;
        }
    }
    Ok(format!("{} groups, 1001-point grid", catalog.len()))
}

fn suen_brackets() -> Check {
    let mut instances = 0;
    let mut worst_rel = 0f64;
    for e in common::catalog_up_to(8) {
        let g = &e.group;
        for k in 1..=4usize {
            let truth = exact_point_miss(g, k, k, Variant::Both).map_err(|err| err.to_string())?;
            let graph = DependencyGraph::grid(k);
            for (x, t) in truth.iter().enumerate() {
                let r = suen_point(g.profile(), x, k as u64).unwrap();
                let t = to_f64(t);
                let b = &r.bounds;
                // k = 1 makes both bounds equal the truth; allow one rounding step.
                let slack = 4.0 * f64::EPSILON;
                ensure(b.lower <= t + slack && t <= b.upper + slack, || {
                    format!("{} x={x} k={k}: {t} not in [{}, {}]", e.name, b.lower, b.upper)
                })?;
                let p = to_f64(&r.moments.single_mean);
                let pm = to_f64(&r.moments.pair_mean);
                let generic = suen_generic(&graph, &vec![p; graph.vertex_count()], &vec![pm; graph.edges().len()]).unwrap();
                for (a, c) in [(b.delta, generic.delta), (b.delta_star, generic.delta_star), (b.upper, generic.upper), (b.lower, generic.lower)] {
                    let scale = a.abs().max(c.abs());
                    if scale > 0.0 {
                        worst_rel = worst_rel.max((a - c).abs() / scale);
                    }
                }
                instances += 1;
            }
        }
    }
    ensure(worst_rel <= 1e-12, || format!("generic and closed form differ by {worst_rel:e}"))?;
    Ok(format!("{instances} (G, x, k) instances; generic vs closed form {worst_rel:.1e}"))
}

fn monte_carlo_vs_oracle() -> Check {
    let cases = [(build_cyclic(2).unwrap(), 2usize), (build_symmetric(3).unwrap(), 3)];
    let mut notes = Vec::new();
    for (g, k) in &cases {
        let p = exact_p(g, *k, *k, Variant::Both).unwrap();
        if g.order() == 2 {
            ensure(p == exact(3, 4), || format!("exact P(C2, 2) = {p}"))?;
        }
        let truth = to_f64(&p);
        let trials = 10_000u64;
        let est = Simulator::new(g, Variant::Both, 20_240).estimate(*k, *k, trials).unwrap();
        let sigma = (truth * (1.0 - truth) / trials as f64).sqrt();
        let z = (est.p_hat - truth) / sigma;
        ensure(z.abs() <= 3.0, || format!("n={} k={k}: p̂ = {} vs {p}, z = {z:.2}", g.order(), est.p_hat))?;
        notes.push(format!("n={} k={k}: p̂={} exact={p} z={z:+.2}", g.order(), est.p_hat));
    }
    Ok(notes.join("; "))
}

fn transition_check(g: &Group, name: &str, trials: u64) -> Check {
    let n = g.order();
    let settings = SweepSettings::new((40..=140).step_by(4), trials, 7);
    let curve = sweep(g, &settings).map_err(|e| e.to_string())?;
    let c = curve.critical_prediction.unwrap();
    let k = curve.crossing_k().ok_or_else(|| format!("{name}: no crossing ({:?})", curve.crossing))?;
    let ratio = k / c;
    ensure((0.85..=1.15).contains(&ratio), || format!("{name}: crossing {k:.1} vs C = {c:.1}"))?;
    let sim = Simulator::new(g, Variant::Both, 8);
    let high = (1.3 * c).ceil() as usize;
    let low = (0.7 * c).floor() as usize;
    let p_high = sim.estimate(high, high, trials).unwrap().p_hat;
    let p_low = sim.estimate(low, low, trials).unwrap().p_hat;
    ensure(p_high >= 0.9, || format!("{name}: P(k={high}) = {p_high}"))?;
    ensure(p_low <= 0.1, || format!("{name}: P(k={low}) = {p_low}"))?;
    Ok(format!(
        "{name} (n={n}): crossing {k:.1}, C = {c:.1}, ratio {ratio:.3}, P({high}) = {p_high}, P({low}) = {p_low}"
    ))
}

fn phase_transition() -> Check {
    let a = transition_check(&build_cyclic(1024).unwrap(), "C1024", 400)?;
    let b = transition_check(&build_dihedral(512).unwrap(), "D1024", 400)?;
    Ok(format!("{a}; {b}"))
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("decomp-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut seen: Option<(Vec<u8>, Vec<u8>)> = None;
    for spec in ["cyclic:1024", "dihedral:512"] {
        seen = None;
        for workers in ["1", "2", "8"] {
            let meta = dir.join("meta.json");
            let meta_arg = meta.display().to_string();
            let args = [
                "decomp", "sweep", "--spec", spec, "--kmin", "40", "--kmax", "140", "--step", "4", "--trials", "400",
                "--seed", "7", "--workers", workers, "--metadata", &meta_arg,
            ];
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = cli::run(args, &mut out, &mut err);
            ensure(code == 0, || String::from_utf8_lossy(&err).into_owned())?;
            let run = (out, std::fs::read(&meta).map_err(|e| e.to_string())?);
            if let Some(first) = &seen {
                ensure(first == &run, || format!("{spec}: output differs with {workers} workers"))?;
            }
            seen = Some(run);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    let bytes = seen.map(|(csv, _)| csv.len()).unwrap_or(0);
    Ok(format!("CSV and metadata identical for 1, 2 and 8 workers ({bytes} CSV bytes per run)"))
}

fn delta_caps() -> Check {
    let catalog = common::catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0f64;
    for _ in 0..50 {
        let e = &catalog[rng.gen_range(0..catalog.len())];
        let n = e.group.order();
        let x = rng.gen_range(0..n);
        let k = rng.gen_range(2..=n as u64);
        let b = suen_point(e.group.profile(), x, k).unwrap().bounds;
        let cap = delta_cap(n, k);
        ensure(b.delta <= cap && b.delta_star <= cap, || {
            format!("{} x={x} k={k}: Δ = {}, Δ* = {}, cap = {cap}", e.name, b.delta, b.delta_star)
        })?;
        worst = worst.max(b.delta / cap);
    }
    Ok(format!("50 instances, max Δ/cap = {worst:.3}"))
}

fn variants() -> Check {
    let abelian = [
        build_cyclic(1024).unwrap(),
        build_cyclic(37).unwrap(),
        build_product(&build_cyclic(2).unwrap(), &build_cyclic(2).unwrap()).unwrap(),
        build_product(&build_cyclic(4).unwrap(), &build_cyclic(6).unwrap()).unwrap(),
    ];
    for g in &abelian {
        for (k, m) in [(3, 3), (5, 2), (60, 90)] {
            let both = Simulator::new(g, Variant::Both, 1).trial_misses(k, m, 500).unwrap();
            let ab = Simulator::new(g, Variant::AbOnly, 1).trial_misses(k, m, 500).unwrap();
            ensure(both == ab, || format!("n={} k={k} m={m}: variants differ", g.order()))?;
        }
    }
    let c = build_cyclic(1024).unwrap();
    let mut notes = Vec::new();
    for ratio in [0.5f64, 2.0] {
        let equal_c = (1024.0 * 1024f64.ln()).sqrt();
        let centre = equal_c / ratio.sqrt();
        let lo = (0.5 * centre) as usize;
        let hi = (1.5 * centre) as usize;
        let mut settings = SweepSettings::new((lo..=hi).step_by(2), 400, 7);
        settings.m_ratio = ratio;
        let curve = sweep(&c, &settings).unwrap();
        let r = curve
            .crossing_ratio()
            .ok_or_else(|| format!("m/k = {ratio}: no crossing ({:?})", curve.crossing))?;
        ensure((0.85..=1.15).contains(&r), || format!("m/k = {ratio}: crossing ratio {r:.3}"))?;
        notes.push(format!("m/k = {ratio}: k·m at crossing / (n log n) = {:.3}", r * r));
    }
    Ok(format!("abelian per-trial outcomes identical; {}", notes.join(", ")))
}

fn main() {
    // Respect libtest-style filters passed by `cargo test -- <filter>`.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [Criterion; 10] = [
        (1, "exact moment agreement", Duration::from_secs(120), moments_agree),
        (2, "Burnside, orbit-stabilizer and commuting probability", Duration::from_secs(60), class_equations),
        (3, "Θ solver correctness and bounds", Duration::from_secs(60), theta_correct),
        (4, "f brackets and monotonicity", Duration::from_secs(60), bracketing),
        (5, "Suen bounds bracket the truth", Duration::from_secs(300), suen_brackets),
        (6, "Monte Carlo agrees with the oracle", Duration::from_secs(60), monte_carlo_vs_oracle),
        (7, "phase transition at n = 1024", Duration::from_secs(600), phase_transition),
        (8, "determinism across worker counts", Duration::from_secs(120), determinism),
        (9, "Δ and Δ* caps", Duration::from_secs(60), delta_caps),
        (10, "variant sanity", Duration::from_secs(600), variants),
    ];
    let mut failed = 0;
    for (id, title, budget, check) in criteria {
        if let Some(f) = &filter {
            if !title.contains(f.as_str()) && *f != id.to_string() {
                continue;
            }
        }
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.1?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(msg) => println!("PASS criterion {id:>2} ({title}) [{elapsed:.2?}]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id:>2} ({title}) [{elapsed:.2?}]: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
