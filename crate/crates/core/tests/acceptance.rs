//! Acceptance criteria. Each test writes one `criterion N: PASS|FAIL` line
//! straight to stderr, so the lines show up even when output is captured.

use std::f64::consts::PI;
use std::io::Write as _;
use std::time::Instant;

use swe_core::cases::{case_by_name, CaseKind, CaseSpec, MeshSpec};
use swe_core::drivers::{convergence, riemann_compare, wellbalance, CutRow};
use swe_core::mesh::{generate_structured, Mesh, Pattern, Side, Sides};
use swe_core::norms::{cut_along_x, sample, weighted_l2};
use swe_core::solver::Solver;
use swe_core::transport::transport_step;
use swe_core::{NumericsConfig, PhysicalParams, Scheme, State, Vec2};

fn report(n: usize, pass: bool, detail: String) {
    let line = format!("criterion {n:>2}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn case(name: &str) -> CaseSpec {
    case_by_name(name).unwrap_or_else(|| panic!("missing case {name}"))
}

fn fmt_orders(o: &[Option<f64>]) -> String {
    o.iter()
        .map(|o| o.map_or("-".into(), |v| format!("{v:.2}")))
        .collect::<Vec<_>>()
        .join("/")
}

#[test]
fn criterion_01_vortex_convergence() {
    let t0 = Instant::now();
    let rows = convergence(&case("vortex"), &[32, 64, 128]).unwrap();
    let mut ok = true;
    let mut orders = Vec::new();
    for r in &rows[1..] {
        let [v1, v2, eta] = r.orders.map(|o| o.unwrap_or(f64::NAN));
        ok &= v1 >= 1.8 && v2 >= 1.8 && eta >= 1.7;
        orders.push(fmt_orders(&r.orders).to_string());
    }
    let v1_64 = rows[1].errors.v1;
    let reference = 3.4160e-3;
    ok &= v1_64 <= 1.5 * reference && v1_64 >= reference / 1.5;
    report(
        1,
        ok,
        format!(
            "orders v1/v2/eta {} (need 1.8/1.8/1.7); L2(v1)@64 = {v1_64:.4e} vs {reference:.4e} x/÷1.5; {:.1?}",
            orders.join(", "),
            t0.elapsed()
        ),
    );
}

#[test]
fn criterion_02_asymptotic_preservation() {
    let a = convergence(&case("vortex-ap-fr1e-1"), &[32, 64]).unwrap();
    let b = convergence(&case("vortex-ap-fr1e-2"), &[32, 64]).unwrap();
    let mut ok = true;
    for rows in [&a, &b] {
        let [v1, v2, _] = rows[1].orders.map(|o| o.unwrap_or(f64::NAN));
        ok &= v1 >= 1.8 && v2 >= 1.8;
    }
    let rel: Vec<f64> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x.errors.v1 - y.errors.v1).abs() / x.errors.v1.max(y.errors.v1))
        .collect();
    ok &= rel.iter().all(|&r| r <= 0.05);
    report(
        2,
        ok,
        format!(
            "v orders Fr=1e-1 {} Fr=1e-2 {}; L2(v1)@32 {:.4e} vs {:.4e}; rel diff {:.2}%/{:.2}%",
            fmt_orders(&a[1].orders[..2]),
            fmt_orders(&b[1].orders[..2]),
            a[0].errors.v1,
            b[0].errors.v1,
            100.0 * rel[0],
            100.0 * rel[1]
        ),
    );
}

#[test]
fn criterion_03_lake_at_rest() {
    let t0 = Instant::now();
    let r = wellbalance(&case("leveque-bump"), 100).unwrap();
    let dt = t0.elapsed();
    let ok = r.eta_drift <= 1e-12 && r.q_norm <= 1e-12 && dt.as_secs_f64() < 30.0;
    report(
        3,
        ok,
        format!("100 steps: L2(eta-1) = {:.2e}, L2(q) = {:.2e}; {dt:.1?}", r.eta_drift, r.q_norm),
    );
}

/// Collapses cut points sharing an `x` into one averaged sample.
fn levels(rows: &[CutRow]) -> Vec<(f64, f64, f64, Option<f64>)> {
    let mut out: Vec<(f64, f64, f64, Option<f64>, usize)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some(l) if (l.0 - r.x).abs() < 1e-9 => {
                l.1 += r.h;
                l.2 += r.u;
                l.4 += 1;
            }
            _ => out.push((r.x, r.h, r.u, r.h_exact, 1)),
        }
    }
    out.into_iter()
        .map(|(x, h, u, he, n)| (x, h / n as f64, u / n as f64, he))
        .collect()
}

/// Relative L1 error of `h` along the cut, integrated with the trapezoid rule.
fn relative_l1(lv: &[(f64, f64, f64, Option<f64>)]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for w in lv.windows(2) {
        let dx = w[1].0 - w[0].0;
        let e = |p: &(f64, f64, f64, Option<f64>)| (p.1 - p.3.unwrap()).abs();
        num += 0.5 * dx * (e(&w[0]) + e(&w[1]));
        den += 0.5 * dx * (w[0].3.unwrap().abs() + w[1].3.unwrap().abs());
    }
    num / den
}

fn strip_dx(spec: &CaseSpec) -> f64 {
    match spec.mesh {
        MeshSpec::Structured { bounds, nx, .. } => (bounds[1] - bounds[0]) / nx as f64,
        _ => unreachable!("Riemann cases use structured strips"),
    }
}

/// Position where `h` crosses the mid value between `lo` and `hi`, scanning left to right.
fn crossing(lv: &[(f64, f64, f64, Option<f64>)], h: impl Fn(&(f64, f64, f64, Option<f64>)) -> f64, mid: f64) -> Option<f64> {
    lv.windows(2).find_map(|w| {
        let (a, b) = (h(&w[0]) - mid, h(&w[1]) - mid);
        (a.signum() != b.signum()).then(|| w[0].0 + (w[1].0 - w[0].0) * a / (a - b))
    })
}

#[test]
fn criterion_04_riemann_exactness() {
    let rp1 = case("rp1");
    let dx1 = strip_dx(&rp1);
    let (_, rows) = riemann_compare(&rp1, 0.075).unwrap();
    let lv = levels(&rows);
    let l1_1 = relative_l1(&lv);
    // RP1 sends a shock into the left state; locate it at the half-height
    // between the left state and the star state.
    let h_l = lv[0].3.unwrap();
    let h_star = lv.iter().map(|p| p.3.unwrap()).fold(f64::MIN, f64::max);
    let mid = 0.5 * (h_l + h_star);
    let x_num = crossing(&lv, |p| p.1, mid).unwrap_or(f64::NAN);
    let x_ex = crossing(&lv, |p| p.3.unwrap(), mid).unwrap_or(f64::NAN);
    let shock_err = (x_num - x_ex).abs() / dx1;

    let rp5 = case("rp5");
    let (solver5, rows5) = riemann_compare(&rp5, 0.075).unwrap();
    let lv5 = levels(&rows5);
    let l1_5 = relative_l1(&lv5);
    let h5 = solver5.state.h_dual_all(&solver5.mesh);
    let min_h = h5.iter().copied().fold(f64::INFINITY, f64::min).min(solver5.summary.min_depth);
    let finite_u = rows5.iter().all(|r| r.u.is_finite());

    let ok = l1_1 <= 0.02 && shock_err <= 3.0 && l1_5 <= 0.03 && min_h >= 0.0 && finite_u;
    report(
        4,
        ok,
        format!(
            "RP1 L1 {:.2}% shock off by {shock_err:.2} dx; RP5 L1 {:.2}% min h {min_h:.2e} finite u {finite_u}",
            100.0 * l1_1,
            100.0 * l1_5
        ),
    );
}

/// Longest run of consecutive levels flat to 1% whose value is a new
/// intermediate state, i.e. differs by more than 1% from both far states.
fn intermediate_plateau(lv: &[(f64, f64, f64, Option<f64>)], dx: f64) -> (f64, f64) {
    let (h_l, h_r) = (lv[0].1, lv[lv.len() - 1].1);
    let fresh = |h: f64| (h - h_l).abs() > 0.01 * h_l && (h - h_r).abs() > 0.01 * h_r;
    let mut best = (0.0, f64::NAN);
    let mut start = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..lv.len() {
        let h = lv[k].1;
        lo = lo.min(h);
        hi = hi.max(h);
        while hi - lo > 0.01 * lo {
            start += 1;
            lo = lv[start..=k].iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            hi = lv[start..=k].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        }
        let span = (lv[k].0 - lv[start].0) / dx;
        let mean = 0.5 * (lo + hi);
        if span > best.0 && fresh(mean) {
            best = (span, mean);
        }
    }
    best
}

/// Location of the steepest jump in `h` within 20 cells of the step.
fn step_jump(lv: &[(f64, f64, f64, Option<f64>)], dx: f64) -> f64 {
    lv.windows(2)
        .filter(|w| w[0].0.abs() <= 20.0 * dx && w[1].0.abs() <= 20.0 * dx)
        .max_by(|a, b| (a[1].1 - a[0].1).abs().total_cmp(&(b[1].1 - b[0].1).abs()))
        .map(|w| 0.5 * (w[0].0 + w[1].0))
        .unwrap_or(f64::NAN)
}

#[test]
fn criterion_05_bottom_step_riemann() {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = ["rp2", "rp3", "rp4"]
            .into_iter()
            .map(|name| {
                s.spawn(move || {
                    let spec = case(name);
                    let dx = strip_dx(&spec);
                    let out = riemann_compare(&spec, 1.0);
                    (name, dx, out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, dx, out) in results {
        match out {
            Ok((solver, rows)) => {
                let finite = solver.state.is_finite() && solver.state.t == 1.0;
                let lv = levels(&rows);
                let (span, level) = intermediate_plateau(&lv, dx);
                let jump = step_jump(&lv, dx) / dx;
                ok &= finite && span >= 20.0 && jump.abs() <= 2.0;
                detail.push(format!(
                    "{name}: finite {finite}, plateau h={level:.4} over {span:.0} dx, step jump at {jump:+.1} dx"
                ));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("{name}: {e}"));
            }
        }
    }
    report(5, ok, detail.join("; "));
}

#[test]
fn criterion_06_low_froude_cylinder() {
    let spec = case("cylinder");
    let CaseKind::Cylinder { v_m, eta0, .. } = spec.kind else {
        unreachable!()
    };
    let exact = spec.exact().unwrap();
    let mut solver = spec.solver().unwrap();
    let mut dts = Vec::new();
    solver.run_until(spec.end_time, |_, d| dts.push(d.dt)).unwrap();
    // The last step is cut short to land on the end time.
    dts.pop();
    let min_dt = dts.iter().copied().fold(f64::INFINITY, f64::min);
    let t = solver.state.t;
    let eps = spec.numerics.eps_vel;
    let (mut max_err, mut ex_min, mut ex_max) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    let (mut dv2, mut v2) = (0.0, 0.0);
    let n = 360;
    for k in 0..n {
        let phi = 2.0 * PI * k as f64 / n as f64;
        let p = Vec2::new(1.01 * phi.cos(), 1.01 * phi.sin());
        let s = sample(&solver.mesh, &solver.state, p).expect("ring inside the mesh");
        let (eta_ex, v_ex) = exact(p, t);
        max_err = max_err.max((s.eta - eta_ex).abs());
        ex_min = ex_min.min(eta_ex);
        ex_max = ex_max.max(eta_ex);
        let speed = (s.q * (s.h / (s.h * s.h + eps))).norm();
        dv2 += (speed - v_ex.norm()).powi(2);
        v2 += v_ex.norm().powi(2);
    }
    let amp = ex_max - ex_min;
    let rel_v = (dv2 / v2).sqrt();
    let g = spec.params.g;
    let explicit = spec.numerics.cfl * solver.mesh.min_incircle() / (g * eta0).sqrt();
    let ratio = min_dt / explicit;
    let ok = max_err <= 0.2 * amp && rel_v <= 0.1 && ratio >= 50.0;
    report(
        6,
        ok,
        format!(
            "v_m={v_m}: max|eta err| {max_err:.2e} vs 20% of {amp:.2e}; |v| rel L2 {:.2}%; min dt / explicit bound = {ratio:.0}",
            100.0 * rel_v
        ),
    );
}

#[test]
fn criterion_07_cosine_bump_perturbation() {
    let spec = case("cosine-bump-1d");
    let eps = 1e-3;
    let mut solver = spec.solver().unwrap();
    let c = (spec.params.g * 1.0f64).sqrt();
    let mut max_amp = 0.0f64;
    let mut max_outside = 0.0f64;
    // Two cells of slack on each side of the characteristic cone.
    let slack = 2.0 * 2.0 / 400.0;
    solver
        .run_until(spec.end_time, |s, _| {
            let t = s.state.t;
            let (lo, hi) = (1.1 - c * t - slack, 1.2 + c * t + slack);
            for (v, p) in s.mesh.primal.vertices.iter().enumerate() {
                let d = (s.state.eta[v] - 1.0).abs();
                max_amp = max_amp.max(d);
                if p.x < lo || p.x > hi {
                    max_outside = max_outside.max(d);
                }
            }
            for (i, cell) in s.mesh.dual.cells.iter().enumerate() {
                if cell.node.x < lo || cell.node.x > hi {
                    max_outside = max_outside.max(s.state.q[i].norm());
                }
            }
        })
        .unwrap();
    let ok = max_amp <= 2.0 * eps && max_outside <= 1e-10;
    report(
        7,
        ok,
        format!("max|eta-1| {max_amp:.3e} (limit {:.0e}); outside support {max_outside:.2e}", 2.0 * eps),
    );
}

#[test]
fn criterion_08_conservation() {
    let spec = case("vortex").refined(32).unwrap();
    let mut solver = spec.solver().unwrap();
    let lumped = solver.mesh.primal.lumped_mass();
    let volume = |s: &Solver| -> f64 {
        lumped
            .iter()
            .enumerate()
            .map(|(v, m)| m * s.state.h_vertex(v))
            .sum()
    };
    let v0 = volume(&solver);
    let areas = solver.mesh.dual.areas();
    let total_q = |q: &[Vec2]| q.iter().zip(&areas).fold(Vec2::ZERO, |acc, (q, a)| acc + *q * *a);
    let none = vec![None; solver.mesh.dual.boundary_faces.len()];
    let mut worst_q = 0.0f64;
    for _ in 0..100 {
        let dt = solver.next_dt();
        let (q_star, _) = transport_step(&solver.mesh, &solver.state, dt, &solver.cfg, &none).unwrap();
        let before = total_q(&solver.state.q);
        let after = total_q(&q_star);
        let scale: f64 = solver.state.q.iter().zip(&areas).map(|(q, a)| q.norm() * a).sum();
        worst_q = worst_q.max((after - before).norm() / scale);
        solver.step(dt).unwrap();
    }
    let drift = (volume(&solver) - v0).abs() / v0;
    let ok = drift <= 1e-10 && worst_q <= 1e-12;
    report(
        8,
        ok,
        format!("volume drift {drift:.2e} over 100 steps; worst transport momentum change {worst_q:.2e}"),
    );
}

/// One step from the same state under each scheme; returns the largest
/// differences of (wp2, wp3) against wp1.
fn equivalence_gap(mesh: &Mesh, state: &State, dt: f64, cfg: NumericsConfig) -> (f64, f64) {
    let run = |scheme| {
        let cfg = NumericsConfig { scheme, theta: 1.0, ..cfg };
        let mut s = Solver::new(mesh.clone(), state.clone(), PhysicalParams::default(), cfg, None);
        s.step(dt).unwrap();
        s.state
    };
    let w1 = run(Scheme::Wp1);
    let gap = |o: &State| {
        let de = o.eta.iter().zip(&w1.eta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let dq = o.q.iter().zip(&w1.q).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
        de.max(dq)
    };
    (gap(&run(Scheme::Wp2)), gap(&run(Scheme::Wp3)))
}

#[test]
fn criterion_09_scheme_equivalence() {
    let t0 = Instant::now();
    let cfg = NumericsConfig { cg_tol: 1e-12, ..NumericsConfig::default() };
    let tri = Mesh::new(generate_structured([0.0, 1.0, 0.0, 1.0], 1, 1, Pattern::Uniform, Sides::all(Side::Wall)).unwrap()).unwrap();
    let s_tri = State::from_fields(&tri, |_| 0.0, |p| 1.0 + 0.1 * p.x - 0.05 * p.y, |p| Vec2::new(0.1 * p.y, -0.2 * p.x));
    let (a2, a3) = equivalence_gap(&tri, &s_tri, 1e-2, cfg);

    let vortex = case("vortex").refined(32).unwrap();
    let mesh = vortex.mesh.build().unwrap();
    let state = vortex.initial_state(&mesh);
    let (b2, b3) = equivalence_gap(&mesh, &state, 1e-2, cfg);
    let elapsed = t0.elapsed();
    let ok = a2.max(b2) <= cfg.cg_tol && a3.max(b3) <= 10.0 * cfg.cg_tol && elapsed.as_secs_f64() < 5.0;
    report(
        9,
        ok,
        format!(
            "2 triangles: |wp2-wp1| {a2:.1e} |wp3-wp1| {a3:.1e}; 32x32: {b2:.1e} / {b3:.1e}; {elapsed:.1?}"
        ),
    );
}

#[test]
fn criterion_10_blunt_body() {
    let spec = case("blunt-body");
    let mut solver = spec.solver().unwrap();
    solver.run_until(2.0, |_, _| {}).unwrap();
    let at_2 = solver.state.clone();
    let cut = cut_along_x(&solver.mesh, &at_2, 0.0, 1e-9, spec.numerics.eps_vel);
    // Flow runs in +x towards the body; look for a monotone rise of at least
    // 50% over at most 10 cells that ends upstream of the wall.
    let mut shock = None;
    for start in 0..cut.len() {
        for len in 1..=10.min(cut.len() - 1 - start) {
            let w = &cut[start..=start + len];
            let monotone = w.windows(2).all(|p| p[1].h >= p[0].h);
            if monotone && w[len].h >= 1.5 * w[0].h && start + len + 2 < cut.len() {
                shock = Some((w[0].x, w[len].x, w[0].h, w[len].h));
                break;
            }
        }
        if shock.is_some() {
            break;
        }
    }
    solver.run_until(2.2, |_, _| {}).unwrap();
    let lumped = solver.mesh.primal.lumped_mass();
    let areas = solver.mesh.dual.areas();
    let d_eta = weighted_l2(&lumped, &solver.state.eta, &at_2.eta) / weighted_l2(&lumped, &at_2.eta, &vec![0.0; lumped.len()]);
    let qx = |s: &State| s.q.iter().map(|q| q.x).collect::<Vec<_>>();
    let qy = |s: &State| s.q.iter().map(|q| q.y).collect::<Vec<_>>();
    let dq = (weighted_l2(&areas, &qx(&solver.state), &qx(&at_2)).powi(2) + weighted_l2(&areas, &qy(&solver.state), &qy(&at_2)).powi(2)).sqrt()
        / (weighted_l2(&areas, &qx(&at_2), &vec![0.0; areas.len()]).powi(2) + weighted_l2(&areas, &qy(&at_2), &vec![0.0; areas.len()]).powi(2)).sqrt();
    let ok = shock.is_some() && d_eta <= 0.01 && dq <= 0.01;
    let shock_txt = shock.map_or("no bow shock".to_string(), |(x0, x1, h0, h1)| {
        format!("bow shock h {h0:.3} -> {h1:.3} over x {x0:.3}..{x1:.3}")
    });
    report(
        10,
        ok,
        format!("{shock_txt}; T=2 vs 2.2 rel L2 eta {:.3}%, q {:.3}%", 100.0 * d_eta, 100.0 * dq),
    );
}

#[test]
fn criterion_11_dambreak_gauges() {
    let spec = case("dambreak-3d");
    let mut solver = spec.solver().unwrap();
    solver.run_until(spec.end_time, |_, _| {}).unwrap();
    let g = &solver.gauges;
    let depth = |name: &str| -> Vec<f64> {
        let k = g.names.iter().position(|n| n == name).unwrap();
        let b = solver.state.b_vertex[g.vertices[k]];
        g.column(k).into_iter().map(|eta| eta - b).collect()
    };
    let h0 = depth("0");
    let settle = g
        .times
        .iter()
        .zip(&h0)
        .filter(|(t, _)| (0.5..=2.0).contains(*t))
        .map(|(_, h)| *h);
    let (lo, hi) = settle.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), h| (lo.min(h), hi.max(h)));
    let h8 = depth("8A");
    let arrival = g.times.iter().zip(&h8).find(|(_, h)| **h >= 1e-3).map(|(t, _)| *t);
    let ok = lo >= 0.20 && hi <= 0.35 && matches!(arrival, Some(t) if t > 0.0 && t <= 1.0);
    report(
        11,
        ok,
        format!(
            "gauge 0 depth in [{lo:.3}, {hi:.3}] for t in [0.5, 2]; 8A wets at t = {}",
            arrival.map_or("never".into(), |t| format!("{t:.3}"))
        ),
    );
}
