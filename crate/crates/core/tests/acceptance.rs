//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlphase::energy::{check_mixed_interaction, eval_f_eps, MixedInteractionConfig};
use nlphase::gamma_limit::{eval_limit, k_constant, omega};
use nlphase::geometry::{Atom, CellSet, DiscreteMeasure, Facet, Grid, PhaseField, PolyhedralInterface, SurfactantField};
use nlphase::harness::{fit_log_model, fit_loglog_model, grid_record, run_sweep, slab_terms, ReducedMesh};
use nlphase::kernel::{
    calibrate_lower_bound, check_bound_cylinder_complement, check_bound_cylinder_cone,
    check_lower_bound_special_cylinder, eval_g, eval_i_field, integrate_graded, reduced_kernel, BoundReport,
    CylinderBound, KernelPlan, LowerBoundConstants, SpecialCylinder,
};
use nlphase::potential::DoubleWell;
use nlphase::recovery::{atom_mass_exact, min_resolvable_eps, surfactant_atom};
use nlphase::scene::Scene;
use nlphase::Error;

type Outcome = nlphase::Result<(bool, String)>;

const LADDER: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// `J(ε) = ∫∫(φ(t) − φ(s))²/|t − s|² ds dt` over `(−1/2, 1/2)²` for the affine
/// profile of width `ε/|ln ε|`, frozen from an independent adaptive
/// quadrature (scipy `dblquad` on the analytically reduced single integral).
const SLAB_J: [f64; 4] = [12.495003057095936, 17.90840430935593, 23.08865336158488, 28.125916662978927];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn quartic() -> DoubleWell {
    DoubleWell::quartic(0.0, 1.0).unwrap()
}

fn slab_scene(cells: usize, gamma: f64, evaluator: &str) -> Scene {
    Scene::from_json(&format!(
        r#"{{"grid": {{"origin": [-0.5, -0.5], "extent": [1, 1], "cells": [{cells}, {cells}]}},
            "evaluator": "{evaluator}",
            "interface": [{{"normal": [0, 1], "offset": 0, "vertices": [[-0.5, 0], [0.5, 0]], "density": {gamma}}}]}}"#
    ))
    .unwrap()
}

fn c1() -> Outcome {
    let k2 = k_constant(0.0, 1.0, 2)?;
    let k3 = k_constant(0.0, 1.0, 3)?;
    Ok((k2 == 4.0 && k3 == 2.0 * PI, format!("k(2) = {k2}, k(3) = {k3}")))
}

fn c2() -> Outcome {
    let disc = 1e3;
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        for t in [0.5, 1.0, 2.0] {
            let t2 = t * t;
            let numeric = if n == 2 {
                2.0 * integrate_graded(|z| (z * z + t2).powf(-1.5), 0.0, disc, 0.0, 1.5)
            } else {
                let inner = |x: f64| {
                    let top = (disc * disc - x * x).max(0.0).sqrt();
                    integrate_graded(|y| (x * x + y * y + t2).powi(-2), 0.0, top, 0.0, 1.5)
                };
                4.0 * integrate_graded(inner, 0.0, disc, 0.0, 1.5)
            };
            worst = worst.max(rel(numeric, reduced_kernel(n, t)?));
        }
    }
    Ok((worst < 0.01, format!("max relative deviation {worst:.2e} (disc radius {disc})")))
}

fn c3() -> Outcome {
    let w = quartic();
    let mesh = ReducedMesh::default();
    let mut term2 = Vec::new();
    let mut oracle_dev = 0.0f64;
    let mut min_nodes = usize::MAX;
    for (&eps, j) in LADDER.iter().zip(SLAB_J) {
        let t = slab_terms(eps, &w, 2, &mesh)?;
        term2.push(t.interaction / eps.ln().abs());
        oracle_dev = oracle_dev.max(rel(t.interaction, omega(2)? * j));
        min_nodes = min_nodes.min(t.nodes);
    }
    let fit = fit_log_model(&LADDER, &term2)?;
    let alt = fit_loglog_model(&LADDER, &term2)?;
    let limit_ok = rel(fit.limit, 4.0) <= 0.10 && min_nodes >= 10_000 && oracle_dev < 1e-3;
    let mut detail = format!(
        "nodes >= {min_nodes}, quadrature vs frozen J {oracle_dev:.1e}, a + b/L limit {:.4} ({:+.1}%), \
         a(1 + lnL/L) + b/L limit {:.4}",
        fit.limit,
        100.0 * (fit.limit / 4.0 - 1.0),
        alt.limit
    );
    let plan = KernelPlan::default();
    let grid_ok = match grid_record(&slab_scene(128, 4.0, "grid"), 1e-3, &plan) {
        Ok(rec) => {
            let oracle = slab_terms(1e-3, &w, 2, &mesh)?.interaction / 1e-3f64.ln().abs();
            let dev = rel(rec.energy.nonlocal, oracle);
            detail += &format!("; 128^2 grid vs oracle at eps = 1e-3: {:+.1}%", 100.0 * dev);
            dev <= 0.15
        }
        Err(e @ Error::Unresolvable { .. }) => {
            detail += &format!("; 128^2 grid at eps = 1e-3: {e}");
            let eps = 0.1;
            let rec = grid_record(&slab_scene(128, 4.0, "grid"), eps, &plan)?;
            let oracle = slab_terms(eps, &w, 2, &mesh)?.interaction / eps.ln().abs();
            detail += &format!(
                " [diagnostic at eps = {eps} (min resolvable {:.3}): grid {:.4} vs oracle {:.4}]",
                min_resolvable_eps(2.0 / 128.0),
                rec.energy.nonlocal,
                oracle
            );
            false
        }
        Err(e) => return Err(e),
    };
    Ok((limit_ok && grid_ok, detail))
}

fn c4() -> Outcome {
    let plan = KernelPlan::default();
    let mut totals = Vec::new();
    let mut ok = true;
    let mut parts = Vec::new();
    for gamma in [0.0, 2.0, 4.0, 8.0] {
        let out = run_sweep(&slab_scene(64, gamma, "reduced"), &LADDER, &plan)?;
        let total = out.fits["total"].limit;
        let target = 4.0 + (4.0f64 - gamma).abs();
        ok &= rel(total, target) <= 0.10;
        parts.push(format!("g={gamma}: {total:.3} vs {target} ({:+.1}%)", 100.0 * (total / target - 1.0)));
        totals.push((gamma, total));
    }
    let argmin = totals.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    parts.push(format!("argmin g = {argmin}"));
    Ok((ok && argmin == 4.0, parts.join(", ")))
}

fn c5() -> Outcome {
    let plan = KernelPlan::default();
    let w = quartic();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let slab = {
        let grid = Grid::centered_unit(2, 64)?;
        PhaseField::from_fn(grid, 0.0, 1.0, |p| (0.5 - p[1] / 0.1).clamp(0.0, 1.0))?
    };
    let random2 = {
        let grid = Grid::centered_unit(2, 32)?;
        let v = (0..grid.len()).map(|_| rng.gen_range(-0.2..1.2)).collect();
        PhaseField::new(grid, v, 0.0, 1.0)?
    };
    let random3 = {
        let grid = Grid::centered_unit(3, 12)?;
        let v = (0..grid.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
        PhaseField::new(grid, v, 0.0, 1.0)?
    };
    let mut ok = true;
    let mut bits = Vec::new();
    for u in [slab, random2, random3] {
        let all = CellSet::full(u.grid().clone());
        let i = eval_i_field(&u, &all, &plan)?;
        let rho = SurfactantField::new(u.grid().clone(), i.values)?;
        for eps in [1e-2, 1e-5] {
            let e = eval_f_eps(&u, &rho, &all, eps, &w, &plan)?;
            ok &= e.surfactant.to_bits() == 0;
            bits.push(format!("{:#x}", e.surfactant.to_bits()));
        }
    }
    Ok((ok, format!("term 3 bit patterns {}", bits.join(" "))))
}

fn c6() -> Outcome {
    let (zeta, r) = (0.5, 0.25);
    let grid = Grid::centered_unit(2, 256)?;
    let mut exact = Vec::new();
    let mut worst_grid = 0.0f64;
    for &eps in &LADDER {
        let log = eps.ln().abs();
        let rho = surfactant_atom(&grid, &[0.0, 0.0], zeta, eps, r)?;
        let m = atom_mass_exact(zeta, eps, r);
        worst_grid = worst_grid.max(rel(rho.mass(), m));
        exact.push(m / log);
    }
    let mass_fit = fit_log_model(&LADDER, &exact)?;
    let scene = Scene::from_json(
        r#"{"grid": {"origin": [-0.5, -0.5], "extent": [1, 1], "cells": [128, 128]},
            "atoms": [{"x": [0, 0], "mass": 0.5}], "atom_radius": 0.25}"#,
    )?;
    let out = run_sweep(&scene, &LADDER, &KernelPlan::default())?;
    let energy = out.fits["total"].limit;
    let ok = rel(mass_fit.limit, zeta) <= 0.05 && worst_grid <= 0.05 && rel(energy, zeta) <= 0.10;
    Ok((
        ok,
        format!(
            "mass/L limit {:.5}, grid mass vs exact {worst_grid:.1e}, F_eps limit {energy:.5}",
            mass_fit.limit
        ),
    ))
}

fn c7() -> Outcome {
    let grid = Grid::centered_unit(2, 16)?;
    let flat = |g: f64| -> nlphase::Result<PolyhedralInterface> {
        let f = Facet::new(2, 0, &[0.0, 1.0], 0.0, &[vec![-0.5, 0.0], vec![0.5, 0.0]], Some(g))?;
        PolyhedralInterface::new(2, vec![f])
    };
    let mut values = Vec::new();
    for (g, atoms) in [
        (0.0, vec![]),
        (4.0, vec![]),
        (
            8.0,
            vec![Atom {
                x: vec![0.0, 0.25],
                mass: 0.5,
            }],
        ),
    ] {
        let iface = flat(g)?;
        let mu = DiscreteMeasure::on_interface(&grid, &iface, &atoms)?;
        values.push(eval_limit(&iface, &mu, 0.0, 1.0)?.total);
    }
    Ok((values == [8.0, 4.0, 8.5], format!("{values:?}")))
}

fn cylinder_g(kind_cone: bool, r: f64, l: f64, d: f64, res: f64, plan: &KernelPlan) -> nlphase::Result<BoundReport> {
    let cfg = CylinderBound::new(2, r, d, l, res);
    if kind_cone {
        check_bound_cylinder_cone(&cfg, plan)
    } else {
        check_bound_cylinder_complement(&cfg, plan)
    }
}

fn c8() -> Outcome {
    let plan = KernelPlan::default();
    let res = 64.0;
    let ls = [0.2, 0.5, 1.0];
    let mut bounded = true;
    let mut max_ratio = 0.0f64;
    let mut growth = 0.0f64;
    let mut worst_scaling = 0.0f64;
    for cone in [false, true] {
        for r in [0.5, 1.0, 2.0] {
            for quarter in [false, true] {
                let d_of = |l: f64| if quarter { l / 4.0 } else { 0.0 };
                let ratios = ls
                    .iter()
                    .map(|&l| cylinder_g(cone, r, l, d_of(l), res, &plan).map(|rep| rep.ratio))
                    .collect::<nlphase::Result<Vec<_>>>()?;
                let reference = ratios[ratios.len() - 1];
                for q in &ratios {
                    bounded &= q.is_finite() && *q > 0.0 && *q <= 1.1 * reference;
                    max_ratio = max_ratio.max(*q);
                    growth = growth.max(q / reference);
                }
                if r < 2.0 {
                    for &l in &ls {
                        let small = cylinder_g(cone, r, l, d_of(l), res, &plan)?.measured;
                        let large = cylinder_g(cone, 2.0 * r, 2.0 * l, 2.0 * d_of(l), res, &plan)?.measured;
                        worst_scaling = worst_scaling.max(rel(large / small, 2.0));
                    }
                }
            }
        }
    }

    for cone in [false, true] {
        let pair = [CylinderBound::new(3, 0.5, 0.0, 0.5, 24.0), CylinderBound::new(3, 1.0, 0.0, 1.0, 24.0)];
        let g = pair
            .iter()
            .map(|cfg| if cone { check_bound_cylinder_cone(cfg, &plan) } else { check_bound_cylinder_complement(cfg, &plan) })
            .collect::<nlphase::Result<Vec<_>>>()?;
        worst_scaling = worst_scaling.max(rel(g[1].measured / g[0].measured, 4.0));
    }

    let xi = 0.0;
    let mut calibration = Vec::new();
    for r_side in [0.5, 1.0, 2.0] {
        for eps in [1e-3, 1e-4, 1e-5, 1e-6] {
            for r in [0.5, 1.0] {
                calibration.push(SpecialCylinder::centered(2, r_side, 2.0 * r, r, 0.02, 1.0, eps, 0.5));
            }
        }
    }
    let fitted = calibrate_lower_bound(&calibration, xi)?;
    let frozen = LowerBoundConstants {
        xi,
        c_dim: 1.1 * fitted.c_dim,
    };
    let (mut checked, mut lower_ok) = (0, true);
    for r_side in [0.5, 1.0, 2.0] {
        for eps in [3e-4, 3e-5, 3e-6] {
            for lambda in [0.01, 0.04] {
                for theta in [0.25, 0.75] {
                    let cfg = SpecialCylinder::centered(2, r_side, 1.5, 0.75, lambda, 1.0, eps, theta);
                    let rep = check_lower_bound_special_cylinder(&cfg, Some(&frozen))?;
                    if let Some(h) = rep.holds {
                        checked += 1;
                        lower_ok &= h;
                    }
                }
            }
        }
    }
    // Thin slabs at gap θcε/R^{N−1}, and the hypothesis-passing family whose
    // gap also carries the factor (1 − 3λ − 6/|ln ε|).
    let ladder = [1e-3, 1e-4, 1e-5, 1e-6];
    let (mut thin, mut passing) = (Vec::new(), Vec::new());
    for &eps in &ladder {
        let cfg = SpecialCylinder::centered(2, 1.0, 2.0, 1.0, 0.01, 1.0, eps, 0.5);
        passing.push(check_lower_bound_special_cylinder(&cfg, None)?.ratio);
        let gap = 0.5 * eps;
        let cfg = SpecialCylinder {
            a_lo: gap / 2.0,
            b_hi: -gap / 2.0,
            ..cfg
        };
        thin.push(check_lower_bound_special_cylinder(&cfg, None)?.ratio);
    }
    let limit = fit_log_model(&ladder, &thin)?.limit;
    let passing_limit = fit_log_model(&ladder, &passing)?.limit;
    let ok = bounded && worst_scaling <= 0.10 && checked > 0 && lower_ok && rel(limit, 2.0) <= 0.10;
    Ok((
        ok,
        format!(
            "max ratio {max_ratio:.3}, max growth as l shrinks {growth:.3}, R-dilation deviation {:.2}%, \
             C(2) = {:.4}, lower bound held on {checked} configs: {lower_ok}, G/(R L) limit {limit:.4} \
             (hypothesis-passing family {passing_limit:.4})",
            100.0 * worst_scaling,
            frozen.c_dim
        ),
    ))
}

fn c9() -> Outcome {
    let plan = KernelPlan::default();
    let w = quartic();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    for i in 0..10 {
        let slope: f64 = rng.gen_range(0.0..=0.8);
        let margin: f64 = rng.gen_range(0.05..0.3);
        let cfg = MixedInteractionConfig {
            dim: 2,
            r_side: 1.0,
            l: 1.0,
            h0: -slope / 2.0 - margin,
            slope: vec![slope],
            eps: 1e-3,
            resolution: 64.0,
            swap: i % 2 == 1,
        };
        let rep = check_mixed_interaction(&cfg, &w, &plan)?;
        ok &= rep.holds;
        worst = worst.max(rep.lhs / rep.rhs);
    }
    Ok((ok, format!("max lhs/rhs over 10 configs {worst:.4} (slack 1.02)")))
}

fn c10() -> Outcome {
    let plan = KernelPlan::default();
    let w = quartic();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut notes = Vec::new();

    let grid = Grid::centered_unit(2, 24)?;
    let labels: Vec<u8> = (0..grid.len()).map(|_| rng.gen_range(0..4)).collect();
    let set = |k: u8| CellSet::new(grid.clone(), labels.iter().map(|l| *l == k).collect()).unwrap();
    let (a, a2, b) = (set(0), set(1), set(2));
    let s_small = CellSet::from_predicate(grid.clone(), |p| p[0] < 0.2);
    let full = CellSet::full(grid.clone());
    let g_ab = eval_g(&a, &b, &full, &plan)?;
    let g_ba = eval_g(&b, &a, &full, &plan)?;
    let g_a2b = eval_g(&a2, &b, &full, &plan)?;
    let g_union = eval_g(&a.union(&a2)?, &b, &full, &plan)?;
    let g_small = eval_g(&a, &b, &s_small, &plan)?;
    let symmetric = rel(g_ab, g_ba) < 1e-12;
    let additive = rel(g_ab + g_a2b, g_union) < 1e-12;
    let monotone = g_ab <= g_union && g_small <= g_ab;
    notes.push(format!("G sym/add/mono {symmetric}/{additive}/{monotone}"));

    let v: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-0.1..1.1)).collect();
    let u = PhaseField::new(grid.clone(), v, 0.0, 1.0)?;
    let rho_v: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..20.0)).collect();
    let rho = SurfactantField::new(grid.clone(), rho_v)?;
    let (e1, e2) = (1e-2, 1e-4);
    let f1 = eval_f_eps(&u, &rho, &full, e1, &w, &plan)?;
    let f2 = eval_f_eps(&u, &rho, &full, e2, &w, &plan)?;
    let (l1, l2) = (e1.ln().abs(), e2.ln().abs());
    let tol = 4.0 * f64::EPSILON;
    let scaling = rel(f1.potential * e1, f2.potential * e2) <= tol
        && rel(f1.nonlocal * l1, f2.nonlocal * l2) <= tol
        && rel(f1.surfactant * l1, f2.surfactant * l2) <= tol;
    notes.push(format!("eps scaling {scaling}"));

    let zero = SurfactantField::zero(grid.clone());
    let f = eval_f_eps(&u, &zero, &full, e1, &w, &plan)?;
    let fs = eval_f_eps(&u.swapped(), &zero, &full, e1, &w, &plan)?;
    let swap = rel(f.potential, fs.potential) < 1e-12 && rel(f.nonlocal, fs.nonlocal) < 1e-12;
    notes.push(format!("phase swap {swap}"));

    let big = Grid::centered_unit(2, 48)?;
    let ub = PhaseField::from_fn(big.clone(), 0.0, 1.0, |p| (0.5 + 3.0 * p[0] * p[1] + (9.0 * p[1]).sin() / 3.0).clamp(0.0, 1.0))?;
    let rb = SurfactantField::new(big.clone(), (0..big.len()).map(|i| (i % 7) as f64).collect())?;
    let all_b = CellSet::full(big.clone());
    let top = CellSet::from_predicate(big.clone(), |p| p[1] > 0.1);
    let bottom = CellSet::from_predicate(big.clone(), |p| p[1] < -0.2);
    let fingerprint = |plan: &KernelPlan| -> nlphase::Result<Vec<u64>> {
        let e = eval_f_eps(&ub, &rb, &all_b, 1e-3, &w, plan)?;
        let g = eval_g(&top, &bottom, &all_b, plan)?;
        let i = eval_i_field(&ub, &all_b, plan)?;
        let mut out = vec![e.total.to_bits(), e.surfactant.to_bits(), g.to_bits()];
        out.extend(i.values.iter().map(|v| v.to_bits()));
        Ok(out)
    };
    let base = fingerprint(&plan.with_threads(1))?;
    let mut deterministic = true;
    for threads in [2, 8] {
        for tile in [1, 100, 4096] {
            deterministic &= fingerprint(&plan.with_threads(threads).with_tile(tile))? == base;
        }
    }
    notes.push(format!("threads 1/2/8 bit-identical {deterministic}"));

    let separated = |n: usize| -> nlphase::Result<f64> {
        let g = Grid::centered_unit(2, n)?;
        let a = CellSet::from_predicate(g.clone(), |p| p[1] > 0.125);
        let b = CellSet::from_predicate(g.clone(), |p| p[1] < -0.125);
        eval_g(&a, &b, &CellSet::full(g), &plan)
    };
    let drift = rel(separated(128)?, separated(64)?);
    let refinement = drift < 0.02;
    notes.push(format!("refinement drift {:.2}%", 100.0 * drift));

    Ok((
        symmetric && additive && monotone && scaling && swap && deterministic && refinement,
        notes.join(", "),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("constant law", c1),
        ("reduced-kernel identity", c2),
        ("slab limit", c3),
        ("surface-tension V-law", c4),
        ("exact cancellation", c5),
        ("atom scenario", c6),
        ("limit-functional arithmetic", c7),
        ("interaction bound suite", c8),
        ("mixed-interaction inequality", c9),
        ("property suites", c10),
    ];
    let only: Vec<usize> = std::env::var("NLPHASE_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
