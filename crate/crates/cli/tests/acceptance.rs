//! One pass/fail line per acceptance criterion. Run with `--nocapture` to
//! see the table; the test fails if any criterion fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use hypcert::geometry::{
    angle_sums, cofactors, dihedral_angle, gram_data, jacobian, lengths_from_params, params_from_lengths,
    vertex_angle, Mat4,
};
use hypcert::gimbal::{cocycle_closure, gimbal_lock_check, prism_holonomy, probe_partitions, CellKind, CocycleLabels};
use hypcert::interval::interval_matrix_invertible;
use hypcert::pipeline::run_pipeline;
use hypcert::triangulation::{EdgeEnd, TriangulationFile};
use hypcert::verify::{krawczyk_operator, residual, select_submatrix, CertifyOptions};
use hypcert::{Interval, IntervalMatrix, Triangulation};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const HYPERBOLIC: [&str; 3] = ["m004_1_2", "s891_m1_4", "v3226_m5_1"];
const SPHERE: &str = "s3_two_tet";
const SPHERE_MOVED: &str = "s3_one_four_moves";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.tri"))
}

fn fixture(name: &str) -> TriangulationFile {
    Triangulation::parse(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn with_params(name: &str) -> (Triangulation, Vec<f64>) {
    let f = fixture(name);
    let nu = params_from_lengths(f.lengths.as_ref().unwrap());
    (f.triangulation, nu)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hypcert(args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_hypcert")).args(args).output().unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn intervals(v: &Value) -> Result<Vec<Interval>, String> {
    v.as_array()
        .ok_or("missing intervals")?
        .iter()
        .map(|p| {
            let (lo, hi) = (p[0].as_str().unwrap_or(""), p[1].as_str().unwrap_or(""));
            Interval::from_decimal_pair(lo, hi).map_err(|e| e.to_string())
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut worst = (0.0f64, Duration::ZERO);
    for name in HYPERBOLIC {
        let start = Instant::now();
        let (code, out) = hypcert(&["certify", fixture_path(name).to_str().unwrap(), "--json"]);
        let elapsed = start.elapsed();
        ensure(code == 0, || format!("{name}: exit {code}"))?;
        ensure(elapsed < Duration::from_secs(60), || format!("{name}: {elapsed:?}"))?;
        let json: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(json["verdict"] == "VERIFIED", || format!("{name}: {}", json["verdict"]))?;
        let nu = intervals(&json["nu"])?;
        let theta = intervals(&json["theta"])?;
        let w = nu.iter().map(|x| x.width()).fold(0.0, f64::max);
        ensure(w < 1e-8, || format!("{name}: ν width {w:e}"))?;
        ensure(theta.iter().all(|x| x.encloses(Interval::TWO_PI)), || format!("{name}: Θ misses 2π"))?;
        worst = (worst.0.max(w), worst.1.max(elapsed));
    }
    Ok(format!("3 fixtures VERIFIED, max ν width {:.1e}, slowest {:?}", worst.0, worst.1))
}

fn failing_step(summary: &str) -> Option<String> {
    let last = summary.lines().last()?;
    last.strip_prefix("NOT VERIFIED (step ")?.strip_suffix(')').map(str::to_string)
}

fn criterion_2() -> Outcome {
    let sphere = fixture_path(SPHERE);
    for seed in 0..100 {
        let s = seed.to_string();
        let (code, _) = hypcert(&["certify", sphere.to_str().unwrap(), "--seed", &s]);
        ensure(code != 0, || format!("S³ seed {seed} exited 0"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut r = rng(2);
    let mut runs = 0;
    let mut names = HYPERBOLIC.to_vec();
    names.push(SPHERE_MOVED);
    for name in names {
        let (t, nu) = with_params(name);
        let mut done = 0;
        while done < 10 {
            let scale = if name == SPHERE_MOVED { 1e-6 } else { 0.1 };
            let p: Vec<f64> = nu.iter().map(|v| v + r.random_range(-scale..scale) * (-1.0 - v).min(1.0)).collect();
            if residual(&t, &p).is_none() {
                continue;
            }
            let file = dir.path().join(format!("{name}_{done}.tri"));
            std::fs::write(&file, t.to_text(Some(&lengths_from_params(&p)))).map_err(|e| e.to_string())?;
            let (code, out) = hypcert(&["certify", file.to_str().unwrap()]);
            ensure(code != 0, || format!("perturbed {name} exited 0"))?;
            let step = failing_step(&out);
            ensure(matches!(step.as_deref(), Some("II" | "IV")), || format!("perturbed {name} failed at {step:?}"))?;
            done += 1;
            runs += 1;
        }
    }
    Ok(format!("100 S³ seeds and {runs} perturbed inputs, none VERIFIED; perturbed ones fail at II or IV"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut names = HYPERBOLIC.to_vec();
    names.push(SPHERE_MOVED);
    for name in names {
        let (t, nu0) = with_params(name);
        let m = t.num_edges();
        let mut r = rng(3);
        let mut done = 0;
        while done < 50 {
            let nu: Vec<f64> = nu0.iter().map(|v| v * (1.0 + r.random_range(-0.01..0.01))).collect();
            let Ok(j) = jacobian(&t, &nu) else { continue };
            if gram_data(&t, &nu).is_err() {
                continue;
            }
            let mut cols = Vec::with_capacity(m);
            for c in 0..m {
                let h = 1e-6 * (-1.0 - nu[c]).min(1.0);
                let at = |s: f64| {
                    let mut w = nu.clone();
                    w[c] += s;
                    angle_sums(&t, &w)
                };
                let (Ok(p), Ok(q)) = (at(h), at(-h)) else { break };
                cols.push((0..m).map(|row| (p[row] - q[row]) / (2.0 * h)).collect::<Vec<_>>());
            }
            if cols.len() < m {
                continue;
            }
            for (c, col) in cols.iter().enumerate() {
                for (row, fd) in col.iter().enumerate() {
                    let rel = (j[row][c] - fd).abs() / j[row][c].abs().max(1.0);
                    ensure(rel <= 1e-5, || format!("{name}: entry ({row},{c}) relative error {rel:e}"))?;
                    worst = worst.max(rel);
                }
            }
            done += 1;
        }
    }
    Ok(format!("4 fixtures × 50 points, max relative error {worst:.1e} ≤ 1e-5"))
}

fn regular(v: f64) -> Mat4<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { -1.0 } else { v }))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let v = -1.0 - 10f64.powf(r.random_range(-4.0..4.0));
        let g = regular(v);
        let c = cofactors(&g);
        let theta = dihedral_angle(&c, 0, 1).ok_or("θ undefined")?;
        let eta = vertex_angle(&g, 0, 1, 2).ok_or("η undefined")?;
        let dt = (theta - (-v / (1.0 - 2.0 * v)).acos()).abs();
        let de = (eta - (v / (v - 1.0)).acos()).abs();
        ensure(dt < 1e-10 && de < 1e-10, || format!("v = {v}: Δθ {dt:e}, Δη {de:e}"))?;
        worst = worst.max(dt).max(de);
    }
    let g = regular(-1.0001);
    let c = cofactors(&g);
    let dt = (dihedral_angle(&c, 0, 1).unwrap() - (1.0f64 / 3.0).acos()).abs();
    let de = (vertex_angle(&g, 0, 1, 2).unwrap() - PI / 3.0).abs();
    ensure(dt < 1e-3 && de < 1e-3, || format!("limits off by {dt:e}, {de:e}"))?;
    Ok(format!("100 v, max deviation {worst:.1e} ≤ 1e-10; limits within {:.1e}", dt.max(de)))
}

fn criterion_5() -> Outcome {
    let mut cells = 0;
    let mut worst = 0.0f64;
    let all = [HYPERBOLIC[0], HYPERBOLIC[1], HYPERBOLIC[2], SPHERE_MOVED, SPHERE];
    for name in all {
        let f = fixture(name);
        let nu = f.lengths.as_deref().map(params_from_lengths).unwrap_or(vec![-(1.0f64).cosh(); f.triangulation.num_edges()]);
        let boxed: Vec<Interval> = nu.iter().map(|&v| Interval::point(v)).collect();
        let labels = CocycleLabels::new(&f.triangulation, &boxed).map_err(|e| e.to_string())?;
        for c in cocycle_closure(&f.triangulation, &labels) {
            let ok = c.pgl2 && (c.cell.kind != CellKind::SmallHexagon || c.so3 == Some(true));
            ensure(ok, || format!("{name}: {:?} does not close", c.cell.kind))?;
            worst = worst.max(c.width);
            cells += 1;
        }
    }
    Ok(format!("{cells} cells on 5 fixtures enclose Id, max width {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut ends = 0;
    for name in HYPERBOLIC {
        let (t, nu) = with_params(name);
        let out = run_pipeline(&t, &nu, &CertifyOptions::default());
        let g = out.gimbal.as_ref().ok_or(format!("{name}: no gimbal check"))?;
        ensure(g.at_two_pi.iter().all(|x| x.contains_zero()), || format!("{name}: g(2π) excludes 0"))?;
        ensure(g.at_delta.iter().all(|x| x.contains_zero()), || format!("{name}: g(δ) excludes 0"))?;
        let b = out.certified.as_ref().ok_or("no box")?;
        let theta = out.theta.as_ref().ok_or("no angle sums")?;
        let labels = CocycleLabels::new(&t, &b.nu).map_err(|e| e.to_string())?;
        for (class, &th) in theta.iter().enumerate() {
            for end in 0..2 {
                let h = prism_holonomy(&t, &labels, EdgeEnd { class, end });
                let rz = hypcert::gimbal::rot_z(th);
                let meets = (0..3).all(|i| (0..3).all(|j| h.0[i][j].intersects(rz.0[i][j])));
                ensure(meets && h.encloses_identity(), || format!("{name}: holonomy of edge {class}"))?;
                ends += 1;
            }
        }
    }
    Ok(format!("g(2π) ∋ 0 and g(δ) ∋ 0 on 3 fixtures; {ends} prism holonomies ∋ R_Θ and Id"))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    for k in 0..1000 {
        let mut vals: Vec<f64> = (0..400).map(|i| (i as f64 + r.random_range(0.0..0.5)) / 400.0).collect();
        vals.shuffle(&mut r);
        let vals: Vec<f64> = vals.into_iter().map(|v| if r.random_bool(0.5) { -v } else { v }).collect();
        let m = DMatrix::from_vec(20, 20, vals);
        let h = 1 + k % 20;
        let (rows, cols) = select_submatrix(&m, h).map_err(|e| e.to_string())?;
        let mut pr: Vec<usize> = (0..20).collect();
        let mut pc: Vec<usize> = (0..20).collect();
        pr.shuffle(&mut r);
        pc.shuffle(&mut r);
        let pm = DMatrix::from_fn(20, 20, |i, j| m[(pr[i], pc[j])]);
        let (prow, pcol) = select_submatrix(&pm, h).map_err(|e| e.to_string())?;
        let mut back_r: Vec<usize> = prow.iter().map(|&i| pr[i]).collect();
        let mut back_c: Vec<usize> = pcol.iter().map(|&j| pc[j]).collect();
        back_r.sort_unstable();
        back_c.sort_unstable();
        ensure(back_r == rows && back_c == cols, || format!("matrix {k}: permutation changed the choice"))?;
        let (trow, tcol) = select_submatrix(&m.transpose(), h).map_err(|e| e.to_string())?;
        ensure(trow == cols && tcol == rows, || format!("matrix {k}: transposition changed the choice"))?;
    }
    Ok("1000 random 20×20 matrices, invariant under permutation and transposition".into())
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut planted = 0;
    for k in 0..2000 {
        let n = 2 + k % 6;
        let mut m = DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0));
        let coeffs: Vec<f64> = (0..n - 1).map(|_| r.random_range(-1.0..1.0)).collect();
        for row in 0..n {
            m[(row, n - 1)] = (0..n - 1).map(|j| coeffs[j] * m[(row, j)]).sum();
        }
        let rad = 10f64.powi(-(2 + (k % 10) as i32));
        let offset: f64 = r.random_range(-0.5..0.5);
        let enc = IntervalMatrix::from_fn(n, n, |i, j| Interval::around(m[(i, j)] + offset * rad, rad * 1.6));
        ensure(enc.contains_point(&m), || "planted member outside the box".into())?;
        ensure(!interval_matrix_invertible(&enc), || format!("singular member certified (n = {n}, radius {rad:e})"))?;
        planted += 1;
    }
    let id = IntervalMatrix::from_fn(5, 5, |i, j| Interval::point(if i == j { 1.0 } else { 0.0 }));
    ensure(interval_matrix_invertible(&id), || "identity not certified".into())?;
    let zero = IntervalMatrix::from_fn(5, 5, |_, _| Interval::point(0.0));
    ensure(!interval_matrix_invertible(&zero), || "zero matrix certified".into())?;
    Ok(format!("{planted} boxes with planted singular members refused; Id accepted, 0 refused"))
}

fn criterion_9() -> Outcome {
    let (t, nu) = with_params(HYPERBOLIC[0]);
    let report = probe_partitions(&t, &nu, 100_000, 0).map_err(|e| e.to_string())?;
    ensure(report.exhaustive, || "scan not exhaustive".into())?;
    let avoiding = report.avoiding(1e-6).count();
    ensure(avoiding >= 1, || "no lock-avoiding partition".into())?;
    let coincident: Vec<_> = report.rows.iter().filter(|r| r.fixed_points_coincide == Some(true)).collect();
    for row in &coincident {
        ensure(row.sigma_min.is_some_and(|s| s < 1e-6), || format!("{:?} not locked", row.sim))?;
    }
    let out = run_pipeline(&t, &nu, &CertifyOptions::default());
    let b = out.certified.as_ref().ok_or("no certified box")?;
    let theta = out.theta.as_ref().ok_or("no angle sums")?;
    for row in &coincident {
        let g = gimbal_lock_check(&t, &b.nu, theta, &row.sim).map_err(|e| e.to_string())?;
        ensure(!g.avoided, || format!("{:?} passed the rigorous test", row.sim))?;
    }
    Ok(format!(
        "m004_1_2: {} partitions, {avoiding} avoid lock, {} with a shared axis all locked",
        report.rows.len(),
        coincident.len()
    ))
}

#[allow(clippy::approx_constant)]
fn criterion_10() -> Outcome {
    let x0 = [1.4142];
    let x = [Interval::new(1.41, 1.42).unwrap()];
    let fx0 = [Interval::point(1.4142).sqr() - Interval::point(2.0)];
    let jx = IntervalMatrix::from_fn(1, 1, |_, _| Interval::point(2.0) * x[0]);
    let c = DMatrix::from_element(1, 1, 0.35356);
    let k = krawczyk_operator(&x0, &x, &fx0, &jx, &c)[0];
    ensure(Interval::new(1.41418, 1.41425).unwrap().encloses(k), || format!("K = {k:?}"))?;
    ensure(x[0].interior_encloses(k), || "K not interior".into())?;
    Ok(format!("K = [{:.6}, {:.6}] ⊂ [1.41418, 1.41425] ⊂ int [1.41, 1.42]", k.lo(), k.hi()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("end-to-end certification", criterion_1),
        ("soundness negatives", criterion_2),
        ("Jacobian against finite differences", criterion_3),
        ("regular-simplex closed forms", criterion_4),
        ("cocycle closure", criterion_5),
        ("gimbal function at 2π and δ, prism holonomy", criterion_6),
        ("pivoting stability", criterion_7),
        ("interval invertibility soundness", criterion_8),
        ("gimbal probe", criterion_9),
        ("Krawczyk on x² − 2", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (title, f)) in criteria.iter().enumerate() {
        let n = k + 1;
        match f() {
            Ok(detail) => println!("criterion {n}: PASS {title}: {detail}"),
            Err(why) => {
                println!("criterion {n}: FAIL {title}: {why}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
