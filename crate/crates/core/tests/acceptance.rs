//! Acceptance suite. Each criterion runs in isolation and prints one line;
//! the test fails at the end if any criterion failed.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vecpart::arrangement::{config_from_i64, delta, make_face, Arrangement, VectorConfig};
use vecpart::decomp::{
    bigcell_piece, f_decomposition, localize, paradan_decomposition, projector, verify_decomposition, wall_crossing,
};
use vecpart::error::Error;
use vecpart::exactlin::{rat, IntVector, RatVector};
use vecpart::latfun::{
    check_dm_membership, check_fx_membership, delta0, kernel_pf, nabla_list, partition_function, LatticeFunction,
    Window,
};
use vecpart::spline::{
    derivative_identity_check, fit_poly_piece, spline_bigcell, spline_eval, spline_wall_crossing, SplineEvaluator,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn abc() -> Arrangement {
    Arrangement::new(config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap())
}

fn tope_at(arr: &Arrangement, x: &[i64]) -> usize {
    arr.tope_of(&RatVector::from_i64(x)).expect("point off the hyperplanes")
}

fn q(n: i64) -> BigRational {
    rat(n, 1)
}

fn same_on(a: &LatticeFunction, b: &LatticeFunction, w: &Window) -> Result<usize, String> {
    for p in w.points() {
        let (x, y) = (a.eval(p), b.eval(p));
        if x != y {
            return Err(format!("differ at {p}: {x} vs {y}"));
        }
    }
    Ok(w.points().len())
}

// The four 1-D functions for X = [2, -1]: 1, n, the parity-corrected half
// ceil(n/2), and its truncation to n >= 0.
fn theta(k: usize) -> LatticeFunction {
    LatticeFunction::new(1, move |x| {
        let n = x[0].clone();
        let half = BigRational::new(n.clone() + if &n % 2 == BigInt::zero() { 0 } else { 1 }, BigInt::from(2));
        match k {
            1 => BigRational::one(),
            2 => BigRational::from_integer(n),
            3 => half,
            _ if n.is_negative() => BigRational::zero(),
            _ => half,
        }
    })
}

fn criterion_1() -> Outcome {
    let arr = Arrangement::new(config_from_i64(1, &[&[2], &[-1]]).unwrap());
    let (cfg, poset) = (arr.config(), arr.poset());
    let w = Window::radius(1, 12);
    for k in 1..=3 {
        ensure!(check_dm_membership(cfg, poset, &theta(k), &w).passed, "theta{k} fails DM membership");
    }
    ensure!(check_fx_membership(cfg, poset, &theta(4), &w).passed, "theta4 fails F(X) membership");
    ensure!(!check_dm_membership(cfg, poset, &theta(4), &w).passed, "theta4 passes DM membership");
    // -P^F for u > 0 counts (h1, h2) >= 0 with 2 h1 + h2 = n - 1.
    let face = make_face(cfg, poset.zero(), &RatVector::from_i64(&[1])).map_err(|e| e.to_string())?;
    let k = kernel_pf(cfg, &face);
    for n in -12i64..=12 {
        let mut expected = 0i64;
        for h1 in 0..=20i64 {
            for h2 in 0..=30i64 {
                if 2 * h1 + h2 == n - 1 {
                    expected += 1;
                }
            }
        }
        let t4 = theta(4).eval_i64(&[n]);
        ensure!(t4 == q(expected), "theta4({n}) = {t4}, enumeration gives {expected}");
        ensure!(k.eval_i64(&[n]) == -t4.clone(), "kernel({n}) = {} but -theta4 = {}", k.eval_i64(&[n]), -t4);
    }
    let d = delta(cfg);
    ensure!(d == BigInt::from(3), "delta = {d}");
    Ok("theta1..3 in DM, theta4 in F(X) only, kernel = -theta4 on [-12,12], delta = 3".into())
}

fn criterion_2() -> Outcome {
    let arr = abc();
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for n1 in 0..=8i64 {
        for n2 in 0..=8i64 {
            let mut count = 0i64;
            for a in 0..=8 {
                for b in 0..=8 {
                    for c in 0..=8 {
                        if a + c == n1 && b + c == n2 {
                            count += 1;
                        }
                    }
                }
            }
            let v = px.eval_i64(&[n1, n2]);
            ensure!(v == q(count), "P({n1},{n2}) = {v}, oracle {count}");
            ensure!(count == n1.min(n2) + 1, "oracle disagrees with min+1 at ({n1},{n2})");
            checked += 1;
        }
    }
    let w = Window::radius(2, 6);
    let nx = nabla_list(arr.config().vectors(), &px);
    same_on(&nx, &delta0(2), &w)?;
    Ok(format!("{checked} points of [0,8]^2 match the triple loop; nabla_X P_X = delta_0 on [-6,6]^2"))
}

fn criterion_3() -> Outcome {
    let arr = abc();
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let w = Window::radius(2, 8);
    let t1 = localize(&arr, &px, tope_at(&arr, &[2, 1]), &w).map_err(|e| e.to_string())?;
    let t2 = localize(&arr, &px, tope_at(&arr, &[1, 2]), &w).map_err(|e| e.to_string())?;
    ensure!(t1.q.render() == "n2 + 1", "tau1 piece {}", t1.q.render());
    ensure!(t2.q.render() == "n1 + 1", "tau2 piece {}", t2.q.render());
    let mut checked = 0;
    for t in 0..arr.topes().len() {
        let l = localize(&arr, &px, t, &w).map_err(|e| e.to_string())?;
        for p in w.points() {
            if !arr.in_tope_minus_zonotope(t, &p.to_rat()) {
                continue;
            }
            checked += 1;
            let (a, b) = (l.q.evaluate(p).map_err(|e| e.to_string())?, px.eval(p));
            ensure!(a == b, "tope {t} at {p}: localized {a}, P_X {b}");
        }
    }
    Ok(format!("pieces n2 + 1 and n1 + 1; f = f^tau at {checked} region points over all topes"))
}

fn criterion_4() -> Outcome {
    let arr = abc();
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let w = Window::radius(2, 8);
    let (t1, t2) = (tope_at(&arr, &[2, 1]), tope_at(&arr, &[1, 2]));
    let wall = arr
        .walls()
        .iter()
        .find(|wl| (wl.tope_a, wl.tope_b) == (t1, t2) || (wl.tope_a, wl.tope_b) == (t2, t1))
        .ok_or("no wall between tau1 and tau2")?;
    let flip = wall.tope_a != t1;
    let wc = wall_crossing(&arr, &px, wall.id, flip, &w).map_err(|e| e.to_string())?;
    ensure!(wc.lhs.render() == "-n1 + n2", "lhs is {}", wc.lhs.render());
    ensure!(wc.report.passed, "report failed: {:?}", wc.report.identity.witness);
    for p in w.points() {
        let (a, b) = (wc.lhs.evaluate(p).map_err(|e| e.to_string())?, wc.rhs.eval(p));
        ensure!(a == b, "at {p}: lhs {a}, rhs {b}");
        let v = p.to_i64().unwrap();
        ensure!(a == q(v[1] - v[0]), "lhs at {p} is {a}");
    }
    let dm = check_dm_membership(arr.config(), arr.poset(), &wc.lhs.to_function(), &w);
    ensure!(dm.passed, "lhs not in DM: {:?}", dm.violation);
    Ok(format!("lhs n2 - n1 = rhs at {} points of [-8,8]^2; lhs in DM(X)", w.points().len()))
}

fn criterion_5() -> Outcome {
    let arr = abc();
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let w = Window::radius(2, 8);
    let coll = arr.nonpositive_collection(tope_at(&arr, &[2, 1]));
    let dec = f_decomposition(&arr, &px, &coll, &w).map_err(|e| e.to_string())?;
    same_on(&dec.total(), &px, &w)?;
    let rep = verify_decomposition(&dec, &w);
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    for needed in ["sum-equals-source", "support-certificate", "components-in-DM", "recurrence"] {
        ensure!(names.contains(&needed), "check {needed} missing from {names:?}");
    }
    for c in &rep.checks {
        ensure!(c.passed, "{} failed: {:?}", c.name, c.witness);
    }
    Ok(format!("{} components sum to P_X on [-8,8]^2; checks {names:?} pass", dec.components.len()))
}

fn criterion_6() -> Outcome {
    let arr = abc();
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let w = Window::range(2, 0, 10);
    let d = paradan_decomposition(&arr, &RatVector::from_i64(&[2, 1]), None, &w).map_err(|e| e.to_string())?;
    same_on(&d.total(), &px, &w)?;
    let d2 = paradan_decomposition(&arr, &RatVector::from_i64(&[-1, -2]), None, &w).map_err(|e| e.to_string())?;
    let nz = d2.nonzero_components();
    ensure!(nz == vec![arr.poset().zero().id], "beta = (-1,-2) leaves components {nz:?}");
    same_on(&d2.total(), &px, &w)?;
    Ok(format!(
        "beta (2,1): {} components sum to P_X on [0,10]^2; beta (-1,-2): only r = {{0}} survives",
        d.components.len()
    ))
}

fn x4_count(g: &[i64]) -> i64 {
    // a e1 + b e2 + c e3 + k (e1 + e2 + e3) = g, all coefficients >= 0
    let mut n = 0;
    for k in 0..=g.iter().copied().max().unwrap_or(0).max(0) {
        if g.iter().all(|&gi| gi - k >= 0) {
            n += 1;
        }
    }
    n
}

fn criterion_7() -> Outcome {
    let cfg = config_from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]).unwrap();
    let d = delta(&cfg);
    ensure!(d == BigInt::from(4), "delta = {d}");
    let arr = Arrangement::new(cfg);
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let w = Window::radius(3, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut summary = Vec::new();
    for (c, cell) in arr.big_cells().iter().enumerate() {
        let piece = bigcell_piece(&arr, &px, c, &w).map_err(|e| format!("cell {c}: {e}"))?;
        let mut sampled = 0;
        let mut attempts = 0;
        while sampled < 50 {
            attempts += 1;
            ensure!(attempts < 200_000, "cell {c}: could not find 50 points");
            let g: Vec<i64> = (0..3).map(|_| rng.gen_range(-10..=10)).collect();
            let p = IntVector::from_i64(&g);
            if !cell.tope_ids.iter().any(|&t| arr.in_tope_minus_zonotope(t, &p.to_rat())) {
                continue;
            }
            sampled += 1;
            let v = piece.evaluate(&p).map_err(|e| e.to_string())?;
            let oracle = x4_count(&g);
            ensure!(v == q(oracle), "cell {c} at {p}: piece {v}, oracle {oracle}");
        }
        summary.push(format!("{}:{}", cell.tope_ids.len(), piece.render()));
    }
    Ok(format!("delta = 4; cells (topes:piece) {}; 50 oracle points each", summary.join(", ")))
}

fn criterion_8() -> Outcome {
    let arr = abc();
    let px = partition_function(arr.config()).map_err(|e| e.to_string())?;
    let coll = arr.nonpositive_collection(tope_at(&arr, &[2, 1]));
    let w = Window::radius(2, 3);
    let ids: Vec<usize> = arr.poset().all().iter().map(|r| r.id).collect();
    let whole = arr.poset().whole().id;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut compositions = 0;
    for trial in 0..5 {
        // f = sum_r c_r * (r-component of g) + a linear polynomial, where g
        // mixes P_X with the kernel of a random regular face at {0}.
        let u = loop {
            let u: Vec<i64> = (0..2).map(|_| rng.gen_range(-4..=4)).collect();
            if arr.config().vectors().iter().all(|a| !a.dot(&IntVector::from_i64(&u)).is_zero()) {
                break u;
            }
        };
        let face = make_face(arr.config(), arr.poset().zero(), &RatVector::from_i64(&u)).map_err(|e| e.to_string())?;
        let g = px.add(&kernel_pf(arr.config(), &face).scale(q(rng.gen_range(-2..=2))));
        let dec = f_decomposition(&arr, &g, &coll, &w).map_err(|e| e.to_string())?;
        let coeffs: Vec<i64> = ids.iter().map(|_| rng.gen_range(-3..=3)).collect();
        let lin: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
        let linear = LatticeFunction::new(2, move |x| {
            BigRational::from_integer(BigInt::from(lin[0]) + &x[0] * lin[1] + &x[1] * lin[2])
        });
        let mut known: Vec<LatticeFunction> = ids
            .iter()
            .map(|&r| dec.component(r).realized.scale(q(coeffs[r])))
            .collect();
        known[whole] = known[whole].add(&linear);
        let f = LatticeFunction::sum(2, &known);
        for &r in &ids {
            let pr = projector(&arr, &f, r, &coll, &w).map_err(|e| e.to_string())?.realized;
            same_on(&pr, &known[r], &w).map_err(|e| format!("trial {trial}: P_{r} f: {e}"))?;
            for &t in &ids {
                let ptr = projector(&arr, &pr, t, &coll, &w).map_err(|e| e.to_string())?.realized;
                compositions += 1;
                if t == r {
                    same_on(&ptr, &pr, &w).map_err(|e| format!("trial {trial}: P_{r} P_{r}: {e}"))?;
                } else {
                    same_on(&ptr, &vecpart::latfun::zero_function(2), &w)
                        .map_err(|e| format!("trial {trial}: P_{t} P_{r}: {e}"))?;
                }
            }
        }
    }
    Ok(format!("5 random elements; P_r f recovers each known component; {compositions} compositions checked"))
}

fn random_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigRational {
    rat(rng.gen_range(lo * 12..=hi * 12), rng.gen_range(1..=12))
}

fn criterion_9() -> Outcome {
    let arr = abc();
    let cfg: &VectorConfig = arr.config();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let x = RatVector::new(vec![random_rat(&mut rng, -5, 5), random_rat(&mut rng, -5, 5)]);
        let v = spline_eval(cfg, &x).map_err(|e| e.to_string())?;
        let m = x.0[0].clone().min(x.0[1].clone());
        let expected = if m.is_negative() { BigRational::zero() } else { m };
        ensure!(v == expected, "T({x}) = {v}, min oracle {expected}");
    }
    let ev = SplineEvaluator::new(cfg).map_err(|e| e.to_string())?;
    for (x, want) in [([2, 1], "v2"), ([1, 2], "v1"), ([-1, 2], "0"), ([-2, -1], "0"), ([2, -1], "0")] {
        let p = fit_poly_piece(&arr, &ev, tope_at(&arr, &x), 9).map_err(|e| e.to_string())?;
        ensure!(p.polynomial.render("v") == want, "piece at {x:?} is {}", p.polynomial.render("v"));
    }
    let mut wall_samples = 0;
    for wall in 0..arr.walls().len() {
        let r = spline_wall_crossing(&arr, wall, 20, 9).map_err(|e| e.to_string())?;
        ensure!(r.passed && r.samples == 20, "wall {wall}: {:?} after {} samples", r.witness, r.samples);
        wall_samples += r.samples;
    }
    for c in 0..arr.big_cells().len() {
        spline_bigcell(&arr, &ev, c, 9).map_err(|e| format!("cell {c}: {e}"))?;
    }
    let degree = cfg.len() - cfg.dim();
    for _ in 0..20 {
        let x = RatVector::new(vec![random_rat(&mut rng, -5, 5), random_rat(&mut rng, -5, 5)]);
        let lambda = rat(rng.gen_range(1..=30), rng.gen_range(1..=7));
        let (a, b) = (ev.eval(&x.scale(&lambda)), ev.eval(&x) * num::pow(lambda.clone(), degree));
        ensure!(a == b, "T({lambda} x) != {lambda}^{degree} T(x) at x = {x}");
    }
    let d = derivative_identity_check(&arr, &[0, 1], 10, 9).map_err(|e| e.to_string())?;
    ensure!(d.passed && d.spanning, "derivative identity: {:?}", d.witness);
    let c = RatVector::from_i64(&[1, 1]);
    for t in 0..arr.topes().len() {
        let g = fit_poly_piece(&arr, &ev, t, 9).map_err(|e| e.to_string())?.polynomial.directional_derivative(&c);
        let w = &arr.tope(t).witness;
        let quadrant = if w.0.iter().all(|v| v.is_positive()) { BigRational::one() } else { BigRational::zero() };
        ensure!(g.eval_vec(w) == quadrant, "d_c piece on tope {t} is {}", g.render("v"));
    }
    Ok(format!(
        "30 min-oracle points; pieces v2 / v1 / 0; {wall_samples} wall samples over {} walls; big cells agree; \
         homogeneity degree {degree} on 20 pairs; d_c piece = T_[e1,e2]",
        arr.walls().len()
    ))
}

fn criterion_10() -> Outcome {
    let bad = config_from_i64(1, &[&[2], &[-1]]).unwrap();
    match partition_function(&bad) {
        Err(Error::NotPointed) => {}
        other => return Err(format!("[2,-1] gave {:?}", other.map(|_| ()))),
    }
    let arr = abc();
    let diag = arr.poset().find_by_members(&[2]).ok_or("no diagonal subspace")?.id;
    match paradan_decomposition(&arr, &RatVector::from_i64(&[1, 1]), None, &Window::range(2, 0, 4)) {
        Err(e @ Error::NotGeneric { subspace, .. }) => {
            ensure!(subspace == diag, "NotGeneric names subspace {subspace}, expected {diag}");
            let msg = e.to_string();
            ensure!(msg.contains(&diag.to_string()), "message does not name the subspace: {msg}");
            Ok(format!("NotPointed for [2,-1]; NotGeneric for beta (1,1): {msg}"))
        }
        other => Err(format!("beta (1,1) gave {:?}", other.map(|_| ()))),
    }
}

#[test]
fn acceptance() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let started = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS ({secs:.1}s) {msg}"),
            Err(msg) => {
                println!("criterion {n}: FAIL ({secs:.1}s) {msg}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
