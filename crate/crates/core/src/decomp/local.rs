use num::{BigRational, Signed, Zero};
use serde::Serialize;

use super::engine::{decompose_unchecked, require_fx, Component, Decomposition};
use crate::arrangement::{collection_from_beta, make_face, Arrangement, FaceCollection, Tope};
use crate::dm::{qp_equals_on, EqualityReport, QuasiPolynomial};
use crate::error::{Error, Result};
use crate::exactlin::{int_rat, IntVector, RatVector};
use crate::latfun::{
    check_dm_membership, kernel_pf, nabla_list, partition_function, restrict_to_subspace, Convolver,
    LatticeFunction, MembershipReport, Window,
};

/// `f^τ` together with its post-verification on `(τ − B(X)) ∩ window`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub tope: usize,
    pub q: QuasiPolynomial,
    pub decomposition: Decomposition,
    pub verification: EqualityReport,
    /// Number of window points found in `τ − B(X)`.
    pub region_points: usize,
    /// Evaluations spent checking `f ∈ F(X)` on the window.
    pub membership_checks: usize,
}

/// Cheap necessary condition for `γ ∈ τ − B(X)`, then the exact LP.
pub fn region_points(arr: &Arrangement, tope: &Tope, window: &Window) -> Vec<IntVector> {
    let cfg = arr.config();
    let slack: Vec<BigRational> = arr
        .normals()
        .iter()
        .zip(&tope.signs)
        .map(|(n, &s)| {
            cfg.vectors()
                .iter()
                .map(|a| int_rat(&a.dot(n)) * BigRational::from_integer(s.into()))
                .filter(|v| v.is_positive())
                .sum()
        })
        .collect();
    window.filter(|p| {
        let near = arr.normals().iter().zip(&tope.signs).zip(&slack).all(|((n, &s), sl)| {
            int_rat(&p.dot(n)) * BigRational::from_integer(s.into()) + sl > BigRational::zero()
        });
        near && arr.in_tope_minus_zonotope(tope.id, &p.to_rat())
    })
}

/// Localizes with an explicit non-positive collection.
pub fn localize_with(
    arr: &Arrangement,
    f: &LatticeFunction,
    tope: usize,
    collection: &FaceCollection,
    window: &Window,
) -> Result<Localization> {
    let membership_checks = require_fx(arr, f, window)?;
    let dec = decompose_unchecked(arr, f, collection)?;
    let whole = arr.poset().whole().id;
    let q = dec.component(whole).q.clone();
    let pts = region_points(arr, arr.tope(tope), window);
    let verification = qp_equals_on(&q, f, &pts)?;
    if !verification.passed {
        let w = verification.witness.clone().expect("failing report has a witness");
        return Err(Error::VerificationFailed {
            detail: format!(
                "localized piece differs from f at {}: {} vs {}",
                w.point, w.got, w.expected
            ),
        });
    }
    Ok(Localization {
        tope,
        q,
        decomposition: dec,
        verification,
        region_points: pts.len(),
        membership_checks,
    })
}

/// `f^τ`: the V-component of the decomposition for a collection
/// non-positive on `τ`.
pub fn localize(arr: &Arrangement, f: &LatticeFunction, tope: usize, window: &Window) -> Result<Localization> {
    let coll = arr.nonpositive_collection(tope);
    localize_with(arr, f, tope, &coll, window)
}

#[derive(Clone, Debug, Serialize)]
pub struct WallCrossingReport {
    pub wall: usize,
    pub tau1: usize,
    pub tau2: usize,
    pub hyperplane: usize,
    pub tau12: usize,
    pub normal: String,
    pub lhs: String,
    pub q12: String,
    pub window: String,
    pub identity: EqualityReport,
    pub lhs_in_dm: MembershipReport,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct WallCrossing {
    pub lhs: QuasiPolynomial,
    pub rhs: LatticeFunction,
    pub q12: QuasiPolynomial,
    pub report: WallCrossingReport,
}

/// Both sides of the wall-crossing identity across `wall`, with `τ1` the
/// side the normal `F_H` is positive on. `flip` swaps the roles of the two
/// topes.
pub fn wall_crossing(
    arr: &Arrangement,
    f: &LatticeFunction,
    wall: usize,
    flip: bool,
    window: &Window,
) -> Result<WallCrossing> {
    let w = arr.walls()[wall].clone();
    let (t1, t2) = if flip { (w.tope_b, w.tope_a) } else { (w.tope_a, w.tope_b) };
    let cfg = arr.config();
    let h = arr.poset().get(w.hyperplane).clone();

    let f1 = localize(arr, f, t1, window)?;
    let f2 = localize(arr, f, t2, window)?;
    let lhs = f1.q.sub(&f2.q);

    let mut n = arr.normals()[w.normal_index].clone();
    if arr.tope(t1).witness.dot_int(&n).is_negative() {
        n = -&n;
    }
    let face = make_face(cfg, &h, &n.to_rat())?;

    let complement: Vec<usize> = (0..cfg.len()).filter(|k| !h.members.contains(k)).collect();
    let g = restrict_to_subspace(&h, &nabla_list(&cfg.sublist(&complement), f));
    let ind = arr.induced(&h);
    let hwin = Window::radius(h.dim, window.radius_hint());
    let q12 = localize(&ind, &g, w.tau12, &hwin)?.q.with_carrier(h.clone());
    let q12f = q12.to_function();

    let plus = Convolver::new(&kernel_pf(cfg, &face), &h)?.apply(&q12f);
    let minus = Convolver::new(&kernel_pf(cfg, &face.negate()), &h)?.apply(&q12f);
    let rhs = plus.sub(&minus);

    let identity = qp_equals_on(&lhs, &rhs, window.points())?;
    let lhs_in_dm = check_dm_membership(cfg, arr.poset(), &lhs.to_function(), window);
    let passed = identity.passed && lhs_in_dm.passed;
    let report = WallCrossingReport {
        wall,
        tau1: t1,
        tau2: t2,
        hyperplane: h.id,
        tau12: w.tau12,
        normal: n.to_string(),
        lhs: lhs.render(),
        q12: q12.render(),
        window: window.description().to_string(),
        identity,
        lhs_in_dm,
        passed,
    };
    Ok(WallCrossing { lhs, rhs, q12, report })
}

/// The common localization of `f` over the topes of a big cell.
pub fn bigcell_piece(arr: &Arrangement, f: &LatticeFunction, cell: usize, window: &Window) -> Result<QuasiPolynomial> {
    let topes = arr.big_cells()[cell].tope_ids.clone();
    let mut first: Option<(usize, QuasiPolynomial)> = None;
    for t in topes {
        let q = localize(arr, f, t, window)?.q;
        match &first {
            None => first = Some((t, q)),
            Some((t0, q0)) => {
                if !q0.same_function(&q) {
                    return Err(Error::PiecesDisagree { first: *t0, second: t });
                }
            }
        }
    }
    Ok(first.expect("cells are nonempty").1)
}

/// The decomposition `P_X = Σ_r P^{−F_r^β}_{X\r} * (P_{X∩r})^{τ(p_r β)}`,
/// verified to sum to `P_X` on the window.
pub fn paradan_decomposition(
    arr: &Arrangement,
    beta: &RatVector,
    gram: Option<&[Vec<BigRational>]>,
    window: &Window,
) -> Result<Decomposition> {
    let cfg = arr.config();
    let px = partition_function(cfg)?;
    let bc = collection_from_beta(cfg, arr.poset(), beta, gram)?;
    let mut components = Vec::new();
    let mut faces = Vec::new();
    for r in arr.poset().all() {
        let ind = arr.induced(r);
        let pr = partition_function(ind.config())?;
        let rwin = Window::radius(r.dim, window.radius_hint());
        let q = localize(&ind, &pr, bc.topes[r.id], &rwin)?.q.with_carrier(r.clone());
        let face = bc.faces.face(r.id).negate();
        faces.push(face.clone());
        components.push(Component::new(arr, face, q)?);
    }
    let dec = Decomposition {
        arrangement: arr.clone(),
        collection: FaceCollection { faces },
        components,
        source: px.clone(),
    };
    let total = dec.total();
    for p in window.points() {
        let (a, b) = (total.eval(p), px.eval(p));
        if a != b {
            return Err(Error::VerificationFailed {
                detail: format!("Paradan components give {a} but P_X is {b} at {p}"),
            });
        }
    }
    Ok(dec)
}

/// Tope of `arr` that contains `x`, or an `Invalid` error naming the point.
pub fn tope_containing(arr: &Arrangement, x: &RatVector) -> Result<usize> {
    arr.tope_of(x).ok_or_else(|| Error::Invalid {
        detail: format!("point {x} lies on a rational hyperplane"),
    })
}

/// Convenience: `P_X` localized at the tope containing `x`.
pub fn localize_partition_function_at(arr: &Arrangement, x: &RatVector, window: &Window) -> Result<Localization> {
    let px = partition_function(arr.config())?;
    let t = tope_containing(arr, x)?;
    localize(arr, &px, t, window)
}
