use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::{integrate_polynomial, SplineEvaluator};
use crate::arrangement::{cocircuits, Arrangement, Tope};
use crate::dm::{MonomialSerial, Polynomial};
use crate::error::{Error, Result};
use crate::exactlin::solve::solve_rational_rows;
use crate::exactlin::{int_rat, IntVector, RatVector};

/// The polynomial density the spline agrees with on one tope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyPiece {
    pub tope: usize,
    pub polynomial: Polynomial,
    /// Fresh interior points the fit was re-checked at.
    pub verified: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyPieceSerial {
    pub tope: usize,
    pub polynomial: String,
    pub monomials: Vec<MonomialSerial>,
}

impl PolyPiece {
    pub fn serial(&self) -> PolyPieceSerial {
        PolyPieceSerial {
            tope: self.tope,
            polynomial: self.polynomial.render("v"),
            monomials: self.polynomial.serial(),
        }
    }
}

/// Homogeneous exponent vectors of total degree `deg` in `n` variables.
fn homogeneous_monomials(n: usize, deg: u32) -> Vec<Vec<u32>> {
    crate::dm::monomials_up_to(n, deg)
        .into_iter()
        .filter(|e| e.iter().sum::<u32>() == deg)
        .collect()
}

fn strictly_inside(normals: &[IntVector], tope: &Tope, x: &RatVector) -> bool {
    normals.iter().zip(&tope.signs).all(|(n, &s)| {
        let v = x.dot_int(n);
        if s > 0 {
            v.is_positive()
        } else {
            v.is_negative()
        }
    })
}

/// `w + v / K` with `K` large enough that the point stays inside the tope of
/// the integral witness `w`.
fn nudge(normals: &[IntVector], w: &RatVector, v: &IntVector) -> RatVector {
    let spread = normals.iter().map(|n| v.dot(n).abs()).max().unwrap_or_default();
    let k = int_rat(&(spread + BigInt::one()));
    RatVector(w.0.iter().zip(&v.0).map(|(wi, vi)| wi + int_rat(vi) / &k).collect())
}

/// Deterministic interior points of a tope, in a fixed order.
pub fn tope_interior_points(arr: &Arrangement, tope: usize, count: usize) -> Vec<RatVector> {
    let t = arr.tope(tope);
    let d = arr.dim();
    let mut out = vec![t.witness.clone()];
    let mut radius = 1i64;
    while out.len() < count && d > 0 {
        let mut grid = vec![vec![]];
        for _ in 0..d {
            grid = grid
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (-radius..=radius).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        for v in grid {
            if v.iter().map(|c| c.abs()).max() != Some(radius) {
                continue;
            }
            let p = nudge(arr.normals(), &t.witness, &IntVector::from_i64(&v));
            debug_assert!(strictly_inside(arr.normals(), t, &p));
            out.push(p);
            if out.len() >= count {
                break;
            }
        }
        radius += 1;
    }
    out
}

/// Seeded interior points of a tope, used only for verification.
pub fn random_tope_points(arr: &Arrangement, tope: usize, count: usize, seed: u64) -> Vec<RatVector> {
    let t = arr.tope(tope);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (tope as u64).wrapping_mul(0x9e37_79b9));
    (0..count)
        .map(|_| {
            let scale = BigRational::from_integer(rng.gen_range(1..6).into());
            let v: Vec<i64> = (0..arr.dim()).map(|_| rng.gen_range(-7..=7)).collect();
            let w = t.witness.scale(&scale);
            nudge(arr.normals(), &w, &IntVector::from_i64(&v))
        })
        .collect()
}

/// Fits the homogeneous polynomial of degree `m − d` that `T_X` equals on the
/// tope, then re-checks it at fresh seeded interior points.
pub fn fit_poly_piece(arr: &Arrangement, ev: &SplineEvaluator, tope: usize, seed: u64) -> Result<PolyPiece> {
    let d = arr.dim();
    let monos = homogeneous_monomials(d, ev.degree() as u32);
    let mut count = monos.len() + 2;
    let polynomial = loop {
        let pts = tope_interior_points(arr, tope, count);
        let rows: Vec<Vec<BigRational>> = pts
            .iter()
            .map(|p| monos.iter().map(|e| crate::dm::monomial_value(e, &p.0)).collect())
            .collect();
        let vals: Vec<BigRational> = pts.iter().map(|p| ev.eval(p)).collect();
        let Some(sol) = solve_rational_rows(&rows, &vals, monos.len()) else {
            return Err(Error::Inconsistent {
                witness: format!("no polynomial of degree {} fits tope {tope}", ev.degree()),
            });
        };
        if sol.kernel.is_empty() {
            break Polynomial::from_terms(d, monos.iter().cloned().zip(sol.particular.0));
        }
        if count > 8 * monos.len() + 64 {
            return Err(Error::Underdetermined {
                coset: format!("tope {tope}"),
            });
        }
        count *= 2;
    };
    let fresh = random_tope_points(arr, tope, monos.len() + 4, seed);
    for p in &fresh {
        let (fit, exact) = (polynomial.eval_vec(p), ev.eval(p));
        if fit != exact {
            return Err(Error::Inconsistent {
                witness: format!("{p}: piece gives {fit}, spline gives {exact}"),
            });
        }
    }
    Ok(PolyPiece {
        tope,
        polynomial,
        verified: fresh.len(),
    })
}

/// Fits every tope of a big cell and returns the common polynomial.
pub fn spline_bigcell(arr: &Arrangement, ev: &SplineEvaluator, cell: usize, seed: u64) -> Result<PolyPiece> {
    let ids = arr.big_cells()[cell].tope_ids.clone();
    let first = fit_poly_piece(arr, ev, ids[0], seed)?;
    for &t in &ids[1..] {
        let p = fit_poly_piece(arr, ev, t, seed)?;
        if p.polynomial != first.polynomial {
            return Err(Error::PiecesDisagree { first: ids[0], second: t });
        }
    }
    Ok(first)
}

/// `(T_L * q)(x)` for a density `q` on the hyperplane `⟨n, ·⟩ = 0` (given
/// in saturated coordinates of `H`) and a list `L` on which `n` has a
/// constant strict sign.
struct TransverseConvolution<'a> {
    h: &'a crate::arrangement::RationalSubspace,
    n: &'a IntVector,
    q: &'a Polynomial,
    q_degree: usize,
}

impl TransverseConvolution<'_> {
    fn eval(&self, list: &[IntVector], x: &RatVector) -> BigRational {
        let (l, rest) = list.split_last().expect("nonempty list");
        let nl = int_rat(&l.dot(self.n));
        let t_max = x.dot_int(self.n) / &nl;
        if t_max.is_negative() {
            return BigRational::zero();
        }
        let lr = l.to_rat();
        if rest.is_empty() {
            let y = x - &lr.scale(&t_max);
            let c = self.h.coordinates_rat(&y).expect("the foot lies on the hyperplane");
            return self.q.eval_vec(&c) / nl.abs();
        }
        if t_max.is_zero() {
            return BigRational::zero();
        }
        let degree = self.q_degree + rest.len() - 1;
        integrate_polynomial(&BigRational::zero(), &t_max, degree, |t| self.eval(rest, &(x - &lr.scale(t))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplineWallReport {
    pub wall: usize,
    pub tau1: usize,
    pub tau2: usize,
    pub hyperplane: usize,
    pub normal: String,
    pub piece_tau1: String,
    pub piece_tau2: String,
    pub lhs: String,
    /// `T_{X∩H}^{τ12}` in the coordinates of `H`.
    pub piece_tau12: String,
    pub samples: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Checks `T^{τ1} − T^{τ2} = (T^{F_H} − T^{−F_H}) * T_{X∩H}^{τ12}` at seeded
/// sample points off `H`, evaluating the right side by integration along
/// fibers transverse to `H`.
pub fn spline_wall_crossing(arr: &Arrangement, wall: usize, samples: usize, seed: u64) -> Result<SplineWallReport> {
    let cfg = arr.config();
    let ev = SplineEvaluator::new(cfg)?;
    let w = arr.walls()[wall].clone();
    let (t1, t2) = (w.tope_a, w.tope_b);
    let h = arr.poset().get(w.hyperplane).clone();
    let mut n = arr.normals()[w.normal_index].clone();
    if arr.tope(t1).witness.dot_int(&n).is_negative() {
        n = -&n;
    }
    let p1 = fit_poly_piece(arr, &ev, t1, seed)?;
    let p2 = fit_poly_piece(arr, &ev, t2, seed)?;
    let lhs = p1.polynomial.sub(&p2.polynomial);

    let ind = arr.induced(&h);
    let ev_h = SplineEvaluator::new(ind.config())?;
    let q12 = fit_poly_piece(&ind, &ev_h, w.tau12, seed)?;

    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, v) in cfg.vectors().iter().enumerate() {
        if h.members.contains(&i) {
            continue;
        }
        if v.dot(&n).is_positive() {
            a.push(v.clone());
        } else {
            b.push(v.clone());
        }
    }
    let parity = |k: usize| if k.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    let plus_list: Vec<IntVector> = a.iter().cloned().chain(b.iter().map(|v| -v)).collect();
    let minus_list: Vec<IntVector> = b.iter().cloned().chain(a.iter().map(|v| -v)).collect();
    let conv = TransverseConvolution {
        h: &h,
        n: &n,
        q: &q12.polynomial,
        q_degree: ev_h.degree(),
    };
    let rhs = |x: &RatVector| -> BigRational {
        let side = x.dot_int(&n);
        if side.is_positive() {
            parity(b.len()) * conv.eval(&plus_list, x)
        } else if side.is_negative() {
            -(parity(a.len()) * conv.eval(&minus_list, x))
        } else {
            BigRational::zero()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000 ^ wall as u64);
    let mut witness = None;
    let mut checked = 0;
    while checked < samples {
        let x = RatVector::from_fracs(
            &(0..arr.dim())
                .map(|_| (rng.gen_range(-40..=40), rng.gen_range(1..=7)))
                .collect::<Vec<_>>(),
        );
        if x.dot_int(&n).is_zero() {
            continue;
        }
        checked += 1;
        let (l, r) = (lhs.eval_vec(&x), rhs(&x));
        if l != r {
            witness = Some(format!("{x}: lhs {l}, rhs {r}"));
            break;
        }
    }
    Ok(SplineWallReport {
        wall,
        tau1: t1,
        tau2: t2,
        hyperplane: h.id,
        normal: n.to_string(),
        piece_tau1: p1.polynomial.render("v"),
        piece_tau2: p2.polynomial.render("v"),
        lhs: lhs.render("v"),
        piece_tau12: q12.polynomial.render("v"),
        samples: checked,
        passed: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivativeReport {
    /// Indices of `X \ Y`.
    pub differentiated: Vec<usize>,
    pub spanning: bool,
    pub checked: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

/// `∂_{X\Y}` applied to every piece of `T_X`. When `Y` spans, the result is
/// compared with `T_Y` at seeded interior points of each tope; otherwise
/// every differentiated piece must vanish identically.
pub fn derivative_identity_check(arr: &Arrangement, y: &[usize], samples: usize, seed: u64) -> Result<DerivativeReport> {
    let cfg = arr.config();
    let ev = SplineEvaluator::new(cfg)?;
    let others: Vec<usize> = (0..cfg.len()).filter(|i| !y.contains(i)).collect();
    let ylist = cfg.sublist(y);
    let ev_y = match SplineEvaluator::from_list(cfg.dim(), ylist, BigRational::one()) {
        Ok(e) => Some(e),
        Err(Error::NotSpanning { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut checked = 0;
    let mut witness = None;
    'topes: for t in 0..arr.topes().len() {
        let piece = fit_poly_piece(arr, &ev, t, seed)?;
        let mut g = piece.polynomial.clone();
        for &i in &others {
            g = g.directional_derivative(&cfg.vector(i).to_rat());
        }
        match &ev_y {
            None => {
                checked += 1;
                if !g.is_zero() {
                    witness = Some(format!("tope {t}: derivative is {}", g.render("v")));
                    break 'topes;
                }
            }
            Some(e) => {
                for x in random_tope_points(arr, t, samples, seed) {
                    checked += 1;
                    let (a, b) = (g.eval_vec(&x), e.eval(&x));
                    if a != b {
                        witness = Some(format!("tope {t} at {x}: derivative {a}, T_Y {b}"));
                        break 'topes;
                    }
                }
            }
        }
    }
    Ok(DerivativeReport {
        differentiated: others,
        spanning: ev_y.is_some(),
        checked,
        passed: witness.is_none(),
        witness,
    })
}

/// Smallest cocircuit size of `X`.
pub fn min_cocircuit_size(arr: &Arrangement) -> usize {
    cocircuits(arr.config(), arr.poset())
        .iter()
        .map(|c| c.len())
        .min()
        .unwrap_or(0)
}

/// True when `p` vanishes to order `order` along `H` (all derivatives of order
/// at most `order` vanish there).
pub fn vanishes_to_order(p: &Polynomial, h: &crate::arrangement::RationalSubspace, normal: &IntVector, order: usize) -> bool {
    let d = p.nvars();
    let m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| (0..h.dim).map(|j| int_rat(h.basis.get(i, j))).collect())
        .collect();
    let c = vec![BigRational::zero(); d];
    let mut g = p.clone();
    let dir = normal.to_rat();
    for _ in 0..=order {
        if !g.substitute_affine(&m, &c).is_zero() {
            return false;
        }
        g = g.directional_derivative(&dir);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub min_cocircuit: usize,
    /// Pieces must agree to this order across every wall; `None` when the
    /// minimal cocircuit has a single element and nothing is claimed.
    pub order: Option<usize>,
    pub walls_checked: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Adjacent pieces agree on each shared facet to order `r − 2`, `r` the
/// minimal cocircuit size.
pub fn continuity_check(arr: &Arrangement, seed: u64) -> Result<ContinuityReport> {
    let r = min_cocircuit_size(arr);
    if r < 2 {
        return Ok(ContinuityReport {
            min_cocircuit: r,
            order: None,
            walls_checked: 0,
            passed: true,
            witness: None,
        });
    }
    let ev = SplineEvaluator::new(arr.config())?;
    let pieces: Vec<PolyPiece> = (0..arr.topes().len())
        .map(|t| fit_poly_piece(arr, &ev, t, seed))
        .collect::<Result<_>>()?;
    let mut witness = None;
    for w in arr.walls() {
        let h = arr.poset().get(w.hyperplane);
        let diff = pieces[w.tope_a].polynomial.sub(&pieces[w.tope_b].polynomial);
        if !vanishes_to_order(&diff, h, &arr.normals()[w.normal_index], r - 2) {
            witness = Some(format!("wall {} between topes {} and {}", w.id, w.tope_a, w.tope_b));
            break;
        }
    }
    Ok(ContinuityReport {
        min_cocircuit: r,
        order: Some(r - 2),
        walls_checked: arr.walls().len(),
        passed: witness.is_none(),
        witness,
    })
}
