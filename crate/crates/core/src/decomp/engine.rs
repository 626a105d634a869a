use num::{BigRational, Zero};
use serde::Serialize;

use crate::arrangement::{cone_contains, Arrangement, Face, FaceCollection, RationalSubspace};
use crate::dm::{degree_bound, fit_quasipolynomial, period_lattice, QuasiPolynomial};
use crate::error::{Error, Result};
use crate::exactlin::{IntVector, RatVector};
use crate::latfun::{
    check_dm_membership, check_fx_membership, kernel_pf, nabla_list, ConeSupport, Convolver, LatticeFunction, Window,
};

/// The `r`-component `P^{F_r}_{X\r} * q_r` of a decomposition.
#[derive(Clone, Debug)]
pub struct Component {
    pub subspace: usize,
    pub face: Face,
    pub q: QuasiPolynomial,
    /// `q` as an ambient lattice function (zero off `r`); this is what the
    /// kernel is convolved with.
    pub q_function: LatticeFunction,
    pub kernel: LatticeFunction,
    pub realized: LatticeFunction,
}

impl Component {
    pub fn new(arr: &Arrangement, face: Face, q: QuasiPolynomial) -> Result<Component> {
        let q_function = q.to_function();
        Component::from_parts(arr, face, q, q_function)
    }

    /// Builds a component whose realized function uses `q_function` in place
    /// of `q` (used to test that verification catches tampering).
    pub fn from_parts(arr: &Arrangement, face: Face, q: QuasiPolynomial, q_function: LatticeFunction) -> Result<Component> {
        let r = arr.poset().get(face.subspace);
        let kernel = kernel_pf(arr.config(), &face);
        let realized = if r.is_whole() {
            q_function.clone()
        } else {
            Convolver::new(&kernel, r)?.apply(&q_function)
        };
        Ok(Component {
            subspace: face.subspace,
            face,
            q,
            q_function,
            kernel,
            realized,
        })
    }

    pub fn support(&self) -> Option<&ConeSupport> {
        self.realized.support()
    }
}

/// `f = Σ_r P^{F_r}_{X\r} * q_r`, one component per rational subspace.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub arrangement: Arrangement,
    pub collection: FaceCollection,
    pub components: Vec<Component>,
    pub source: LatticeFunction,
}

impl Decomposition {
    pub fn component(&self, r: usize) -> &Component {
        &self.components[r]
    }

    /// `Σ_r realized_r`.
    pub fn total(&self) -> LatticeFunction {
        let parts: Vec<LatticeFunction> = self.components.iter().map(|c| c.realized.clone()).collect();
        LatticeFunction::sum(self.arrangement.dim(), &parts)
    }

    /// Ids of the components whose quasi-polynomial is not identically zero.
    pub fn nonzero_components(&self) -> Vec<usize> {
        self.components.iter().filter(|c| !c.q.is_zero()).map(|c| c.subspace).collect()
    }
}

/// Precondition of the staged algorithm: `f ∈ F(X)` on the window.
/// Returns the number of difference-operator evaluations performed.
pub fn require_fx(arr: &Arrangement, f: &LatticeFunction, window: &Window) -> Result<usize> {
    let rep = check_fx_membership(arr.config(), arr.poset(), f, window);
    if rep.passed {
        Ok(rep.checks)
    } else {
        let v = rep.violation.expect("failing report has a violation");
        Err(Error::MembershipViolation {
            detail: format!(
                "nabla over {:?} is {} at {} (window {})",
                v.operator, v.value, v.point, rep.window
            ),
        })
    }
}

/// Fits `q_r` from `g` (a function on `Γ ∩ r`, ambient coordinates) in the
/// saturated coordinates of `r`.
fn fit_on(arr: &Arrangement, r: &RationalSubspace, g: &LatticeFunction) -> Result<QuasiPolynomial> {
    let period = period_lattice(arr.config(), r);
    let values = |c: &IntVector| g.eval(&r.embed(c));
    fit_quasipolynomial(&values, r, &period, degree_bound(r))
}

/// Runs the staged algorithm through the stage of dimension `last_dim`.
fn staged(
    arr: &Arrangement,
    f: &LatticeFunction,
    collection: &FaceCollection,
    last_dim: usize,
) -> Result<Vec<Option<Component>>> {
    let poset = arr.poset();
    let cfg = arr.config();
    let mut comps: Vec<Option<Component>> = vec![None; poset.len()];
    let mut remainder = f.clone();
    for i in 0..=last_dim.min(arr.dim()) {
        let mut stage = Vec::new();
        for &rid in poset.of_dim(i) {
            let r = poset.get(rid);
            let g = if r.is_whole() {
                remainder.clone()
            } else {
                let complement: Vec<usize> = (0..cfg.len()).filter(|k| !r.members.contains(k)).collect();
                nabla_list(&cfg.sublist(&complement), &remainder)
            };
            let q = fit_on(arr, r, &g)?;
            let c = Component::new(arr, collection.face(rid).clone(), q)?;
            stage.push(c.realized.clone());
            comps[rid] = Some(c);
        }
        let sum = LatticeFunction::sum(arr.dim(), &stage);
        remainder = remainder.sub(&sum);
    }
    Ok(comps)
}

/// The F-decomposition of `f` for a regular collection.
pub fn f_decomposition(
    arr: &Arrangement,
    f: &LatticeFunction,
    collection: &FaceCollection,
    window: &Window,
) -> Result<Decomposition> {
    require_fx(arr, f, window)?;
    decompose_unchecked(arr, f, collection)
}

/// The staged algorithm without the membership precondition.
pub fn decompose_unchecked(arr: &Arrangement, f: &LatticeFunction, collection: &FaceCollection) -> Result<Decomposition> {
    let comps = staged(arr, f, collection, arr.dim())?;
    Ok(Decomposition {
        arrangement: arr.clone(),
        collection: collection.clone(),
        components: comps.into_iter().map(|c| c.expect("every stage ran")).collect(),
        source: f.clone(),
    })
}

/// The `r`-component alone, from a run truncated after the stage of `dim r`.
pub fn projector(
    arr: &Arrangement,
    f: &LatticeFunction,
    r: usize,
    collection: &FaceCollection,
    window: &Window,
) -> Result<Component> {
    require_fx(arr, f, window)?;
    let dim = arr.poset().get(r).dim;
    let mut comps = staged(arr, f, collection, dim)?;
    Ok(comps[r].take().expect("stage ran"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: true,
            checked: 0,
            witness: None,
        }
    }

    fn fail(&mut self, w: String) {
        if self.passed {
            self.passed = false;
            self.witness = Some(w);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub window: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

fn in_support(support: &ConeSupport, gamma: &IntVector) -> bool {
    let d = gamma.dim();
    let mut gens = support.rays.clone();
    if let Some(r) = &support.subspace {
        for c in r.basis.columns() {
            gens.push(-&c);
            gens.push(c);
        }
    }
    let target: RatVector = (gamma - &support.offset).to_rat();
    cone_contains(d, &gens, &target)
}

/// Independent re-verification of a decomposition on a window:
/// the components sum to the source, each realized component respects its
/// support certificate, each `q_r` satisfies the DM equations of `X ∩ r`, and
/// applying `∇_{X\t}` reproduces the decomposition inside every `t`.
pub fn verify_decomposition(dec: &Decomposition, window: &Window) -> VerificationReport {
    let arr = &dec.arrangement;
    let cfg = arr.config();
    let poset = arr.poset();
    let total = dec.total();

    let mut sum = CheckOutcome::new("sum-equals-source");
    for p in window.points() {
        sum.checked += 1;
        let (a, b) = (total.eval(p), dec.source.eval(p));
        if a != b {
            sum.fail(format!("{p}: components give {a}, source gives {b}"));
            break;
        }
    }

    let mut support = CheckOutcome::new("support-certificate");
    'outer: for c in &dec.components {
        let Some(s) = c.support() else { continue };
        for p in window.points() {
            let v = c.realized.eval(p);
            if v.is_zero() {
                continue;
            }
            support.checked += 1;
            if !in_support(s, p) {
                support.fail(format!("component {} is {v} at {p}, outside its cone", c.subspace));
                break 'outer;
            }
        }
    }

    let mut dm = CheckOutcome::new("components-in-DM");
    for c in &dec.components {
        let r = poset.get(c.subspace);
        let ind = arr.induced(r);
        let rwin = Window::radius(r.dim, window.radius_hint().max(1));
        let g = crate::latfun::restrict_to_subspace(r, &c.q_function);
        let rep = check_dm_membership(ind.config(), ind.poset(), &g, &rwin);
        dm.checked += rep.checks;
        if !rep.passed {
            let v = rep.violation.expect("failing report has a violation");
            dm.fail(format!("component {}: cocircuit {:?} gives {} at {}", c.subspace, v.operator, v.value, v.point));
        }
    }

    let mut rec = CheckOutcome::new("recurrence");
    for t in poset.all().iter().filter(|t| !t.is_whole()) {
        let complement: Vec<usize> = (0..cfg.len()).filter(|k| !t.members.contains(k)).collect();
        let lhs = nabla_list(&cfg.sublist(&complement), &dec.source);
        let mut parts = Vec::new();
        for c in &dec.components {
            let r = poset.get(c.subspace);
            if r.is_subspace_of(t) {
                let face = c.face.restrict_to(t);
                let k = kernel_pf(cfg, &face);
                match Convolver::new(&k, r) {
                    Ok(conv) => parts.push(conv.apply(&c.q_function)),
                    Err(e) => {
                        rec.fail(format!("subspace {}: {e}", t.id));
                    }
                }
            } else {
                let vanish = nabla_list(&cfg.sublist(&complement), &c.realized);
                for p in window.points() {
                    rec.checked += 1;
                    let v = vanish.eval(p);
                    if !v.is_zero() {
                        rec.fail(format!(
                            "component {} survives the difference operator of subspace {} at {p} ({v})",
                            c.subspace, t.id
                        ));
                        break;
                    }
                }
            }
        }
        let rhs = LatticeFunction::sum(cfg.dim(), &parts);
        for p in window.points() {
            rec.checked += 1;
            let (a, b): (BigRational, BigRational) = (lhs.eval(p), rhs.eval(p));
            if a != b {
                rec.fail(format!("subspace {}: {a} != {b} at {p}", t.id));
                break;
            }
        }
    }

    let checks = vec![sum, support, dm, rec];
    VerificationReport {
        window: window.description().to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::config_from_i64;
    use crate::latfun::partition_function;

    fn setup() -> (Arrangement, LatticeFunction, FaceCollection) {
        let arr = Arrangement::new(config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap());
        let px = partition_function(arr.config()).unwrap();
        let t = arr.tope_of(&RatVector::from_i64(&[2, 1])).unwrap();
        let coll = arr.nonpositive_collection(t);
        (arr, px, coll)
    }

    #[test]
    fn decomposition_verifies() {
        let (arr, px, coll) = setup();
        let w = Window::radius(2, 6);
        let dec = f_decomposition(&arr, &px, &coll, &w).unwrap();
        let rep = verify_decomposition(&dec, &w);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.checks.len(), 4);
        assert_eq!(dec.component(arr.poset().whole().id).q.render(), "n2 + 1");
    }

    #[test]
    fn tampering_is_detected() {
        let (arr, px, coll) = setup();
        let w = Window::radius(2, 5);
        let mut dec = f_decomposition(&arr, &px, &coll, &w).unwrap();
        let z = arr.poset().zero().id;
        let c = dec.component(z).clone();
        let bumped = c.q_function.scale(BigRational::from_integer(2.into()));
        dec.components[z] = Component::from_parts(&arr, c.face.clone(), c.q.clone(), bumped).unwrap();
        let rep = verify_decomposition(&dec, &w);
        assert!(!rep.passed);
        let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"sum-equals-source"), "{failed:?}");
        assert!(rep.checks.iter().all(|c| c.passed || c.witness.is_some()));
    }

    #[test]
    fn projectors_are_idempotent_and_orthogonal() {
        let (arr, px, coll) = setup();
        let w = Window::radius(2, 4);
        let ids: Vec<usize> = arr.poset().all().iter().map(|r| r.id).collect();
        for &r in &ids {
            let pr = projector(&arr, &px, r, &coll, &w).unwrap().realized;
            for &t in &ids {
                let ptr = projector(&arr, &pr, t, &coll, &w).unwrap().realized;
                for p in w.points() {
                    let expect = if t == r { pr.eval(p) } else { BigRational::zero() };
                    assert_eq!(ptr.eval(p), expect, "P_{t} P_{r} at {p}");
                }
            }
        }
    }

    #[test]
    fn non_regular_collection_faces_fail_at_construction() {
        let (arr, _, coll) = setup();
        let z = arr.poset().zero().id;
        let mut face = coll.face(z).clone();
        face.u = IntVector::from_i64(&[1, -1]);
        assert!(crate::arrangement::make_face(arr.config(), arr.poset().zero(), &face.u.to_rat()).is_err());
    }
}
