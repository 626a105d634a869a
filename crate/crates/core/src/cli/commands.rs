use num::{BigInt, BigRational};
use serde_json::{json, Value};

use super::problem::{parse_point, ProblemFile};
use super::report::Verdict;
use crate::arrangement::{cocircuits, collection_from_beta, delta, is_pointed, Arrangement, Face};
use crate::decomp::{
    f_decomposition, localize, paradan_decomposition, verify_decomposition, wall_crossing, Decomposition,
    VerificationReport,
};
use crate::error::Error;
use crate::exactlin::{IntMatrix, IntVector, RatVector};
use crate::latfun::membership::all_integral;
use crate::latfun::{partition_function, Window};
use crate::spline::{
    continuity_check, fit_poly_piece, spline_bigcell, spline_wall_crossing, SplineEvaluator,
};

/// Largest list length and dimension the tool accepts.
pub const MAX_VECTORS: usize = 10;
pub const MAX_DIM: usize = 5;

/// Number of seeded sample points used by the spline wall-crossing check.
const SPLINE_WALL_SAMPLES: usize = 20;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

pub type Outcome = Result<(Value, Vec<Verdict>), Failure>;

pub struct Context {
    pub problem: ProblemFile,
    pub arr: Arrangement,
    pub radius: i64,
    pub seed: u64,
}

impl Context {
    pub fn new(problem: ProblemFile, window: Option<i64>, seed: u64) -> Result<Context, Failure> {
        let cfg = &problem.config;
        if cfg.len() > MAX_VECTORS || cfg.dim() > MAX_DIM {
            return Err(Failure::Library(Error::GuardLimit {
                detail: format!(
                    "{} vectors in dimension {}; the limits are {MAX_VECTORS} vectors and dimension {MAX_DIM}",
                    cfg.len(),
                    cfg.dim()
                ),
            }));
        }
        let radius = window.or(problem.window_radius).unwrap_or(6);
        if radius < 0 {
            return Err(Failure::Usage("--window must be nonnegative".into()));
        }
        let arr = Arrangement::new(cfg.clone());
        Ok(Context {
            problem,
            arr,
            radius,
            seed,
        })
    }

    pub fn window(&self) -> Window {
        Window::radius(self.arr.dim(), self.radius)
    }

    fn point(&self, text: &str) -> Result<RatVector, Failure> {
        parse_point(text, self.arr.dim()).map_err(Failure::Usage)
    }

    fn lattice_point(&self, text: &str) -> Result<IntVector, Failure> {
        self.point(text)?
            .to_int()
            .ok_or_else(|| Failure::Usage(format!("{text:?} is not a lattice point")))
    }

    pub fn select_tope(&self, id: Option<usize>, at: Option<&str>) -> Result<usize, Failure> {
        match (id, at) {
            (Some(t), None) => {
                if t < self.arr.topes().len() {
                    Ok(t)
                } else {
                    Err(Failure::Usage(format!("no tope {t}; there are {}", self.arr.topes().len())))
                }
            }
            (None, Some(p)) => {
                let x = self.point(p)?;
                self.arr
                    .tope_of(&x)
                    .ok_or_else(|| Failure::Usage(format!("point {x} lies on a rational hyperplane")))
            }
            _ => Err(Failure::Usage("select a tope with --tope ID or --at POINT".into())),
        }
    }

    pub fn select_wall(&self, id: Option<usize>, on: Option<&str>) -> Result<usize, Failure> {
        match (id, on) {
            (Some(w), None) => {
                if w < self.arr.walls().len() {
                    Ok(w)
                } else {
                    Err(Failure::Usage(format!("no wall {w}; there are {}", self.arr.walls().len())))
                }
            }
            (None, Some(p)) => {
                let x = self.point(p)?;
                self.arr
                    .wall_at(&x)
                    .ok_or_else(|| Failure::Usage(format!("point {x} is not inside a facet of a wall")))
            }
            _ => Err(Failure::Usage("select a wall with --wall ID or --on POINT".into())),
        }
    }

    fn beta(&self, flag: Option<&str>) -> Result<RatVector, Failure> {
        match flag {
            Some(text) => self.point(text),
            None => self
                .problem
                .beta
                .clone()
                .ok_or_else(|| Failure::Usage("no beta given (use --beta or the problem file)".into())),
        }
    }
}

fn ints(v: &IntVector) -> Vec<String> {
    v.0.iter().map(BigInt::to_string).collect()
}

fn rats(v: &RatVector) -> Vec<String> {
    v.0.iter().map(BigRational::to_string).collect()
}

fn columns(m: &IntMatrix) -> Vec<Vec<String>> {
    m.columns().iter().map(ints).collect()
}

fn face_json(f: &Face) -> Value {
    json!({"u": ints(&f.u), "positive": f.a, "negative": f.b})
}

fn verification_verdicts(rep: &VerificationReport) -> Vec<Verdict> {
    rep.checks
        .iter()
        .map(|c| Verdict::new(&c.name, c.passed, c.checked, c.witness.clone()))
        .collect()
}

/// Components with their pieces; `integral_on_window` records whether the
/// realized component took only integer values on the window (observed, not
/// claimed).
fn components_json(arr: &Arrangement, dec: &Decomposition, window: &Window) -> Value {
    let comps: Vec<Value> = dec
        .components
        .iter()
        .map(|c| {
            let r = arr.poset().get(c.subspace);
            json!({
                "subspace": r.id,
                "dim": r.dim,
                "members": r.members,
                "face": face_json(&c.face),
                "q": c.q.render(),
                "quasi_polynomial": c.q.serial(),
                "integral_on_window": all_integral(&c.realized, window).is_none(),
            })
        })
        .collect();
    Value::Array(comps)
}

pub fn structure(ctx: &Context) -> Outcome {
    let arr = &ctx.arr;
    let cfg = arr.config();
    let poset = arr.poset();
    let cocs = cocircuits(cfg, poset);
    let subspaces: Vec<Value> = poset
        .all()
        .iter()
        .map(|r| json!({"id": r.id, "dim": r.dim, "members": r.members, "basis": columns(&r.basis)}))
        .collect();
    let topes: Vec<Value> = arr
        .topes()
        .iter()
        .map(|t| json!({"id": t.id, "witness": rats(&t.witness), "signs": t.signs}))
        .collect();
    let walls: Vec<Value> = arr
        .walls()
        .iter()
        .map(|w| {
            json!({
                "id": w.id,
                "topes": [w.tope_a, w.tope_b],
                "hyperplane": w.hyperplane,
                "facet_witness": rats(&w.facet_witness),
                "tau12": w.tau12,
            })
        })
        .collect();
    let cells: Vec<Value> = arr
        .big_cells()
        .iter()
        .map(|c| json!({"id": c.id, "topes": c.tope_ids, "witness": rats(&c.witness)}))
        .collect();
    let result = json!({
        "dim": cfg.dim(),
        "vectors": cfg.vectors().iter().map(ints).collect::<Vec<_>>(),
        "pointed": is_pointed(cfg),
        "delta": delta(cfg).to_string(),
        "counts": {
            "subspaces": poset.len(),
            "cocircuits": cocs.len(),
            "topes": arr.topes().len(),
            "walls": arr.walls().len(),
            "big_cells": arr.big_cells().len(),
        },
        "subspaces": subspaces,
        "cocircuits": cocs,
        "hyperplane_normals": arr.normals().iter().map(ints).collect::<Vec<_>>(),
        "topes": topes,
        "walls": walls,
        "big_cells": cells,
    });
    Ok((result, vec![]))
}

pub fn eval(ctx: &Context, point: &str) -> Outcome {
    let gamma = ctx.lattice_point(point)?;
    let px = partition_function(ctx.arr.config())?;
    let v = px.eval(&gamma);
    Ok((json!({"point": ints(&gamma), "value": v.to_string()}), vec![]))
}

pub fn localize_cmd(ctx: &Context, tope: Option<usize>, at: Option<&str>) -> Outcome {
    let t = ctx.select_tope(tope, at)?;
    let px = partition_function(ctx.arr.config())?;
    let window = ctx.window();
    let loc = localize(&ctx.arr, &px, t, &window)?;
    let result = json!({
        "tope": t,
        "tope_witness": rats(&ctx.arr.tope(t).witness),
        "q": loc.q.render(),
        "quasi_polynomial": loc.q.serial(),
        "region_points": loc.region_points,
    });
    let v = &loc.verification;
    let verdicts = vec![
        Verdict::new("source-in-F(X)", true, loc.membership_checks, None),
        Verdict::new(
            "agrees-on-tope-minus-zonotope",
            v.passed,
            v.checked,
            v.witness.as_ref().map(|w| format!("{}: {} vs {}", w.point, w.got, w.expected)),
        ),
    ];
    Ok((result, verdicts))
}

pub fn decompose(ctx: &Context, tope: Option<usize>, at: Option<&str>, beta: Option<&str>) -> Outcome {
    let arr = &ctx.arr;
    let (collection, selector) = if tope.is_some() || at.is_some() {
        let t = ctx.select_tope(tope, at)?;
        (arr.nonpositive_collection(t), json!({"tope": t}))
    } else {
        let b = ctx.beta(beta)?;
        let bc = collection_from_beta(arr.config(), arr.poset(), &b, ctx.problem.gram.as_deref())?;
        (bc.faces, json!({"beta": rats(&b)}))
    };
    let px = partition_function(arr.config())?;
    let window = ctx.window();
    let dec = f_decomposition(arr, &px, &collection, &window)?;
    let rep = verify_decomposition(&dec, &window);
    let result = json!({
        "collection": selector,
        "components": components_json(arr, &dec, &window),
        "nonzero_components": dec.nonzero_components(),
    });
    Ok((result, verification_verdicts(&rep)))
}

pub fn wallcross(ctx: &Context, wall: Option<usize>, on: Option<&str>, flip: bool) -> Outcome {
    let w = ctx.select_wall(wall, on)?;
    let px = partition_function(ctx.arr.config())?;
    let window = ctx.window();
    let wc = wall_crossing(&ctx.arr, &px, w, flip, &window)?;
    let r = &wc.report;
    let verdicts = vec![
        Verdict::new(
            "wall-crossing-identity",
            r.identity.passed,
            r.identity.checked,
            r.identity
                .witness
                .as_ref()
                .map(|w| format!("{}: lhs {} vs rhs {}", w.point, w.got, w.expected)),
        ),
        Verdict::new(
            "lhs-in-DM",
            r.lhs_in_dm.passed,
            r.lhs_in_dm.checks,
            r.lhs_in_dm
                .violation
                .as_ref()
                .map(|v| format!("cocircuit {:?} gives {} at {}", v.operator, v.value, v.point)),
        ),
    ];
    let result = serde_json::to_value(r).expect("reports serialize");
    Ok((result, verdicts))
}

pub fn paradan(ctx: &Context, beta: Option<&str>) -> Outcome {
    let arr = &ctx.arr;
    let b = ctx.beta(beta)?;
    let window = ctx.window();
    let dec = paradan_decomposition(arr, &b, ctx.problem.gram.as_deref(), &window)?;
    let rep = verify_decomposition(&dec, &window);
    let result = json!({
        "beta": rats(&b),
        "components": components_json(arr, &dec, &window),
        "nonzero_components": dec.nonzero_components(),
    });
    let mut verdicts = vec![Verdict::new("sum-equals-partition-function", true, window.points().len(), None)];
    verdicts.extend(verification_verdicts(&rep));
    Ok((result, verdicts))
}

pub struct SplineSelector<'a> {
    pub at: Option<&'a str>,
    pub tope: Option<usize>,
    pub wall: Option<usize>,
    pub on: Option<&'a str>,
    pub cell: Option<usize>,
}

pub fn spline(ctx: &Context, sel: SplineSelector<'_>) -> Outcome {
    let arr = &ctx.arr;
    let ev = SplineEvaluator::new(arr.config())?;
    if let Some(p) = sel.at {
        let x = ctx.point(p)?;
        return Ok((json!({"point": rats(&x), "value": ev.eval(&x).to_string()}), vec![]));
    }
    if let Some(t) = sel.tope {
        let t = ctx.select_tope(Some(t), None)?;
        let piece = fit_poly_piece(arr, &ev, t, ctx.seed)?;
        let result = json!({"degree": ev.degree(), "piece": piece.serial()});
        return Ok((result, vec![Verdict::new("piece-matches-fresh-points", true, piece.verified, None)]));
    }
    if sel.wall.is_some() || sel.on.is_some() {
        let w = ctx.select_wall(sel.wall, sel.on)?;
        let rep = spline_wall_crossing(arr, w, SPLINE_WALL_SAMPLES, ctx.seed)?;
        let verdict = Verdict::new("spline-wall-crossing", rep.passed, rep.samples, rep.witness.clone());
        return Ok((serde_json::to_value(&rep).expect("reports serialize"), vec![verdict]));
    }
    if let Some(c) = sel.cell {
        if c >= arr.big_cells().len() {
            return Err(Failure::Usage(format!("no big cell {c}; there are {}", arr.big_cells().len())));
        }
        let piece = spline_bigcell(arr, &ev, c, ctx.seed)?;
        let result = json!({
            "cell": c,
            "topes": arr.big_cells()[c].tope_ids,
            "piece": piece.serial(),
        });
        return Ok((result, vec![Verdict::new("pieces-agree-across-cell", true, arr.big_cells()[c].tope_ids.len(), None)]));
    }
    let pieces = (0..arr.topes().len())
        .map(|t| fit_poly_piece(arr, &ev, t, ctx.seed).map(|p| p.serial()))
        .collect::<Result<Vec<_>, _>>()?;
    let cont = continuity_check(arr, ctx.seed)?;
    let result = json!({"degree": ev.degree(), "pieces": pieces, "continuity": cont});
    let verdict = Verdict::new("continuity-across-walls", cont.passed, cont.walls_checked, cont.witness.clone());
    Ok((result, vec![verdict]))
}
