use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};

use super::config::{cone_contains, VectorConfig};
use super::subspace::{hyperplane_normal, restrict_config, SubspacePoset};
use crate::exactlin::{int_rat, sign_of, IntVector, LinearProgram, LpOutcome, RatVector, Relation};

/// A chamber of the central arrangement of rational hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tope {
    pub id: usize,
    /// One entry (+1 or -1) per hyperplane normal, in poset order.
    pub signs: Vec<i8>,
    /// An integral interior point realizing `signs` strictly.
    pub witness: RatVector,
}

impl Tope {
    pub fn lattice_witness(&self) -> IntVector {
        self.witness.to_int().expect("tope witnesses are integral")
    }
}

/// Two topes whose closures meet in a facet spanning a rational hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub id: usize,
    pub tope_a: usize,
    pub tope_b: usize,
    /// Subspace id of the hyperplane `H`.
    pub hyperplane: usize,
    /// Position of `H` in the hyperplane normal list.
    pub normal_index: usize,
    /// Integral point in the relative interior of the shared facet.
    pub facet_witness: RatVector,
    /// Tope of the induced arrangement of `X ∩ H` (in the saturated
    /// coordinates of `H`) containing the facet witness.
    pub tau12: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigCell {
    pub id: usize,
    pub tope_ids: Vec<usize>,
    pub witness: RatVector,
}

/// Primitive normals of the rational hyperplanes, aligned with
/// `poset.hyperplanes()`.
pub fn hyperplane_normals(poset: &SubspacePoset) -> Vec<IntVector> {
    poset
        .hyperplanes()
        .iter()
        .map(|&h| hyperplane_normal(poset.get(h)))
        .collect()
}

pub fn sign_vector(normals: &[IntVector], x: &RatVector) -> Vec<i8> {
    normals.iter().map(|n| sign_of(&x.dot_int(n))).collect()
}

fn strict_lp(dim: usize, normals: &[IntVector], signs: &[i8]) -> LinearProgram {
    let mut lp = LinearProgram::new(dim);
    for (n, &s) in normals.iter().zip(signs) {
        let row = n.0.iter().map(|c| int_rat(c) * BigRational::from_integer(s.into())).collect();
        lp.add(row, Relation::Ge, BigRational::one());
    }
    lp
}

/// All topes, found by depth-first extension of sign-vector prefixes with an
/// exact feasibility test at every node. `+` is explored before `-`.
pub fn enumerate_topes(dim: usize, normals: &[IntVector]) -> Vec<Tope> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(normals.len());
    fn rec(dim: usize, normals: &[IntVector], prefix: &mut Vec<i8>, out: &mut Vec<Tope>) {
        let lp = strict_lp(dim, &normals[..prefix.len()], prefix);
        let Some(point) = lp.feasible_point() else {
            return;
        };
        if prefix.len() == normals.len() {
            let witness = RatVector(point).clear_denominators().to_rat();
            out.push(Tope {
                id: out.len(),
                signs: prefix.clone(),
                witness,
            });
            return;
        }
        for s in [1i8, -1] {
            prefix.push(s);
            rec(dim, normals, prefix, out);
            prefix.pop();
        }
    }
    rec(dim, normals, &mut prefix, &mut out);
    out
}

pub fn find_tope(topes: &[Tope], normals: &[IntVector], x: &RatVector) -> Option<usize> {
    let s = sign_vector(normals, x);
    if s.contains(&0) {
        return None;
    }
    topes.iter().find(|t| t.signs == s).map(|t| t.id)
}

/// Walls between adjacent topes. `tope_a < tope_b`; walls are ordered by
/// `(tope_a, tope_b)`.
pub fn tope_adjacency(cfg: &VectorConfig, poset: &SubspacePoset, topes: &[Tope]) -> Vec<Wall> {
    let normals = hyperplane_normals(poset);
    let mut induced: BTreeMap<usize, (Vec<IntVector>, Vec<Tope>)> = BTreeMap::new();
    let mut walls = Vec::new();
    for a in topes {
        for b in topes.iter().filter(|b| b.id > a.id) {
            let diff: Vec<usize> = (0..normals.len()).filter(|&k| a.signs[k] != b.signs[k]).collect();
            if diff.len() != 1 {
                continue;
            }
            let k = diff[0];
            let mut lp = LinearProgram::new(cfg.dim());
            for (i, n) in normals.iter().enumerate() {
                let row: Vec<BigRational> = n.0.iter().map(int_rat).collect();
                if i == k {
                    lp.add(row, Relation::Eq, BigRational::zero());
                } else {
                    let s = BigRational::from_integer(a.signs[i].into());
                    lp.add(row.into_iter().map(|c| c * &s).collect(), Relation::Ge, BigRational::one());
                }
            }
            let Some(p) = lp.feasible_point() else {
                continue;
            };
            let facet_witness = RatVector(p).clear_denominators().to_rat();
            let hid = poset.hyperplanes()[k];
            let h = poset.get(hid);
            let (hn, ht) = induced.entry(hid).or_insert_with(|| {
                let sub = restrict_config(cfg, h);
                let sp = super::subspace::rational_subspaces(&sub);
                let n = hyperplane_normals(&sp);
                let t = enumerate_topes(sub.dim(), &n);
                (n, t)
            });
            let coords = h.coordinates_rat(&facet_witness).expect("facet lies on H");
            let tau12 = find_tope(ht, hn, &coords).expect("facet witness is generic in H");
            walls.push(Wall {
                id: walls.len(),
                tope_a: a.id,
                tope_b: b.id,
                hyperplane: hid,
                normal_index: k,
                facet_witness,
                tau12,
            });
        }
    }
    walls
}

/// Groups topes into big cells: the two sides of a wall belong to the same
/// cell exactly when the facet is not contained in the cone `C(X ∩ H)`.
pub fn enumerate_big_cells(cfg: &VectorConfig, poset: &SubspacePoset, topes: &[Tope], walls: &[Wall]) -> Vec<BigCell> {
    let mut parent: Vec<usize> = (0..topes.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for w in walls {
        let h = poset.get(w.hyperplane);
        let singular = cone_contains(cfg.dim(), &cfg.sublist(&h.members), &w.facet_witness);
        if !singular {
            let (ra, rb) = (root(&mut parent, w.tope_a), root(&mut parent, w.tope_b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for t in 0..topes.len() {
        let r = root(&mut parent, t);
        groups.entry(r).or_default().push(t);
    }
    groups
        .into_values()
        .enumerate()
        .map(|(id, tope_ids)| BigCell {
            id,
            witness: topes[tope_ids[0]].witness.clone(),
            tope_ids,
        })
        .collect()
}

/// Exact test of `γ ∈ τ − B(X)`: some `z ∈ B(X)` puts `γ + z` strictly inside `τ`.
pub fn in_tope_minus_zonotope(cfg: &VectorConfig, normals: &[IntVector], tope: &Tope, gamma: &RatVector) -> bool {
    let m = cfg.len();
    // variables: t_0..t_{m-1} in [0,1], then eps
    let mut lp = LinearProgram::new(m + 1);
    for i in 0..m {
        lp.set_nonnegative(i);
        let mut row = vec![BigRational::zero(); m + 1];
        row[i] = BigRational::one();
        lp.add(row, Relation::Le, BigRational::one());
    }
    let mut cap = vec![BigRational::zero(); m + 1];
    cap[m] = BigRational::one();
    lp.add(cap.clone(), Relation::Le, BigRational::one());
    for (n, &s) in normals.iter().zip(&tope.signs) {
        let s = BigRational::from_integer(s.into());
        let mut row: Vec<BigRational> = cfg.vectors().iter().map(|a| int_rat(&a.dot(n)) * &s).collect();
        row.push(-BigRational::one());
        lp.add(row, Relation::Ge, -(gamma.dot_int(n) * &s));
    }
    match lp.maximize(&cap) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    }
}
