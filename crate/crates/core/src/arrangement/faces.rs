use num::{BigInt, BigRational, One, Signed, Zero};

use super::config::VectorConfig;
use super::subspace::{restrict_config, rational_subspaces, RationalSubspace, SubspacePoset};
use super::topes::{enumerate_topes, find_tope, hyperplane_normals, sign_vector, Tope};
use crate::error::{Error, GenericityFailure, Result};
use crate::exactlin::solve::solve_square;
use crate::exactlin::{int_rat, sign_of, IntVector, RatVector};

/// A regular face for `X \ r`, recorded by a primitive integral witness
/// `u ∈ r^⊥` and the split of `X \ r` by the sign of `<u, a>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub subspace: usize,
    pub u: IntVector,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Face {
    /// The face `{0}` attached to the whole space.
    pub fn trivial(subspace: usize, dim: usize) -> Face {
        Face {
            subspace,
            u: IntVector::zeros(dim),
            a: vec![],
            b: vec![],
        }
    }

    pub fn negate(&self) -> Face {
        Face {
            subspace: self.subspace,
            u: -&self.u,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// The same face seen from `t ⊇ r`: only the vectors of `X ∩ t` are kept.
    pub fn restrict_to(&self, t: &RationalSubspace) -> Face {
        let keep = |v: &Vec<usize>| v.iter().copied().filter(|i| t.members.contains(i)).collect();
        Face {
            subspace: self.subspace,
            u: self.u.clone(),
            a: keep(&self.a),
            b: keep(&self.b),
        }
    }
}

/// Builds the face of `u` for `X \ r`.
pub fn make_face(cfg: &VectorConfig, r: &RationalSubspace, u: &RatVector) -> Result<Face> {
    if u.dim() != cfg.dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim(),
            got: u.dim(),
        });
    }
    if (0..r.dim).any(|j| !u.dot_int(&r.basis.column(j)).is_zero()) {
        return Err(Error::Invalid {
            detail: format!("witness {u} is not orthogonal to subspace {}", r.id),
        });
    }
    let ui = u.clear_denominators();
    let (mut a, mut b) = (vec![], vec![]);
    for i in (0..cfg.len()).filter(|i| !r.members.contains(i)) {
        match ui.dot(cfg.vector(i)).sign() {
            num::bigint::Sign::Plus => a.push(i),
            num::bigint::Sign::Minus => b.push(i),
            num::bigint::Sign::NoSign => return Err(Error::NotRegular { index: i }),
        }
    }
    Ok(Face {
        subspace: r.id,
        u: ui,
        a,
        b,
    })
}

/// One face per rational subspace, indexed by subspace id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCollection {
    pub faces: Vec<Face>,
}

impl FaceCollection {
    pub fn face(&self, r: usize) -> &Face {
        &self.faces[r]
    }
}

/// Orthogonal projection onto `r` for the scalar product `gram`
/// (`None` is the standard dot product). Returns the point and its
/// coordinates in the saturated basis.
pub fn project(r: &RationalSubspace, gram: Option<&[Vec<BigRational>]>, x: &RatVector) -> (RatVector, RatVector) {
    let d = r.ambient_dim();
    let g = |v: &RatVector| -> RatVector {
        match gram {
            None => v.clone(),
            Some(gm) => RatVector((0..d).map(|i| (0..d).map(|j| &gm[i][j] * &v[j]).sum()).collect()),
        }
    };
    let cols: Vec<RatVector> = (0..r.dim).map(|j| r.basis.column(j).to_rat()).collect();
    let gcols: Vec<RatVector> = cols.iter().map(&g).collect();
    let m: Vec<Vec<BigRational>> = (0..r.dim)
        .map(|i| (0..r.dim).map(|j| cols[i].dot(&gcols[j])).collect())
        .collect();
    let rhs: Vec<BigRational> = gcols.iter().map(|c| c.dot(x)).collect();
    let coords = RatVector(solve_square(&m, &rhs).expect("Gram matrix is positive definite"));
    (r.embed_rat(&coords), coords)
}

fn apply_gram(gram: Option<&[Vec<BigRational>]>, v: &RatVector) -> RatVector {
    match gram {
        None => v.clone(),
        Some(gm) => RatVector(gm.iter().map(|row| row.iter().zip(&v.0).map(|(a, b)| a * b).sum()).collect()),
    }
}

/// Exact positive-definiteness test via Gaussian elimination without pivoting
/// (all leading pivots must be positive).
pub fn is_positive_definite(gram: &[Vec<BigRational>]) -> bool {
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return false;
            }
        }
    }
    let mut a: Vec<Vec<BigRational>> = gram.to_vec();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    true
}

/// A collection non-positive on `tope`: every proper `r` gets a regular
/// witness `u_r ∈ r^⊥` with `<u_r, x0> < 0` for the tope's witness `x0`.
///
/// The starting point is `u0 = -p_{r^⊥}(x0)`. When `u0` is orthogonal to some
/// `a ∉ r` it is moved by `ε·w` with `w = Σ c^j n_j` over the normals of `r`,
/// trying `c = 2, 3, …` and `ε = 1/2, 1/4, …` in a fixed order.
pub fn collection_nonpositive_on_tope(cfg: &VectorConfig, poset: &SubspacePoset, tope: &Tope) -> FaceCollection {
    collection_nonpositive_at(cfg, poset, &tope.witness)
}

/// Same construction from an arbitrary point `x0` lying on no rational hyperplane.
pub fn collection_nonpositive_at(cfg: &VectorConfig, poset: &SubspacePoset, x0: &RatVector) -> FaceCollection {
    let faces = poset
        .all()
        .iter()
        .map(|r| {
            if r.is_whole() {
                return Face::trivial(r.id, cfg.dim());
            }
            let (pr, _) = project(r, None, x0);
            let u0 = -&(x0 - &pr);
            let good = |u: &RatVector| u.dot(x0).is_negative() && make_face(cfg, r, u).is_ok();
            if good(&u0) {
                return make_face(cfg, r, &u0).unwrap();
            }
            for c in 2i64.. {
                let mut w = RatVector::zeros(cfg.dim());
                let mut cj = BigInt::one();
                for j in 0..r.normals.rows() {
                    w = &w + &r.normals.row(j).scale(&cj).to_rat();
                    cj *= c;
                }
                let mut eps = BigRational::one();
                for _ in 0..64 {
                    eps /= BigRational::from_integer(2.into());
                    let u = &u0 + &w.scale(&eps);
                    if good(&u) {
                        return make_face(cfg, r, &u).unwrap();
                    }
                }
            }
            unreachable!()
        })
        .collect();
    FaceCollection { faces }
}

/// The β-collection: `F_r^β` is the face of `p_{r^⊥} β`, together with the
/// tope of `X ∩ r` (in saturated coordinates) containing `p_r β`.
#[derive(Clone, Debug)]
pub struct BetaCollection {
    pub faces: FaceCollection,
    pub topes: Vec<usize>,
    pub projections: Vec<RatVector>,
}

pub fn collection_from_beta(
    cfg: &VectorConfig,
    poset: &SubspacePoset,
    beta: &RatVector,
    gram: Option<&[Vec<BigRational>]>,
) -> Result<BetaCollection> {
    if beta.dim() != cfg.dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim(),
            got: beta.dim(),
        });
    }
    let mut faces = Vec::new();
    let mut topes = Vec::new();
    let mut projections = Vec::new();
    for r in poset.all() {
        let (pr, coords) = project(r, gram, beta);
        let sub = restrict_config(cfg, r);
        let sp = rational_subspaces(&sub);
        let normals = hyperplane_normals(&sp);
        if sign_vector(&normals, &coords).contains(&0) {
            return Err(Error::NotGeneric {
                subspace: r.id,
                reason: GenericityFailure::OnHyperplaneInSubspace,
            });
        }
        let u = apply_gram(gram, &(beta - &pr));
        let face = if r.is_whole() {
            Face::trivial(r.id, cfg.dim())
        } else {
            if (0..cfg.len()).any(|i| !r.members.contains(&i) && sign_of(&u.dot_int(cfg.vector(i))) == 0) {
                return Err(Error::NotGeneric {
                    subspace: r.id,
                    reason: GenericityFailure::OrthogonalToSomeVector,
                });
            }
            make_face(cfg, r, &u)?
        };
        let ts = enumerate_topes(sub.dim(), &normals);
        topes.push(find_tope(&ts, &normals, &coords).expect("generic point lies in a tope"));
        faces.push(face);
        projections.push(pr);
    }
    Ok(BetaCollection {
        faces: FaceCollection { faces },
        topes,
        projections,
    })
}

/// Converts a Gram matrix of small integers or fractions into exact rationals.
pub fn gram_from_i64(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| int_rat(&x.into())).collect()).collect()
}
