use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigRational, One, Signed, Zero};

use crate::arrangement::{build_config, hyperplane_normals, pointed_functional, rational_subspaces, Face, VectorConfig};
use crate::error::{Error, Result};
use crate::exactlin::solve::{rank, solve_square};
use crate::exactlin::{determinant, int_rat, IntMatrix, IntVector, RatVector};

/// Weights of the open Newton-Cotes rule with `n` nodes `(j+1)/(n+1)` on
/// `[0, 1]`, exact for polynomials of degree below `n`.
fn open_weights(n: usize) -> Vec<BigRational> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<BigRational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(w) = cache.lock().expect("weight cache").get(&n) {
        return w.clone();
    }
    let nodes: Vec<BigRational> = (0..n).map(|j| frac(j + 1, n + 1)).collect();
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|k| nodes.iter().map(|s| pow(s, k)).collect())
        .collect();
    let rhs: Vec<BigRational> = (0..n).map(|k| frac(1, k + 1)).collect();
    let w = solve_square(&rows, &rhs).expect("distinct nodes give an invertible Vandermonde system");
    cache.lock().expect("weight cache").insert(n, w.clone());
    w
}

fn frac(a: usize, b: usize) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// `∫_{t0}^{t1} g(t) dt` for `g` polynomial of degree at most `degree`,
/// from `degree + 1` interior samples.
pub fn integrate_polynomial(
    t0: &BigRational,
    t1: &BigRational,
    degree: usize,
    mut g: impl FnMut(&BigRational) -> BigRational,
) -> BigRational {
    let n = degree + 1;
    let len = t1 - t0;
    let w = open_weights(n);
    let mut acc = BigRational::zero();
    for (j, wj) in w.iter().enumerate() {
        let s = t0 + &len * frac(j + 1, n + 1);
        acc += wj * g(&s);
    }
    acc * len
}

/// Exact evaluator of the multivariate spline of a list spanning `V`,
/// optionally scaled by a sign (used for the signed splines `T^F`).
///
/// The list is reordered so that a basis comes first; evaluation then
/// integrates out the last vector recursively,
/// `T_{[Y, a]}(x) = ∫_0^∞ T_Y(x − t a) dt`, down to the basis, where the
/// value is `1/|det|` on the closed cone and 0 elsewhere.
#[derive(Clone, Debug)]
pub struct SplineEvaluator {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    dim: usize,
    original: Vec<IntVector>,
    list: Vec<IntVector>,
    sign: BigRational,
    functional: IntVector,
    basis_inverse: Vec<Vec<BigRational>>,
    inv_det: BigRational,
    /// `normals[k]`: hyperplane normals of the prefix of length `dim + k`.
    normals: Vec<Vec<IntVector>>,
    memo: Mutex<HashMap<(usize, RatVector), BigRational>>,
}

impl SplineEvaluator {
    pub fn new(cfg: &VectorConfig) -> Result<SplineEvaluator> {
        Self::from_list(cfg.dim(), cfg.vectors().to_vec(), BigRational::one())
    }

    /// `sign · T_list`.
    pub fn from_list(dim: usize, list: Vec<IntVector>, sign: BigRational) -> Result<SplineEvaluator> {
        for (index, v) in list.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector { index });
            }
        }
        let mut basis = Vec::new();
        let mut rest = Vec::new();
        for v in &list {
            let mut trial: Vec<Vec<BigRational>> = basis.iter().map(|b: &IntVector| b.to_rat().0).collect();
            trial.push(v.to_rat().0);
            if basis.len() < dim && rank(&trial) == basis.len() + 1 {
                basis.push(v.clone());
            } else {
                rest.push(v.clone());
            }
        }
        if basis.len() < dim {
            return Err(Error::NotSpanning { rank: basis.len(), dim });
        }
        let functional = pointed_functional(dim, &list).ok_or(Error::NotPointed)?;

        let bmat = IntMatrix::from_columns(dim, &basis);
        let det = determinant(&bmat)?;
        let rows = bmat.to_rat_rows();
        let basis_inverse: Vec<Vec<BigRational>> = if dim == 0 {
            vec![]
        } else {
            let cols: Vec<Vec<BigRational>> = (0..dim)
                .map(|j| {
                    let e: Vec<BigRational> = (0..dim)
                        .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
                        .collect();
                    solve_square(&rows, &e).expect("basis is invertible")
                })
                .collect();
            (0..dim).map(|i| (0..dim).map(|j| cols[j][i].clone()).collect()).collect()
        };

        let ordered: Vec<IntVector> = basis.into_iter().chain(rest).collect();
        let mut normals = Vec::new();
        for k in dim..ordered.len() {
            let prefix = build_config(dim, ordered[..k].to_vec())?;
            normals.push(hyperplane_normals(&rational_subspaces(&prefix)));
        }
        Ok(SplineEvaluator {
            inner: Arc::new(Inner {
                dim,
                original: list,
                list: ordered,
                sign,
                functional,
                basis_inverse,
                inv_det: BigRational::one() / int_rat(&det.abs()),
                normals,
                memo: Mutex::new(HashMap::new()),
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// The list in the order it was given.
    pub fn list(&self) -> &[IntVector] {
        &self.inner.original
    }

    /// Degree `m − d` of the polynomial pieces.
    pub fn degree(&self) -> usize {
        self.inner.list.len() - self.inner.dim
    }

    pub fn sign(&self) -> &BigRational {
        &self.inner.sign
    }

    /// An integral functional positive on every vector of the list.
    pub fn functional(&self) -> &IntVector {
        &self.inner.functional
    }

    pub fn eval(&self, x: &RatVector) -> BigRational {
        assert_eq!(x.dim(), self.inner.dim, "point dimension");
        let v = self.level(self.inner.list.len(), x);
        &self.inner.sign * v
    }

    pub fn memo_len(&self) -> usize {
        self.inner.memo.lock().expect("spline memo").len()
    }

    fn level(&self, k: usize, x: &RatVector) -> BigRational {
        let inner = &*self.inner;
        if k == inner.dim {
            return self.base(x);
        }
        let key = (k, x.clone());
        if let Some(v) = inner.memo.lock().expect("spline memo").get(&key) {
            return v.clone();
        }
        let a = &inner.list[k - 1];
        let fa = int_rat(&a.dot(&inner.functional));
        let t_max = x.dot_int(&inner.functional) / fa;
        let mut value = BigRational::zero();
        if t_max.is_positive() {
            let mut cuts = vec![BigRational::zero(), t_max.clone()];
            for n in &inner.normals[k - 1 - inner.dim] {
                let na = a.dot(n);
                if na.is_zero() {
                    continue;
                }
                let t = x.dot_int(n) / int_rat(&na);
                if t.is_positive() && t < t_max {
                    cuts.push(t);
                }
            }
            cuts.sort();
            cuts.dedup();
            let degree = k - 1 - inner.dim;
            let ar = a.to_rat();
            for w in cuts.windows(2) {
                value += integrate_polynomial(&w[0], &w[1], degree, |t| self.level(k - 1, &(x - &ar.scale(t))));
            }
        }
        inner.memo.lock().expect("spline memo").insert(key, value.clone());
        value
    }

    fn base(&self, x: &RatVector) -> BigRational {
        let inner = &*self.inner;
        let inside = inner.basis_inverse.iter().all(|row| {
            let c: BigRational = row.iter().zip(&x.0).map(|(m, xi)| m * xi).sum();
            !c.is_negative()
        });
        if inside {
            inner.inv_det.clone()
        } else {
            BigRational::zero()
        }
    }
}

/// `T_X(x)`.
pub fn spline_eval(cfg: &VectorConfig, x: &RatVector) -> Result<BigRational> {
    Ok(SplineEvaluator::new(cfg)?.eval(x))
}

/// `T^F_{X\r} = (−1)^{|B|} T_{[A, −B]}` as an evaluator. Fails with
/// `NotSpanning` when `X \ r` does not span, since the signed spline is then
/// not a density on `V`.
pub fn signed_spline(cfg: &VectorConfig, face: &Face) -> Result<SplineEvaluator> {
    let mut list: Vec<IntVector> = face.a.iter().map(|&i| cfg.vector(i).clone()).collect();
    list.extend(face.b.iter().map(|&i| -cfg.vector(i)));
    let sign = if face.b.len().is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    SplineEvaluator::from_list(cfg.dim(), list, sign)
}

pub fn signed_spline_eval(cfg: &VectorConfig, face: &Face, x: &RatVector) -> Result<BigRational> {
    Ok(signed_spline(cfg, face)?.eval(x))
}
