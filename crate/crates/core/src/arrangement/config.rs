use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{determinant, int_rat, IntMatrix, IntVector, LinearProgram, RatVector, Relation};

/// The list X of nonzero integer vectors spanning `Q^d`. Repeats are allowed
/// and order matters (indices name the vectors everywhere else).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorConfig {
    dim: usize,
    vectors: Vec<IntVector>,
}

impl VectorConfig {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[IntVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &IntVector {
        &self.vectors[i]
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.vectors)
    }

    pub fn sublist(&self, indices: &[usize]) -> Vec<IntVector> {
        indices.iter().map(|&i| self.vectors[i].clone()).collect()
    }

    /// A functional `u` with `<u, a> >= 1` for every vector, scaled to be
    /// integral, or `None` when the cone is not pointed.
    pub fn pointed_functional(&self) -> Option<IntVector> {
        pointed_functional(self.dim, &self.vectors)
    }
}

/// Validates and builds a configuration.
pub fn build_config(dim: usize, vectors: Vec<IntVector>) -> Result<VectorConfig> {
    for (index, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
        if v.is_zero() {
            return Err(Error::ZeroVector { index });
        }
    }
    let rank = IntMatrix::from_columns(dim, &vectors).rank();
    if rank < dim {
        return Err(Error::NotSpanning { rank, dim });
    }
    Ok(VectorConfig { dim, vectors })
}

/// Convenience constructor from small integer rows.
pub fn config_from_i64(dim: usize, vectors: &[&[i64]]) -> Result<VectorConfig> {
    build_config(dim, vectors.iter().map(|v| IntVector::from_i64(v)).collect())
}

pub fn pointed_functional(dim: usize, vectors: &[IntVector]) -> Option<IntVector> {
    if dim == 0 || vectors.is_empty() {
        return Some(IntVector::zeros(dim));
    }
    let mut lp = LinearProgram::new(dim);
    for a in vectors {
        lp.add(a.to_rat().0, Relation::Ge, BigRational::one());
    }
    let p = lp.feasible_point()?;
    Some(RatVector(p).clear_denominators())
}

/// True iff some `u` is strictly positive on every vector.
pub fn is_pointed(cfg: &VectorConfig) -> bool {
    cfg.pointed_functional().is_some()
}

/// Lattice volume of the zonotope: sum of `|det|` over the bases in X.
pub fn delta(cfg: &VectorConfig) -> BigInt {
    let d = cfg.dim();
    let mut total = BigInt::zero();
    for_each_subset(cfg.len(), d, &mut |idx| {
        let m = IntMatrix::from_columns(d, &cfg.sublist(idx));
        total += determinant(&m).expect("square").abs();
    });
    total
}

/// Calls `f` with every `k`-subset of `0..n`, in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Exact test of `x ∈ B(X) = {Σ t_i a_i : 0 <= t_i <= 1}`.
pub fn zonotope_contains(cfg: &VectorConfig, x: &RatVector) -> bool {
    let m = cfg.len();
    let mut lp = LinearProgram::new(m);
    for i in 0..m {
        lp.set_nonnegative(i);
        let mut row = vec![BigRational::zero(); m];
        row[i] = BigRational::one();
        lp.add(row, Relation::Le, BigRational::one());
    }
    for r in 0..cfg.dim() {
        let row = cfg.vectors().iter().map(|a| int_rat(&a[r])).collect();
        lp.add(row, Relation::Eq, x[r].clone());
    }
    lp.feasible_point().is_some()
}

/// Exact test of `x ∈ C(Y)`, the closed cone generated by `vectors`.
pub fn cone_contains(dim: usize, vectors: &[IntVector], x: &RatVector) -> bool {
    if vectors.is_empty() {
        return x.is_zero();
    }
    let m = vectors.len();
    let mut lp = LinearProgram::new(m);
    for i in 0..m {
        lp.set_nonnegative(i);
    }
    for r in 0..dim {
        let row = vectors.iter().map(|a| int_rat(&a[r])).collect();
        lp.add(row, Relation::Eq, x[r].clone());
    }
    lp.feasible_point().is_some()
}
