use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{BigRational, One, Zero};

use crate::arrangement::RationalSubspace;
use crate::exactlin::IntVector;

pub type Evaluator = dyn Fn(&IntVector) -> BigRational + Send + Sync;

/// Support certificate: the function vanishes outside
/// `offset + subspace + N·rays` (the rays generate the support as a monoid).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSupport {
    pub offset: IntVector,
    pub rays: Vec<IntVector>,
    pub subspace: Option<RationalSubspace>,
}

impl ConeSupport {
    pub fn point(dim: usize) -> ConeSupport {
        ConeSupport {
            offset: IntVector::zeros(dim),
            rays: vec![],
            subspace: None,
        }
    }
}

/// A map `Z^d → Q` evaluated pointwise with a per-instance memo.
///
/// Clones share the evaluator and the memo; [`LatticeFunction::detached`]
/// gives an instance with a fresh memo.
#[derive(Clone)]
pub struct LatticeFunction {
    dim: usize,
    eval: Arc<Evaluator>,
    memo: Arc<Mutex<HashMap<IntVector, BigRational>>>,
    support: Option<Arc<ConeSupport>>,
}

impl fmt::Debug for LatticeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeFunction")
            .field("dim", &self.dim)
            .field("support", &self.support)
            .finish()
    }
}

impl LatticeFunction {
    pub fn new(dim: usize, eval: impl Fn(&IntVector) -> BigRational + Send + Sync + 'static) -> Self {
        LatticeFunction {
            dim,
            eval: Arc::new(eval),
            memo: Arc::new(Mutex::new(HashMap::new())),
            support: None,
        }
    }

    pub fn with_support(mut self, support: ConeSupport) -> Self {
        self.support = Some(Arc::new(support));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> Option<&ConeSupport> {
        self.support.as_deref()
    }

    /// Same evaluator and support hint, empty memo.
    pub fn detached(&self) -> Self {
        LatticeFunction {
            dim: self.dim,
            eval: self.eval.clone(),
            memo: Arc::new(Mutex::new(HashMap::new())),
            support: self.support.clone(),
        }
    }

    pub fn eval(&self, gamma: &IntVector) -> BigRational {
        debug_assert_eq!(gamma.dim(), self.dim);
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(gamma) {
            return v.clone();
        }
        // the lock is released while evaluating: evaluators recurse into
        // other functions and occasionally into this one
        let v = (self.eval)(gamma);
        self.memo
            .lock()
            .expect("memo poisoned")
            .insert(gamma.clone(), v.clone());
        v
    }

    pub fn eval_i64(&self, gamma: &[i64]) -> BigRational {
        self.eval(&IntVector::from_i64(gamma))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }

    pub fn add(&self, other: &LatticeFunction) -> LatticeFunction {
        let (f, g) = (self.clone(), other.clone());
        LatticeFunction::new(self.dim, move |x| f.eval(x) + g.eval(x))
    }

    pub fn sub(&self, other: &LatticeFunction) -> LatticeFunction {
        let (f, g) = (self.clone(), other.clone());
        LatticeFunction::new(self.dim, move |x| f.eval(x) - g.eval(x))
    }

    pub fn scale(&self, c: BigRational) -> LatticeFunction {
        let f = self.clone();
        let mut out = LatticeFunction::new(self.dim, move |x| &c * f.eval(x));
        out.support = self.support.clone();
        out
    }

    /// `γ ↦ f(γ + shift)`.
    pub fn translate(&self, shift: &IntVector) -> LatticeFunction {
        let (f, s) = (self.clone(), shift.clone());
        LatticeFunction::new(self.dim, move |x| f.eval(&(x + &s)))
    }

    /// Sum of several functions; the empty sum is zero.
    pub fn sum(dim: usize, parts: &[LatticeFunction]) -> LatticeFunction {
        let parts = parts.to_vec();
        LatticeFunction::new(dim, move |x| parts.iter().map(|p| p.eval(x)).sum())
    }
}

pub fn zero_function(dim: usize) -> LatticeFunction {
    LatticeFunction::new(dim, |_| BigRational::zero())
}

pub fn constant(dim: usize, c: BigRational) -> LatticeFunction {
    LatticeFunction::new(dim, move |_| c.clone())
}

pub fn delta0(dim: usize) -> LatticeFunction {
    LatticeFunction::new(dim, |x| {
        if x.is_zero() {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
    .with_support(ConeSupport::point(dim))
}

/// Indicator of a single lattice point.
pub fn indicator(point: IntVector) -> LatticeFunction {
    let dim = point.dim();
    LatticeFunction::new(dim, move |x| {
        if *x == point {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

/// Pulls a function on `Z^k` (saturated coordinates of `r`) back to the
/// ambient lattice, extended by zero off `r`.
pub fn extend_from_subspace(r: &RationalSubspace, g: &LatticeFunction) -> LatticeFunction {
    let (r2, g) = (r.clone(), g.clone());
    LatticeFunction::new(r.ambient_dim(), move |x| match r2.coordinates(x) {
        Some(c) => g.eval(&c),
        None => BigRational::zero(),
    })
}

/// Restricts an ambient function to `Γ ∩ r`, written in saturated coordinates.
pub fn restrict_to_subspace(r: &RationalSubspace, f: &LatticeFunction) -> LatticeFunction {
    let (r2, f) = (r.clone(), f.clone());
    LatticeFunction::new(r.dim, move |c| f.eval(&r2.embed(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn delta_values() {
        let d = delta0(2);
        assert_eq!(d.eval_i64(&[0, 0]), rat(1, 1));
        assert_eq!(d.eval_i64(&[1, 0]), rat(0, 1));
        assert_eq!(d.eval_i64(&[-3, 5]), rat(0, 1));
    }

    #[test]
    fn memo_and_detach() {
        let f = LatticeFunction::new(1, |x| BigRational::from_integer(x[0].clone() * 2));
        assert_eq!(f.eval_i64(&[3]), rat(6, 1));
        let g = f.clone();
        assert_eq!(g.memo_len(), 1);
        let h = f.detached();
        assert_eq!(h.memo_len(), 0);
        assert_eq!(h.eval_i64(&[3]), rat(6, 1));
    }

    #[test]
    fn concurrent_detached_instances() {
        let f = LatticeFunction::new(1, |x| BigRational::from_integer(x[0].clone()));
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let g = f.detached();
                std::thread::spawn(move || (0..50).map(|k| g.eval_i64(&[k * i])).sum::<BigRational>())
            })
            .collect();
        let sums: Vec<BigRational> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert_eq!(sums[2], rat(2 * 1225, 1));
    }
}
