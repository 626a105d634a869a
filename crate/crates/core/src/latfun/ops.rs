use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num::{BigInt, BigRational, One, Signed, Zero};

use super::function::{delta0, ConeSupport, LatticeFunction};
use crate::arrangement::{Face, RationalSubspace, VectorConfig};
use crate::error::{Error, Result};
use crate::exactlin::{int_rat, IntVector, LinearProgram, RatVector, Relation};

/// `(∇_a f)(γ) = f(γ) − f(γ − a)`.
pub fn nabla(a: &IntVector, f: &LatticeFunction) -> Result<LatticeFunction> {
    if a.is_zero() {
        return Err(Error::ZeroVector { index: 0 });
    }
    Ok(nabla_list(std::slice::from_ref(a), f))
}

/// `∇_Y f`, expanded once into `Σ_S (−1)^{|S|} f(γ − Σ_S a)` with equal
/// shifts merged.
pub fn nabla_list(list: &[IntVector], f: &LatticeFunction) -> LatticeFunction {
    if list.is_empty() {
        return f.clone();
    }
    let terms = difference_stencil(f.dim(), list);
    let f = f.clone();
    LatticeFunction::new(f.dim(), move |x| {
        terms
            .iter()
            .map(|(s, c)| BigRational::from_integer(c.clone()) * f.eval(&(x - s)))
            .sum()
    })
}

/// Shifts and integer coefficients of the stencil of `∇_Y`.
pub fn difference_stencil(dim: usize, list: &[IntVector]) -> Vec<(IntVector, BigInt)> {
    let mut terms: BTreeMap<IntVector, BigInt> = BTreeMap::new();
    terms.insert(IntVector::zeros(dim), BigInt::one());
    for a in list {
        let mut next: BTreeMap<IntVector, BigInt> = BTreeMap::new();
        for (s, c) in &terms {
            *next.entry(s.clone()).or_insert_with(BigInt::zero) += c;
            *next.entry(s + a).or_insert_with(BigInt::zero) -= c;
        }
        next.retain(|_, c| !c.is_zero());
        terms = next;
    }
    terms.into_iter().collect()
}

/// Memoized count of `Σ k_i l_i = γ` with `k_i ≥ 0`, truncated by a functional
/// `u` with `<u, l_i> ≥ 1`.
struct PartitionDp {
    list: Vec<IntVector>,
    u: IntVector,
    weights: Vec<BigInt>,
    memo: Vec<Mutex<HashMap<IntVector, BigInt>>>,
}

impl PartitionDp {
    fn new(list: Vec<IntVector>, u: IntVector) -> Self {
        let weights: Vec<BigInt> = list.iter().map(|l| u.dot(l)).collect();
        assert!(weights.iter().all(|w| w >= &BigInt::one()), "truncation functional must be positive on the list");
        let memo = list.iter().map(|_| Mutex::new(HashMap::new())).collect();
        PartitionDp { list, u, weights, memo }
    }

    fn count(&self, k: usize, gamma: &IntVector, ug: &BigInt) -> BigInt {
        if ug.is_negative() {
            return BigInt::zero();
        }
        if k == 0 || ug.is_zero() {
            return if gamma.is_zero() { BigInt::one() } else { BigInt::zero() };
        }
        if let Some(v) = self.memo[k - 1].lock().expect("memo poisoned").get(gamma) {
            return v.clone();
        }
        let a = &self.list[k - 1];
        let w = &self.weights[k - 1];
        let mut total = BigInt::zero();
        let mut g = gamma.clone();
        let mut ugj = ug.clone();
        while !ugj.is_negative() {
            total += self.count(k - 1, &g, &ugj);
            g = &g - a;
            ugj -= w;
        }
        self.memo[k - 1]
            .lock()
            .expect("memo poisoned")
            .insert(gamma.clone(), total.clone());
        total
    }

    fn eval(&self, gamma: &IntVector) -> BigInt {
        let ug = self.u.dot(gamma);
        self.count(self.list.len(), gamma, &ug)
    }
}

/// Partition function of an arbitrary list with a given truncation functional.
pub fn partition_function_list(dim: usize, list: &[IntVector], u: &IntVector) -> LatticeFunction {
    if list.is_empty() {
        return delta0(dim);
    }
    let dp = Arc::new(PartitionDp::new(list.to_vec(), u.clone()));
    LatticeFunction::new(dim, move |x| BigRational::from_integer(dp.eval(x))).with_support(ConeSupport {
        offset: IntVector::zeros(dim),
        rays: list.to_vec(),
        subspace: None,
    })
}

/// `P_X(γ)`: number of ways to write `γ` as a nonnegative integer combination of X.
pub fn partition_function(cfg: &VectorConfig) -> Result<LatticeFunction> {
    let u = cfg.pointed_functional().ok_or(Error::NotPointed)?;
    Ok(partition_function_list(cfg.dim(), cfg.vectors(), &u))
}

/// The signed list `[A, −B]`, its offset `−Σ_B b` and sign `(−1)^{|B|}`.
pub fn signed_list(cfg: &VectorConfig, face: &Face) -> (Vec<IntVector>, IntVector, i8) {
    let mut list: Vec<IntVector> = face.a.iter().map(|&i| cfg.vector(i).clone()).collect();
    let mut offset = IntVector::zeros(cfg.dim());
    for &i in &face.b {
        list.push(-cfg.vector(i));
        offset = &offset - cfg.vector(i);
    }
    let sign = if face.b.len().is_multiple_of(2) { 1 } else { -1 };
    (list, offset, sign)
}

/// The kernel `P^F_{X\r}`: `(−1)^{|B|} · P_{[A,−B]}(γ + Σ_B b)`.
pub fn kernel_pf(cfg: &VectorConfig, face: &Face) -> LatticeFunction {
    let (list, offset, sign) = signed_list(cfg, face);
    if list.is_empty() {
        return delta0(cfg.dim());
    }
    let dp = Arc::new(PartitionDp::new(list.clone(), face.u.clone()));
    let shift = -&offset;
    LatticeFunction::new(cfg.dim(), move |x| {
        let c = dp.eval(&(x + &shift));
        BigRational::from_integer(if sign < 0 { -c } else { c })
    })
    .with_support(ConeSupport {
        offset,
        rays: list,
        subspace: None,
    })
}

/// A single convolution value with the number of distinct kernel points used
/// and the number of ray combinations examined to find them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionValue {
    pub value: BigRational,
    pub terms: usize,
    pub examined: usize,
}

/// Convolution of a cone-supported kernel with functions supported on `Γ ∩ r`.
#[derive(Clone, Debug)]
pub struct Convolver {
    kernel: LatticeFunction,
    r: RationalSubspace,
    u: IntVector,
    weights: Vec<BigInt>,
    u_offset: BigInt,
}

impl Convolver {
    /// Finds an integral `u ⊥ r` with `<u, ray> ≥ 1` for every ray of the kernel.
    pub fn new(kernel: &LatticeFunction, r: &RationalSubspace) -> Result<Convolver> {
        let support = kernel.support().ok_or(Error::UnboundedConvolution)?;
        if support.subspace.is_some() {
            return Err(Error::UnboundedConvolution);
        }
        let d = kernel.dim();
        let u = transverse_functional(d, r, &support.rays).ok_or(Error::UnboundedConvolution)?;
        let weights = support.rays.iter().map(|l| u.dot(l)).collect();
        Ok(Convolver {
            kernel: kernel.clone(),
            r: r.clone(),
            u_offset: u.dot(&support.offset),
            u,
            weights,
        })
    }

    pub fn certificate(&self) -> &IntVector {
        &self.u
    }

    /// The kernel points `λ` with `γ − λ ∈ r`.
    pub fn kernel_points(&self, gamma: &IntVector) -> (Vec<IntVector>, usize) {
        let support = self.kernel.support().expect("checked in new");
        let budget = self.u.dot(gamma) - &self.u_offset;
        let mut found = BTreeSet::new();
        let mut examined = 0usize;
        if !budget.is_negative() {
            let mut acc = support.offset.clone();
            self.walk(0, &budget, &mut acc, gamma, &mut found, &mut examined);
        }
        (found.into_iter().collect(), examined)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        j: usize,
        budget: &BigInt,
        acc: &mut IntVector,
        gamma: &IntVector,
        found: &mut BTreeSet<IntVector>,
        examined: &mut usize,
    ) {
        let rays = &self.kernel.support().expect("checked in new").rays;
        if j == rays.len() {
            if budget.is_zero() {
                *examined += 1;
                if self.r.contains(&(gamma - &*acc)) {
                    found.insert(acc.clone());
                }
            }
            return;
        }
        let w = &self.weights[j];
        let mut rest = budget.clone();
        let start = acc.clone();
        while !rest.is_negative() {
            self.walk(j + 1, &rest, acc, gamma, found, examined);
            *acc = &*acc + &rays[j];
            rest -= w;
        }
        *acc = start;
    }

    pub fn eval(&self, g: &LatticeFunction, gamma: &IntVector) -> ConvolutionValue {
        let (points, examined) = self.kernel_points(gamma);
        let mut value = BigRational::zero();
        for lam in &points {
            let k = self.kernel.eval(lam);
            if !k.is_zero() {
                value += k * g.eval(&(gamma - lam));
            }
        }
        ConvolutionValue {
            value,
            terms: points.len(),
            examined,
        }
    }

    /// `kernel * g` as a lazy lattice function supported in `offset + r + cone`.
    pub fn apply(self, g: &LatticeFunction) -> LatticeFunction {
        let support = self.kernel.support().expect("checked in new");
        let hint = ConeSupport {
            offset: support.offset.clone(),
            rays: support.rays.clone(),
            subspace: Some(self.r.clone()),
        };
        let g = g.clone();
        let d = self.kernel.dim();
        LatticeFunction::new(d, move |x| self.eval(&g, x).value).with_support(hint)
    }
}

fn transverse_functional(dim: usize, r: &RationalSubspace, rays: &[IntVector]) -> Option<IntVector> {
    if rays.is_empty() {
        return Some(IntVector::zeros(dim));
    }
    let mut lp = LinearProgram::new(dim);
    for j in 0..r.dim {
        lp.add(r.basis.column(j).0.iter().map(int_rat).collect(), Relation::Eq, BigRational::zero());
    }
    for l in rays {
        lp.add(l.0.iter().map(int_rat).collect(), Relation::Ge, BigRational::one());
    }
    lp.feasible_point().map(|p| RatVector(p).clear_denominators())
}

/// `(kernel * g)(γ)` for `g` supported on `Γ ∩ r`.
pub fn convolve_cone(
    kernel: &LatticeFunction,
    g: &LatticeFunction,
    r: &RationalSubspace,
    gamma: &IntVector,
) -> Result<ConvolutionValue> {
    Ok(Convolver::new(kernel, r)?.eval(g, gamma))
}

/// `kernel * g` as a lattice function.
pub fn convolve(kernel: &LatticeFunction, g: &LatticeFunction, r: &RationalSubspace) -> Result<LatticeFunction> {
    Ok(Convolver::new(kernel, r)?.apply(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{config_from_i64, make_face, rational_subspaces};
    use crate::exactlin::rat;
    use crate::latfun::function::{constant, extend_from_subspace, indicator};

    #[test]
    fn nabla_examples() {
        let d = delta0(2);
        let e1 = IntVector::from_i64(&[1, 0]);
        let n = nabla(&e1, &d).unwrap();
        assert_eq!(n.eval_i64(&[0, 0]), rat(1, 1));
        assert_eq!(n.eval_i64(&[1, 0]), rat(-1, 1));
        assert_eq!(n.eval_i64(&[2, 0]), rat(0, 1));
        assert!(nabla(&IntVector::zeros(2), &d).is_err());
        let c = constant(2, rat(1, 1));
        assert_eq!(nabla(&e1, &c).unwrap().eval_i64(&[4, -2]), rat(0, 1));
        let sq = LatticeFunction::new(1, |x| BigRational::from_integer(&x[0] * &x[0]));
        let two = nabla_list(&[IntVector::from_i64(&[1]), IntVector::from_i64(&[1])], &sq);
        for k in -5..5 {
            assert_eq!(two.eval_i64(&[k]), rat(2, 1));
        }
    }

    #[test]
    fn nabla_of_partition_function() {
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let p = partition_function(&cfg).unwrap();
        let n = nabla(&IntVector::from_i64(&[1, 0]), &p).unwrap();
        for a in -3..6 {
            for b in -3..6 {
                let want = if a == 0 && b >= 0 { 1 } else { 0 };
                assert_eq!(n.eval_i64(&[a, b]), rat(want, 1), "{a},{b}");
            }
        }
    }

    #[test]
    fn partition_function_values() {
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = partition_function(&cfg).unwrap();
        assert_eq!(p.eval_i64(&[2, 1]), rat(2, 1));
        assert_eq!(p.eval_i64(&[0, 0]), rat(1, 1));
        assert_eq!(p.eval_i64(&[-1, 0]), rat(0, 1));
        let bad = config_from_i64(1, &[&[2], &[-1]]).unwrap();
        assert_eq!(partition_function(&bad).unwrap_err(), Error::NotPointed);
    }

    #[test]
    fn one_dimensional_kernel_is_minus_theta4() {
        let cfg = config_from_i64(1, &[&[2], &[-1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let face = make_face(&cfg, p.zero(), &RatVector::from_i64(&[1])).unwrap();
        let k = kernel_pf(&cfg, &face);
        for n in -12i64..=12 {
            let theta4 = if n >= 0 { (n + 1) / 2 } else { 0 };
            assert_eq!(k.eval_i64(&[n]), rat(-theta4, 1), "n={n}");
        }
    }

    #[test]
    fn kernel_enumeration_oracle() {
        // A = ∅, B = X: P^F(γ) = −#{h ≥ 0 : Σ (h_i + 1)(−a_i) = γ}
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let face = make_face(&cfg, p.zero(), &RatVector::from_i64(&[-1, -2])).unwrap();
        let k = kernel_pf(&cfg, &face);
        for x in -8i64..=2 {
            for y in -8i64..=2 {
                let mut count = 0;
                for h1 in 0..10 {
                    for h2 in 0..10 {
                        for h3 in 0..10 {
                            if -(h1 + 1) - (h3 + 1) == x && -(h2 + 1) - (h3 + 1) == y {
                                count += 1;
                            }
                        }
                    }
                }
                assert_eq!(k.eval_i64(&[x, y]), rat(-count, 1), "({x},{y})");
            }
        }
        assert_eq!(k.eval_i64(&[-4, -4]), rat(-3, 1));
    }

    #[test]
    fn convolution_with_delta_and_on_diagonal() {
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let zero = p.zero();
        let g = LatticeFunction::new(2, |x| BigRational::from_integer(&x[0] * 3 + &x[1]));
        let g0 = indicator(IntVector::zeros(2)).scale(rat(5, 1));
        let c = convolve_cone(&delta0(2), &g0, zero, &IntVector::from_i64(&[0, 0])).unwrap();
        assert_eq!(c.value, rat(5, 1));
        let whole = p.whole();
        let c = convolve_cone(&delta0(2), &g, whole, &IntVector::from_i64(&[2, 7])).unwrap();
        assert_eq!((c.value, c.terms), (rat(13, 1), 1));

        // kernel for r = diagonal with A = [e1], B = [e2], g ≡ 1 on the diagonal
        let diag = p.find_by_members(&[2]).unwrap();
        let face = make_face(&cfg, diag, &RatVector::from_i64(&[1, -1])).unwrap();
        let k = kernel_pf(&cfg, &face);
        let one_on_diag = extend_from_subspace(diag, &constant(1, rat(1, 1)));
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                // direct enumeration: λ = k·e1 − (h+1)·e2, γ − λ on the diagonal
                let mut want = 0i64;
                for kk in 0..30 {
                    for h in 0..30 {
                        let (l1, l2) = (kk, -(h + 1));
                        if a - l1 == b - l2 {
                            want -= 1;
                        }
                    }
                }
                let c = convolve_cone(&k, &one_on_diag, diag, &IntVector::from_i64(&[a, b])).unwrap();
                assert_eq!(c.value, rat(want, 1), "({a},{b})");
                assert!(c.terms <= c.examined);
            }
        }
    }

    #[test]
    fn unbounded_convolution_rejected() {
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let line = p.find_by_members(&[0]).unwrap();
        // the kernel P_X has a ray inside r: no transverse certificate
        let px = partition_function(&cfg).unwrap();
        assert_eq!(
            convolve_cone(&px, &delta0(2), line, &IntVector::zeros(2)).unwrap_err(),
            Error::UnboundedConvolution
        );
    }
}
