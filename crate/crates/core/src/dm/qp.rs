use std::collections::BTreeMap;

use num::{BigInt, BigRational, Zero};
use serde::Serialize;

use super::poly::{monomial_value, monomials_up_to, MonomialSerial, Polynomial};
use crate::arrangement::{for_each_subset, restrict_config, RationalSubspace, VectorConfig};
use crate::error::{Error, Result};
use crate::exactlin::solve::solve_rational_rows;
use crate::exactlin::{determinant, int_rat, lattice_intersection, IntMatrix, IntVector, Sublattice};
use crate::latfun::{LatticeFunction, Window};

/// A function on `Γ ∩ r` that is polynomial on each coset of a finite-index
/// sublattice. Pieces are polynomials in the saturated coordinates of `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    carrier: RationalSubspace,
    period: Sublattice,
    pieces: BTreeMap<IntVector, Polynomial>,
    degree_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceSerial {
    pub coset: Vec<String>,
    pub text: String,
    pub monomials: Vec<MonomialSerial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiPolynomialSerial {
    pub carrier_basis: Vec<Vec<String>>,
    pub period_basis: Vec<Vec<String>>,
    pub degree_bound: usize,
    pub pieces: Vec<PieceSerial>,
}

/// `Λ(X ∩ r)`: intersection of the lattices spanned by the bases of `r`
/// contained in `X ∩ r`, in the saturated coordinates of `r`.
pub fn period_lattice(cfg: &VectorConfig, r: &RationalSubspace) -> Sublattice {
    let sub = restrict_config(cfg, r);
    let k = sub.dim();
    let mut acc = Sublattice::full(k);
    for_each_subset(sub.len(), k, &mut |idx| {
        let m = IntMatrix::from_columns(k, &sub.sublist(idx));
        if !determinant(&m).expect("square").is_zero() {
            let l = Sublattice::from_generators(&m).expect("basis");
            acc = lattice_intersection(&acc, &l).expect("same dimension");
        }
    });
    acc
}

/// Degree bound `|X ∩ r| − dim r`.
pub fn degree_bound(r: &RationalSubspace) -> usize {
    r.members.len() - r.dim
}

impl QuasiPolynomial {
    pub fn zero(carrier: RationalSubspace) -> QuasiPolynomial {
        let k = carrier.dim;
        let mut pieces = BTreeMap::new();
        pieces.insert(IntVector::zeros(k), Polynomial::zero(k));
        QuasiPolynomial {
            carrier,
            period: Sublattice::full(k),
            pieces,
            degree_bound: 0,
        }
    }

    pub fn from_pieces(
        carrier: RationalSubspace,
        period: Sublattice,
        pieces: BTreeMap<IntVector, Polynomial>,
        degree_bound: usize,
    ) -> QuasiPolynomial {
        assert_eq!(period.dim(), carrier.dim);
        assert_eq!(pieces.len(), period.coset_representatives().len());
        QuasiPolynomial {
            carrier,
            period,
            pieces,
            degree_bound,
        }
    }

    pub fn carrier(&self) -> &RationalSubspace {
        &self.carrier
    }

    pub fn period(&self) -> &Sublattice {
        &self.period
    }

    pub fn pieces(&self) -> &BTreeMap<IntVector, Polynomial> {
        &self.pieces
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// The same pieces placed on another subspace of the same dimension
    /// (used to move a result computed in induced coordinates back to the
    /// ambient space).
    pub fn with_carrier(&self, carrier: RationalSubspace) -> QuasiPolynomial {
        assert_eq!(carrier.dim, self.carrier.dim);
        QuasiPolynomial {
            carrier,
            ..self.clone()
        }
    }

    pub fn eval_coords(&self, c: &IntVector) -> BigRational {
        let rep = self.period.reduce(c);
        let x: Vec<BigRational> = c.0.iter().map(int_rat).collect();
        self.pieces[&rep].eval(&x)
    }

    /// Value at an ambient lattice point of the carrier.
    pub fn evaluate(&self, gamma: &IntVector) -> Result<BigRational> {
        let c = self.carrier.coordinates(gamma).ok_or_else(|| Error::PointOffCarrier {
            point: gamma.to_string(),
        })?;
        Ok(self.eval_coords(&c))
    }

    /// Ambient lattice function, zero off the carrier.
    pub fn to_function(&self) -> LatticeFunction {
        let q = self.clone();
        LatticeFunction::new(self.carrier.ambient_dim(), move |x| match q.carrier.coordinates(x) {
            Some(c) => q.eval_coords(&c),
            None => BigRational::zero(),
        })
    }

    /// Lattice function on `Z^{dim r}` (saturated coordinates).
    pub fn to_coord_function(&self) -> LatticeFunction {
        let q = self.clone();
        LatticeFunction::new(self.carrier.dim, move |c| q.eval_coords(c))
    }

    /// Rewrites both operands over the intersection of their periods.
    fn refine(&self, period: &Sublattice) -> BTreeMap<IntVector, Polynomial> {
        period
            .coset_representatives()
            .into_iter()
            .map(|rep| {
                let own = self.period.reduce(&rep);
                (rep, self.pieces[&own].clone())
            })
            .collect()
    }

    fn combine(&self, other: &QuasiPolynomial, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> QuasiPolynomial {
        assert_eq!(self.carrier.basis, other.carrier.basis, "different carriers");
        let period = lattice_intersection(&self.period, &other.period).expect("same dimension");
        let a = self.refine(&period);
        let b = other.refine(&period);
        let pieces = a.into_iter().map(|(rep, p)| {
            let q = f(&p, &b[&rep]);
            (rep, q)
        });
        QuasiPolynomial {
            carrier: self.carrier.clone(),
            pieces: pieces.collect(),
            period,
            degree_bound: self.degree_bound.max(other.degree_bound),
        }
        .canonical()
    }

    pub fn add(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        self.combine(other, |p, q| p.add(q))
    }

    pub fn sub(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        self.combine(other, |p, q| p.sub(q))
    }

    /// Coarsest equivalent description: pieces are merged while every
    /// coset of a coarser generator lattice carries the same polynomial.
    /// Only the trivial coarsening (all pieces equal) is attempted.
    pub fn canonical(self) -> QuasiPolynomial {
        let first = self.pieces.values().next().cloned();
        match first {
            Some(p) if self.pieces.values().all(|q| *q == p) && self.pieces.len() > 1 => {
                let k = self.carrier.dim;
                let mut pieces = BTreeMap::new();
                pieces.insert(IntVector::zeros(k), p);
                QuasiPolynomial {
                    period: Sublattice::full(k),
                    pieces,
                    ..self
                }
            }
            _ => self,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.values().all(Polynomial::is_zero)
    }

    /// Equality as functions on `Γ ∩ r`.
    pub fn same_function(&self, other: &QuasiPolynomial) -> bool {
        self.carrier.basis == other.carrier.basis && self.sub(other).is_zero()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.pieces.values().filter_map(Polynomial::degree).max()
    }

    pub fn render(&self) -> String {
        if self.pieces.len() == 1 {
            return self.pieces.values().next().unwrap().to_string();
        }
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(rep, p)| format!("{rep}: {p}"))
            .collect();
        format!("{{{}}}", parts.join("; "))
    }

    pub fn serial(&self) -> QuasiPolynomialSerial {
        let cols = |m: &IntMatrix| -> Vec<Vec<String>> {
            m.columns()
                .iter()
                .map(|c| c.0.iter().map(BigInt::to_string).collect())
                .collect()
        };
        QuasiPolynomialSerial {
            carrier_basis: cols(&self.carrier.basis),
            period_basis: cols(self.period.basis()),
            degree_bound: self.degree_bound,
            pieces: self
                .pieces
                .iter()
                .map(|(rep, p)| PieceSerial {
                    coset: rep.0.iter().map(BigInt::to_string).collect(),
                    text: p.to_string(),
                    monomials: p.serial(),
                })
                .collect(),
        }
    }
}

/// Exact interpolation from samples keyed by saturated coordinates. Every
/// sample of a coset is used; the system must have a unique solution.
pub fn fit_from_samples(
    samples: &BTreeMap<IntVector, BigRational>,
    carrier: &RationalSubspace,
    period: &Sublattice,
    degree_bound: usize,
) -> Result<QuasiPolynomial> {
    let k = carrier.dim;
    let monos = monomials_up_to(k, degree_bound as u32);
    let mut by_coset: BTreeMap<IntVector, Vec<(&IntVector, &BigRational)>> = BTreeMap::new();
    for (p, v) in samples {
        by_coset.entry(period.reduce(p)).or_default().push((p, v));
    }
    let mut pieces = BTreeMap::new();
    for rep in period.coset_representatives() {
        let pts = by_coset.get(&rep).map(Vec::as_slice).unwrap_or(&[]);
        let row = |p: &IntVector| -> Vec<BigRational> {
            let x: Vec<BigRational> = p.0.iter().map(int_rat).collect();
            monos.iter().map(|e| monomial_value(e, &x)).collect()
        };
        let rows: Vec<Vec<BigRational>> = pts.iter().map(|(p, _)| row(p)).collect();
        let rhs: Vec<BigRational> = pts.iter().map(|(_, v)| (*v).clone()).collect();
        let sol = match solve_rational_rows(&rows, &rhs, monos.len()) {
            Some(s) => s,
            None => {
                // locate the first sample that breaks consistency
                let mut witness = String::new();
                for n in 1..=pts.len() {
                    if solve_rational_rows(&rows[..n], &rhs[..n], monos.len()).is_none() {
                        witness = pts[n - 1].0.to_string();
                        break;
                    }
                }
                return Err(Error::Inconsistent { witness });
            }
        };
        if !sol.kernel.is_empty() {
            return Err(Error::Underdetermined { coset: rep.to_string() });
        }
        let poly = Polynomial::from_terms(k, monos.iter().cloned().zip(sol.particular.0));
        pieces.insert(rep, poly);
    }
    Ok(QuasiPolynomial {
        carrier: carrier.clone(),
        period: period.clone(),
        pieces,
        degree_bound,
    }
    .canonical())
}

/// Grid samples `c + L k`, `k ∈ [lo, hi]^{dim r}`, for every coset of the
/// period `L`, with `L` LLL-reduced and `c` a short representative so that
/// samples stay close to the origin.
pub fn coset_grid(period: &Sublattice, lo: i64, hi: i64) -> Vec<IntVector> {
    let k = period.dim();
    let box_pts = Window::range(k, lo, hi);
    let reduced = period.reduced_basis();
    let mut out = Vec::new();
    for rep in period.coset_representatives() {
        let c = period.short_representative(&rep, &reduced);
        for kv in box_pts.points() {
            out.push(&c + &reduced.mul_vec(kv));
        }
    }
    out
}

/// Fits a quasi-polynomial of the given shape to `values` (a function of
/// saturated coordinates). Each coset is sampled on a centered box of side
/// `degree + 2`, which contains a unisolvent simplex plus spare points for
/// the consistency check; the box is widened once if that is not enough.
pub fn fit_quasipolynomial(
    values: &dyn Fn(&IntVector) -> BigRational,
    carrier: &RationalSubspace,
    period: &Sublattice,
    degree_bound: usize,
) -> Result<QuasiPolynomial> {
    let d = degree_bound as i64;
    let attempt = |lo: i64, hi: i64| {
        let samples: BTreeMap<IntVector, BigRational> = coset_grid(period, lo, hi)
            .into_iter()
            .map(|p| {
                let v = values(&p);
                (p, v)
            })
            .collect();
        fit_from_samples(&samples, carrier, period, degree_bound)
    };
    let lo = -(d / 2);
    match attempt(lo, lo + d + 1) {
        Err(Error::Underdetermined { .. }) => attempt(-2 * (d + 2), 2 * (d + 2)),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityReport {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<EqualityWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityWitness {
    pub point: String,
    pub expected: String,
    pub got: String,
}

/// Compares `qp` with `f` at the given ambient points of the carrier.
pub fn qp_equals_on(qp: &QuasiPolynomial, f: &LatticeFunction, points: &[IntVector]) -> Result<EqualityReport> {
    for (i, p) in points.iter().enumerate() {
        let a = qp.evaluate(p)?;
        let b = f.eval(p);
        if a != b {
            return Ok(EqualityReport {
                passed: false,
                checked: i + 1,
                witness: Some(EqualityWitness {
                    point: p.to_string(),
                    expected: b.to_string(),
                    got: a.to_string(),
                }),
            });
        }
    }
    Ok(EqualityReport {
        passed: true,
        checked: points.len(),
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{config_from_i64, rational_subspaces};
    use crate::exactlin::rat;
    use num::Integer;

    fn theta3(n: &BigInt) -> BigRational {
        int_rat(n) / rat(2, 1) + if n.is_even() { rat(0, 1) } else { rat(1, 2) }
    }

    #[test]
    fn period_lattices() {
        let one_d = config_from_i64(1, &[&[2], &[-1]]).unwrap();
        let p = rational_subspaces(&one_d);
        assert_eq!(period_lattice(&one_d, p.whole()).index(), &BigInt::from(2));
        let abc = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&abc);
        assert_eq!(period_lattice(&abc, p.whole()), Sublattice::full(2));
        let line = config_from_i64(2, &[&[3, 0], &[0, 1]]).unwrap();
        let p = rational_subspaces(&line);
        let r = p.find_by_members(&[0]).unwrap();
        assert_eq!(period_lattice(&line, r).index(), &BigInt::from(3));
    }

    #[test]
    fn fit_examples() {
        let abc = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&abc);
        let v = p.whole();
        let q = fit_quasipolynomial(&|c| int_rat(&c[1]) + rat(1, 1), v, &Sublattice::full(2), 1).unwrap();
        assert_eq!(q.render(), "n2 + 1");
        assert_eq!(q.evaluate(&IntVector::from_i64(&[5, 3])).unwrap(), rat(4, 1));

        let one_d = config_from_i64(1, &[&[2], &[-1]]).unwrap();
        let p1 = rational_subspaces(&one_d);
        let period = period_lattice(&one_d, p1.whole());
        let q = fit_quasipolynomial(&|c| theta3(&c[0]), p1.whole(), &period, 1).unwrap();
        assert_eq!(q.pieces().len(), 2);
        assert_eq!(q.evaluate(&IntVector::from_i64(&[7])).unwrap(), rat(4, 1));
        assert_eq!(q.pieces()[&IntVector::from_i64(&[0])].render("n"), "1/2*n");
        assert_eq!(q.pieces()[&IntVector::from_i64(&[1])].render("n"), "1/2*n + 1/2");

        let z = fit_quasipolynomial(&|_| rat(0, 1), v, &Sublattice::full(2), 1).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn fit_rejects_wrong_shape() {
        let abc = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&abc);
        let r = fit_quasipolynomial(
            &|c| int_rat(&c[0].clone().min(c[1].clone())),
            p.whole(),
            &Sublattice::full(2),
            1,
        );
        assert!(matches!(r, Err(Error::Inconsistent { .. })));
        let mut few = BTreeMap::new();
        few.insert(IntVector::from_i64(&[0, 0]), rat(1, 1));
        assert!(matches!(
            fit_from_samples(&few, p.whole(), &Sublattice::full(2), 1),
            Err(Error::Underdetermined { .. })
        ));
    }

    #[test]
    fn refit_is_identity_and_off_carrier_errors() {
        let abc = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&abc);
        let diag = p.find_by_members(&[2]).unwrap();
        let q = fit_quasipolynomial(&|c| int_rat(&c[0]) * rat(3, 1) - rat(2, 1), diag, &Sublattice::full(1), 1).unwrap();
        let f = q.to_coord_function();
        let again = fit_quasipolynomial(&|c| f.eval(c), diag, &Sublattice::full(1), 1).unwrap();
        assert_eq!(q, again);
        assert!(matches!(
            q.evaluate(&IntVector::from_i64(&[1, 2])),
            Err(Error::PointOffCarrier { .. })
        ));
        let pts: Vec<IntVector> = (-3..4).map(|k| IntVector::from_i64(&[k, k])).collect();
        assert!(qp_equals_on(&q, &q.to_function(), &pts).unwrap().passed);
        assert!(qp_equals_on(&q, &q.to_function(), &[]).unwrap().passed);
    }

    #[test]
    fn arithmetic_over_common_period() {
        let one_d = config_from_i64(1, &[&[2], &[-1]]).unwrap();
        let p1 = rational_subspaces(&one_d);
        let period = period_lattice(&one_d, p1.whole());
        let a = fit_quasipolynomial(&|c| theta3(&c[0]), p1.whole(), &period, 1).unwrap();
        let b = fit_quasipolynomial(&|c| int_rat(&c[0]) / rat(2, 1), p1.whole(), &Sublattice::full(1), 1).unwrap();
        let d = a.sub(&b);
        for n in -5i64..5 {
            let want = if n.rem_euclid(2) == 1 { rat(1, 2) } else { rat(0, 1) };
            assert_eq!(d.evaluate(&IntVector::from_i64(&[n])).unwrap(), want);
        }
        assert!(a.sub(&a).is_zero());
        assert!(a.same_function(&a.add(&b).sub(&b)));
    }
}
