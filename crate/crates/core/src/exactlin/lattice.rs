use num::{BigInt, BigRational, Integer, One, Zero};

use super::matrix::{hermite_normal_form, integer_kernel, IntMatrix};
use super::solve::solve_square;
use super::vector::{int_rat, IntVector};
use crate::error::{Error, Result};

/// A full-rank sublattice of `Z^d`, stored by its Hermite normal form so
/// that equal lattices compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    basis: IntMatrix,
    index: BigInt,
}

impl Sublattice {
    /// The sublattice generated by the columns of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Result<Self> {
        let h = hermite_normal_form(generators);
        if h.cols() != generators.rows() {
            return Err(Error::RankDeficient);
        }
        let d = h.rows();
        let index = (0..d).fold(BigInt::one(), |acc, i| acc * h.get(i, i));
        Ok(Sublattice { basis: h, index })
    }

    pub fn full(dim: usize) -> Self {
        Sublattice {
            basis: IntMatrix::identity(dim),
            index: BigInt::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Canonical coset representative: coordinate `i` reduced into
    /// `[0, h_ii)` working down the lower-triangular basis.
    pub fn reduce(&self, v: &IntVector) -> IntVector {
        let mut w = v.clone();
        for i in 0..self.dim() {
            let piv = self.basis.get(i, i);
            let q = w[i].div_floor(piv);
            if q.is_zero() {
                continue;
            }
            for r in i..self.dim() {
                let delta = &q * self.basis.get(r, i);
                w.0[r] -= delta;
            }
        }
        w
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// An LLL-reduced basis (parameter 3/4) of the same lattice, as columns.
    pub fn reduced_basis(&self) -> IntMatrix {
        let mut b = self.basis.columns();
        lll(&mut b);
        IntMatrix::from_columns(self.dim(), &b)
    }

    /// A representative of the coset of `v` near the origin: `v` minus the
    /// lattice point obtained by rounding its coordinates in `reduced`.
    pub fn short_representative(&self, v: &IntVector, reduced: &IntMatrix) -> IntVector {
        let d = self.dim();
        if d == 0 {
            return v.clone();
        }
        let rows = reduced.to_rat_rows();
        let rhs: Vec<BigRational> = v.0.iter().map(int_rat).collect();
        let z = solve_square(&rows, &rhs).expect("basis is invertible");
        let rounded = IntVector(z.iter().map(|c| c.round().to_integer()).collect());
        v - &reduced.mul_vec(&rounded)
    }

    /// All canonical coset representatives, in lexicographic order.
    pub fn coset_representatives(&self) -> Vec<IntVector> {
        let d = self.dim();
        let mut out = vec![IntVector::zeros(d)];
        for i in 0..d {
            let diag = self.basis.get(i, i).clone();
            let mut next = Vec::new();
            for v in &out {
                let mut k = BigInt::zero();
                while k < diag {
                    let mut w = v.clone();
                    w.0[i] = k.clone();
                    next.push(w);
                    k += 1;
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[IntVector]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> = b[i].0.iter().map(int_rat).collect();
        for j in 0..i {
            let m = dot(&b[i].0.iter().map(int_rat).collect::<Vec<_>>(), &star[j]) / dot(&star[j], &star[j]);
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &m * sk;
            }
            mu[i][j] = m;
        }
        star.push(v);
    }
    (star, mu)
}

/// Textbook LLL on linearly independent integer vectors, exact arithmetic.
/// Gram-Schmidt data is recomputed after each change; dimensions are tiny.
fn lll(b: &mut [IntVector]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let three_quarters = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(b);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                b[k] = &b[k] - &b[j].scale(&q);
            }
        }
        let (star, mu) = gram_schmidt(b);
        let lhs = dot(&star[k], &star[k]);
        let rhs = (&three_quarters - &mu[k][k - 1] * &mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

/// `a ∩ b`, computed from the integer kernel of `[A | -B]`.
pub fn lattice_intersection(a: &Sublattice, b: &Sublattice) -> Result<Sublattice> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let d = a.dim();
    if d == 0 {
        return Ok(Sublattice::full(0));
    }
    let mut stacked = IntMatrix::zeros(d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            stacked.set(i, j, a.basis.get(i, j).clone());
            stacked.set(i, d + j, -b.basis.get(i, j).clone());
        }
    }
    let kernel = integer_kernel(&stacked);
    let gens: Vec<IntVector> = kernel
        .iter()
        .map(|z| a.basis.mul_vec(&IntVector(z.0[..d].to_vec())))
        .collect();
    let g = IntMatrix::from_columns(d, &gens);
    Sublattice::from_generators(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled(d: usize, k: i64) -> Sublattice {
        let mut m = IntMatrix::identity(d);
        for i in 0..d {
            m.set(i, i, BigInt::from(k));
        }
        Sublattice::from_generators(&m).unwrap()
    }

    #[test]
    fn trivial_intersections() {
        let z2 = Sublattice::full(2);
        assert_eq!(lattice_intersection(&z2, &z2).unwrap(), z2);
        let z1 = Sublattice::full(1);
        assert_eq!(lattice_intersection(&scaled(1, 2), &z1).unwrap(), scaled(1, 2));
    }

    #[test]
    fn two_and_three_give_six() {
        let got = lattice_intersection(&scaled(2, 2), &scaled(2, 3)).unwrap();
        // membership oracle on a box
        for x in -12i64..=12 {
            for y in -12i64..=12 {
                let v = IntVector::from_i64(&[x, y]);
                let expect = x % 6 == 0 && y % 6 == 0;
                assert_eq!(got.contains(&v), expect, "{v}");
            }
        }
        assert_eq!(got, scaled(2, 6));
        assert_eq!(got.index(), &BigInt::from(36));
    }

    #[test]
    fn rank_deficient_rejected() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(Sublattice::from_generators(&m), Err(Error::RankDeficient)));
    }

    #[test]
    fn reduction_keeps_the_lattice_and_shortens() {
        let m = IntMatrix::from_rows(&[vec![42, 17], vec![0, 1]]);
        let l = Sublattice::from_generators(&m).unwrap();
        let r = l.reduced_basis();
        assert_eq!(Sublattice::from_generators(&r).unwrap(), l);
        let longest = r.columns().iter().map(|c| c.max_abs()).max().unwrap();
        assert!(longest <= BigInt::from(8), "{r}");
        for rep in l.coset_representatives() {
            let s = l.short_representative(&rep, &r);
            assert_eq!(l.reduce(&s), rep);
            assert!(s.max_abs() <= BigInt::from(8), "{rep} -> {s}");
        }
    }

    #[test]
    fn coset_representatives_count_index() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        let l = Sublattice::from_generators(&m).unwrap();
        let reps = l.coset_representatives();
        assert_eq!(BigInt::from(reps.len()), *l.index());
        for r in &reps {
            assert_eq!(&l.reduce(r), r);
        }
    }
}
