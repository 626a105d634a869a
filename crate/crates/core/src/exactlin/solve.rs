use num::{BigRational, One, Zero};

use super::matrix::IntMatrix;
use super::vector::RatVector;

/// Particular solution plus kernel basis of a consistent linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: RatVector,
    pub kernel: Vec<RatVector>,
}

/// Reduced row echelon form in place. Returns the pivot column of each pivot row,
/// chosen leftmost first.
pub fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (head, tail) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for (x, y) in head.iter_mut().zip(tail.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Solves `a t = x` over the rationals. Returns `None` when `x` is outside
/// the column span. Free variables are set to zero in the particular
/// solution; the kernel has one vector per free column, in column order.
pub fn solve_rational(a: &IntMatrix, x: &RatVector) -> Option<Solution> {
    assert_eq!(a.rows(), x.dim());
    let n = a.cols();
    let mut rows: Vec<Vec<BigRational>> = a
        .to_rat_rows()
        .into_iter()
        .zip(&x.0)
        .map(|(mut r, b)| {
            r.push(b.clone());
            r
        })
        .collect();
    solve_augmented(&mut rows, n)
}

/// Same as [`solve_rational`] for a rational coefficient matrix given by rows.
pub fn solve_rational_rows(a: &[Vec<BigRational>], b: &[BigRational], ncols: usize) -> Option<Solution> {
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    solve_augmented(&mut rows, ncols)
}

fn solve_augmented(rows: &mut [Vec<BigRational>], n: usize) -> Option<Solution> {
    let pivots = rref(rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -rows[r][f].clone();
            }
            RatVector(v)
        })
        .collect();
    Some(Solution {
        particular: RatVector(particular),
        kernel,
    })
}

/// Solves a square nonsingular rational system.
pub fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let sol = solve_rational_rows(a, b, n)?;
    if !sol.kernel.is_empty() {
        return None;
    }
    Some(sol.particular.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::vector::rat;

    fn apply(a: &IntMatrix, t: &RatVector) -> RatVector {
        RatVector(
            (0..a.rows())
                .map(|i| {
                    (0..a.cols())
                        .map(|j| BigRational::from_integer(a.get(i, j).clone()) * &t[j])
                        .sum()
                })
                .collect(),
        )
    }

    #[test]
    fn identity_system() {
        let a = IntMatrix::identity(2);
        let s = solve_rational(&a, &RatVector::from_i64(&[3, 4])).unwrap();
        assert_eq!(s.particular, RatVector::from_i64(&[3, 4]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn underdetermined_system_has_leftmost_pivots() {
        let a = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let s = solve_rational(&a, &RatVector::from_i64(&[1, 1])).unwrap();
        assert_eq!(s.particular, RatVector::from_i64(&[1, 1, 0]));
        assert_eq!(s.kernel, vec![RatVector::from_i64(&[-1, -1, 1])]);
        assert!(apply(&a, &s.kernel[0]).is_zero());
    }

    #[test]
    fn fractional_solution() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        let s = solve_rational(&a, &RatVector::from_i64(&[1])).unwrap();
        assert_eq!(s.particular.0, vec![rat(1, 2)]);
    }

    #[test]
    fn inconsistent_is_none() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(solve_rational(&a, &RatVector::from_i64(&[1, 3])).is_none());
    }

    #[test]
    fn round_trip_on_random_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..4).map(|_| rng.gen_range(-3..=3)).collect())
                .collect();
            let a = IntMatrix::from_rows(&rows);
            let x = RatVector::from_i64(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
            if let Some(s) = solve_rational(&a, &x) {
                assert_eq!(apply(&a, &s.particular), x);
                for k in &s.kernel {
                    assert!(apply(&a, k).is_zero());
                }
            }
        }
    }
}
