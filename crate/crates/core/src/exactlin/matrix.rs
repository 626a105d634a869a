use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::vector::IntVector;
use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors; `rows` fixes the height when
    /// the list is empty.
    pub fn from_columns(rows: usize, columns: &[IntVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim(), rows);
            for i in 0..rows {
                m.set(i, j, col[i].clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(v.dim(), self.cols);
        IntVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: BigInt = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        super::solve::rank(&self.to_rat_rows())
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|a| a.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Column-style Hermite normal form together with the unimodular transform:
/// `m * transform == hnf_full`, where the first `rank` columns of `hnf_full`
/// are the echelon columns and the rest are zero.
pub struct HnfDecomposition {
    pub hnf_full: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
    /// Row index of each pivot, one per echelon column.
    pub pivot_rows: Vec<usize>,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

pub fn hnf_with_transform(m: &IntMatrix) -> HnfDecomposition {
    let (d, n) = (m.rows(), m.cols());
    let mut cols: Vec<Vec<BigInt>> = (0..n).map(|j| m.column(j).0).collect();
    let mut tr: Vec<Vec<BigInt>> = (0..n).map(|j| IntMatrix::identity(n).column(j).0).collect();
    let mut pivot_rows = Vec::new();
    let mut k = 0usize;
    for i in 0..d {
        if k == n {
            break;
        }
        for j in k + 1..n {
            if cols[j][i].is_zero() {
                continue;
            }
            let a = cols[k][i].clone();
            let b = cols[j][i].clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let (ag, bg) = (&a / &g, &b / &g);
            let combine = |v: &mut Vec<Vec<BigInt>>| {
                let ck = v[k].clone();
                let cj = v[j].clone();
                v[k] = ck.iter().zip(&cj).map(|(x, y)| &s * x + &t * y).collect();
                v[j] = ck.iter().zip(&cj).map(|(x, y)| -(&bg) * x + &ag * y).collect();
            };
            combine(&mut cols);
            combine(&mut tr);
        }
        if cols[k][i].is_zero() {
            continue;
        }
        if cols[k][i].is_negative() {
            cols[k].iter_mut().for_each(|x| *x = -x.clone());
            tr[k].iter_mut().for_each(|x| *x = -x.clone());
        }
        let piv = cols[k][i].clone();
        for j in 0..k {
            let q = cols[j][i].div_floor(&piv);
            if q.is_zero() {
                continue;
            }
            for r in 0..d {
                let delta = &q * &cols[k][r];
                cols[j][r] -= delta;
            }
            for r in 0..n {
                let delta = &q * &tr[k][r];
                tr[j][r] -= delta;
            }
        }
        pivot_rows.push(i);
        k += 1;
    }
    let to_matrix = |rows: usize, v: &Vec<Vec<BigInt>>| {
        let cs: Vec<IntVector> = v.iter().map(|c| IntVector(c.clone())).collect();
        IntMatrix::from_columns(rows, &cs)
    };
    HnfDecomposition {
        hnf_full: to_matrix(d, &cols),
        transform: to_matrix(n, &tr),
        rank: k,
        pivot_rows,
    }
}

/// Column-style Hermite normal form: lower echelon, positive pivots, entries
/// left of each pivot reduced into `[0, pivot)`. Zero columns are dropped, so
/// the result has `rank` columns spanning the same lattice.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let h = hnf_with_transform(m);
    let cols: Vec<IntVector> = (0..h.rank).map(|j| h.hnf_full.column(j)).collect();
    IntMatrix::from_columns(m.rows(), &cols)
}

/// Basis of the integer kernel `{z in Z^n : m z = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let h = hnf_with_transform(m);
    (h.rank..m.cols()).map(|j| h.transform.column(j)).collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if m.rows() != m.cols() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).0).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * a[n - 1][n - 1].clone())
}
