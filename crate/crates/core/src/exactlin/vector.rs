use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// A lattice point with arbitrary-precision coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVector(pub Vec<BigInt>);

/// A point of the rational vector space, coordinates kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVector(pub Vec<BigRational>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|a| a.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| BigRational::from_integer(a.clone())).collect())
    }

    /// Divides out the gcd of the coordinates. The zero vector is returned unchanged.
    pub fn primitive(&self) -> IntVector {
        let g = self.0.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|a| a / &g).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num::ToPrimitive;
        self.0.iter().map(|a| a.to_i64()).collect()
    }
}

impl RatVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RatVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RatVector(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_fracs(coords: &[(i64, i64)]) -> Self {
        RatVector(
            coords
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![BigRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> BigRational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_int(&self, other: &IntVector) -> BigRational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    pub fn scale(&self, k: &BigRational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    pub fn to_int(&self) -> Option<IntVector> {
        if !self.is_integral() {
            return None;
        }
        Some(IntVector(self.0.iter().map(|a| a.to_integer()).collect()))
    }

    /// Positive multiple of `self` with coprime integer coordinates.
    pub fn clear_denominators(&self) -> IntVector {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |l, a| l.lcm(a.denom()));
        let lr = BigRational::from_integer(l);
        IntVector(self.0.iter().map(|a| (a * &lr).to_integer()).collect()).primitive()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Index<usize> for RatVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

macro_rules! elementwise {
    ($ty:ident, $trait:ident, $method:ident, $op:tt) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                debug_assert_eq!(self.dim(), rhs.dim());
                $ty(self.0.iter().zip(&rhs.0).map(|(a, b)| a $op b).collect())
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
    };
}

elementwise!(IntVector, Add, add, +);
elementwise!(IntVector, Sub, sub, -);
elementwise!(RatVector, Add, add, +);
elementwise!(RatVector, Sub, sub, -);

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand for building a rational from a small fraction.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn sign_of(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}
