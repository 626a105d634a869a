use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::exactlin::RatVector;

/// A polynomial with rational coefficients in `nvars` variables, stored
/// sparsely by exponent vector. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialSerial {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == deg)
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars);
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_vec(&self, x: &RatVector) -> BigRational {
        self.eval(&x.0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c * BigRational::from_integer(e[i].into()));
        }
        p
    }

    /// Derivative along `v`: `Σ v_i ∂_i`.
    pub fn directional_derivative(&self, v: &RatVector) -> Polynomial {
        (0..self.nvars).fold(Polynomial::zero(self.nvars), |acc, i| {
            acc.add(&self.derivative(i).scale(&v[i]))
        })
    }

    /// `p(M y + c)` where `M` has `nvars` rows: substitutes each variable by
    /// an affine form in `M.cols` new variables.
    pub fn substitute_affine(&self, m: &[Vec<BigRational>], c: &[BigRational]) -> Polynomial {
        let k = m.first().map_or(0, |r| r.len());
        let forms: Vec<Polynomial> = (0..self.nvars)
            .map(|i| Polynomial::linear(&m[i]).add(&Polynomial::constant(k, c[i].clone())))
            .collect();
        let mut out = Polynomial::zero(k);
        for (e, coef) in &self.terms {
            let mut t = Polynomial::constant(k, coef.clone());
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    t = t.mul(&forms[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn serial(&self) -> Vec<MonomialSerial> {
        self.terms
            .iter()
            .map(|(e, c)| MonomialSerial {
                exponents: e.clone(),
                coefficient: c.to_string(),
            })
            .collect()
    }

    /// Renders with the given variable prefix (`n` gives `n1, n2, …`;
    /// a single variable is written without an index).
    pub fn render(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let name = |i: usize| {
            if self.nvars == 1 {
                prefix.to_string()
            } else {
                format!("{prefix}{}", i + 1)
            }
        };
        let mut ordered: Vec<(&Vec<u32>, &BigRational)> = self.terms.iter().collect();
        // higher degree first, then larger exponents on earlier variables
        ordered.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (k, (e, c)) in ordered.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { name(i) } else { format!("{}^{p}", name(i)) })
                .collect();
            let mag = c.abs();
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("n"))
    }
}

/// All exponent vectors in `n` variables with total degree at most `d`,
/// in a fixed order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

pub fn monomial_value(e: &[u32], x: &[BigRational]) -> BigRational {
    let mut t = BigRational::one();
    for (xi, &k) in x.iter().zip(e) {
        for _ in 0..k {
            t *= xi;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn render_and_eval() {
        let p = Polynomial::var(2, 1).add(&Polynomial::constant(2, rat(1, 1)));
        assert_eq!(p.to_string(), "n2 + 1");
        assert_eq!(p.eval(&[rat(5, 1), rat(3, 1)]), rat(4, 1));
        let q = Polynomial::var(2, 1).sub(&Polynomial::var(2, 0));
        assert_eq!(q.to_string(), "-n1 + n2");
        let h = Polynomial::var(1, 0).scale(&rat(1, 2)).add(&Polynomial::constant(1, rat(1, 2)));
        assert_eq!(h.render("n"), "1/2*n + 1/2");
        assert_eq!(Polynomial::zero(3).to_string(), "0");
    }

    #[test]
    fn calculus() {
        // p = x^2 y + 3y
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.mul(&x).mul(&y).add(&y.scale(&rat(3, 1)));
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.derivative(0), x.mul(&y).scale(&rat(2, 1)));
        let dv = p.directional_derivative(&RatVector::from_i64(&[1, 1]));
        assert_eq!(dv.eval(&[rat(1, 1), rat(2, 1)]), rat(4 + 1 + 3, 1));
        // substitute x = s + t, y = s: (s+t)^2 s + 3 s
        let m = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        let s = p.substitute_affine(&m, &[rat(0, 1), rat(0, 1)]);
        assert_eq!(s.eval(&[rat(2, 1), rat(1, 1)]), rat(9 * 2 + 6, 1));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_up_to(2, 1).len(), 3);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(0, 4).len(), 1);
    }
}
