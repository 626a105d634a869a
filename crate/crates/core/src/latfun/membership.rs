use num::{BigInt, BigRational, Signed, Zero};
use serde::Serialize;

use super::function::LatticeFunction;
use super::ops::nabla_list;
use crate::arrangement::{cocircuits, SubspacePoset, VectorConfig};
use crate::exactlin::IntVector;

/// A finite, nonempty set of lattice points on which identities are tested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    points: Vec<IntVector>,
    description: String,
    radius: i64,
}

impl Window {
    /// The box `[−R, R]^d`.
    pub fn radius(dim: usize, r: i64) -> Window {
        Window::range(dim, -r, r)
    }

    /// The box `[lo, hi]^d`.
    pub fn range(dim: usize, lo: i64, hi: i64) -> Window {
        assert!(lo <= hi, "empty window");
        let mut pts = vec![vec![]];
        for _ in 0..dim {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (lo..=hi).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        Window {
            points: pts.iter().map(|p| IntVector::from_i64(p)).collect(),
            description: format!("[{lo},{hi}]^{dim}"),
            radius: lo.abs().max(hi.abs()),
        }
    }

    pub fn points_list(points: Vec<IntVector>) -> Window {
        assert!(!points.is_empty(), "empty window");
        let description = format!("{} explicit points", points.len());
        let radius = points
            .iter()
            .flat_map(|p| p.0.iter())
            .map(|c| i64::try_from(c.abs()).unwrap_or(i64::MAX))
            .max()
            .unwrap_or(0);
        Window {
            points,
            description,
            radius,
        }
    }

    /// Sup-norm radius of the window, used to size windows in other dimensions.
    pub fn radius_hint(&self) -> i64 {
        self.radius
    }

    /// Keeps the points satisfying `keep`; the result may be empty.
    pub fn filter(&self, keep: impl Fn(&IntVector) -> bool) -> Vec<IntVector> {
        self.points.iter().filter(|p| keep(p)).cloned().collect()
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// Sum of `‖a‖∞` over X: how far beyond the window a difference operator
/// built from sublists of X reads its argument.
pub fn inflation(cfg: &VectorConfig) -> BigInt {
    cfg.vectors().iter().map(|a| a.max_abs()).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Indices of the vectors in the difference operator.
    pub operator: Vec<usize>,
    pub point: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub passed: bool,
    pub window: String,
    /// Evaluation reaches this far beyond the window in sup-norm.
    pub inflation: String,
    pub checks: usize,
    pub violation: Option<Violation>,
}

/// A difference operator (indices into X) and the points it is checked at.
type Operator = (Vec<usize>, Box<dyn Fn(&IntVector) -> bool>);

fn run(cfg: &VectorConfig, f: &LatticeFunction, window: &Window, operators: Vec<Operator>) -> MembershipReport {
    let mut checks = 0;
    for (op, applies) in operators {
        let g = nabla_list(&cfg.sublist(&op), f);
        for p in window.points() {
            if !applies(p) {
                continue;
            }
            checks += 1;
            let v: BigRational = g.eval(p);
            if !v.is_zero() {
                return MembershipReport {
                    passed: false,
                    window: window.description().to_string(),
                    inflation: inflation(cfg).to_string(),
                    checks,
                    violation: Some(Violation {
                        operator: op,
                        point: p.to_string(),
                        value: v.to_string(),
                    }),
                };
            }
        }
    }
    MembershipReport {
        passed: true,
        window: window.description().to_string(),
        inflation: inflation(cfg).to_string(),
        checks,
        violation: None,
    }
}

/// Checks `(∇_{X\r} f)(γ) = 0` for every proper rational `r` and every
/// window point `γ ∉ r`.
pub fn check_fx_membership(
    cfg: &VectorConfig,
    poset: &SubspacePoset,
    f: &LatticeFunction,
    window: &Window,
) -> MembershipReport {
    let ops = poset
        .all()
        .iter()
        .filter(|r| !r.is_whole())
        .map(|r| {
            let complement: Vec<usize> = (0..cfg.len()).filter(|i| !r.members.contains(i)).collect();
            let r2 = r.clone();
            let applies: Box<dyn Fn(&IntVector) -> bool> = Box::new(move |p| !r2.contains(p));
            (complement, applies)
        })
        .collect();
    run(cfg, f, window, ops)
}

/// Checks `∇_Y f = 0` on the window for every cocircuit `Y`.
pub fn check_dm_membership(
    cfg: &VectorConfig,
    poset: &SubspacePoset,
    f: &LatticeFunction,
    window: &Window,
) -> MembershipReport {
    let ops = cocircuits(cfg, poset)
        .into_iter()
        .map(|y| {
            let applies: Box<dyn Fn(&IntVector) -> bool> = Box::new(|_| true);
            (y, applies)
        })
        .collect();
    run(cfg, f, window, ops)
}

/// Integer check used where values are promised to be integral.
pub fn all_integral(f: &LatticeFunction, window: &Window) -> Option<IntVector> {
    window
        .points()
        .iter()
        .find(|p| !f.eval(p).is_integer())
        .cloned()
}

/// True when every value on the window has absolute value at most `bound`.
pub fn bounded_by(f: &LatticeFunction, window: &Window, bound: &BigRational) -> bool {
    window.points().iter().all(|p| f.eval(p).abs() <= *bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{config_from_i64, rational_subspaces};
    use crate::exactlin::rat;
    use crate::latfun::function::{indicator, zero_function};
    use crate::latfun::ops::partition_function;

    fn theta(k: usize) -> LatticeFunction {
        LatticeFunction::new(1, move |x| {
            let n = x[0].clone();
            let nr = BigRational::from_integer(n.clone());
            let third = &nr / BigRational::from_integer(2.into())
                + if (&n % 2u32).is_zero() { rat(0, 1) } else { rat(1, 2) };
            match k {
                1 => rat(1, 1),
                2 => nr,
                3 => third,
                _ => {
                    if n.is_negative() {
                        rat(0, 1)
                    } else {
                        third
                    }
                }
            }
        })
    }

    #[test]
    fn one_dimensional_fixtures() {
        let cfg = config_from_i64(1, &[&[2], &[-1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let w = Window::radius(1, 12);
        for k in 1..=3 {
            assert!(check_dm_membership(&cfg, &p, &theta(k), &w).passed, "theta{k}");
            assert!(check_fx_membership(&cfg, &p, &theta(k), &w).passed, "theta{k}");
        }
        assert!(check_fx_membership(&cfg, &p, &theta(4), &w).passed);
        let r = check_dm_membership(&cfg, &p, &theta(4), &w);
        assert!(!r.passed);
        assert!(check_dm_membership(&cfg, &p, &zero_function(1), &w).passed);
    }

    #[test]
    fn partition_function_in_fx() {
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let px = partition_function(&cfg).unwrap();
        let w = Window::radius(2, 6);
        assert!(check_fx_membership(&cfg, &p, &px, &w).passed);
        assert!(!check_dm_membership(&cfg, &p, &px, &w).passed);
    }

    #[test]
    fn point_indicator_not_in_fx() {
        let cfg = config_from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let p = rational_subspaces(&cfg);
        let f = indicator(IntVector::from_i64(&[2, 3]));
        let r = check_fx_membership(&cfg, &p, &f, &Window::radius(2, 5));
        assert!(!r.passed);
        assert!(r.violation.is_some());
    }
}
