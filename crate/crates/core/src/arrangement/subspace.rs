use std::collections::BTreeSet;

use num::{BigInt, BigRational, Integer, Signed, Zero};

use super::config::{build_config, VectorConfig};
use crate::exactlin::{hermite_normal_form, int_rat, integer_kernel, IntMatrix, IntVector, RatVector};

/// A rational subspace `r`: the span of a sublist of X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubspace {
    pub id: usize,
    pub dim: usize,
    /// Saturated basis of `r ∩ Z^d` in Hermite normal form (d × dim).
    pub basis: IntMatrix,
    /// Integer rows spanning the annihilator of `r` ((d − dim) × d).
    pub normals: IntMatrix,
    /// Indices `i` with `a_i ∈ r`, increasing.
    pub members: Vec<usize>,
    pivot_rows: Vec<usize>,
}

impl RationalSubspace {
    /// The span of `generators` inside `Q^ambient`.
    pub fn spanned_by(ambient: usize, generators: &[IntVector]) -> (IntMatrix, IntMatrix) {
        let m = IntMatrix::from_columns(ambient, generators);
        let normal_vecs: Vec<IntVector> = integer_kernel(&m.transpose())
            .into_iter()
            .map(|v| v.primitive())
            .collect();
        let normals = if normal_vecs.is_empty() {
            IntMatrix::zeros(0, ambient)
        } else {
            let h = hermite_normal_form(&IntMatrix::from_columns(ambient, &normal_vecs));
            let mut rows: Vec<IntVector> = h.columns().into_iter().map(|c| c.primitive()).collect();
            for r in rows.iter_mut() {
                if let Some(first) = r.0.iter().find(|x| !x.is_zero()) {
                    if first.is_negative() {
                        *r = -&*r;
                    }
                }
            }
            IntMatrix::from_columns(ambient, &rows).transpose()
        };
        let basis_vecs = integer_kernel(&normals);
        let basis = hermite_normal_form(&IntMatrix::from_columns(ambient, &basis_vecs));
        (basis, normals)
    }

    fn new(id: usize, cfg: &VectorConfig, members: Vec<usize>) -> Self {
        let (basis, normals) = Self::spanned_by(cfg.dim(), &cfg.sublist(&members));
        let pivot_rows = pivot_rows(&basis);
        RationalSubspace {
            id,
            dim: basis.cols(),
            basis,
            normals,
            members,
            pivot_rows,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_whole(&self) -> bool {
        self.dim == self.ambient_dim()
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        (0..self.normals.rows()).all(|i| self.normals.row(i).dot(v).is_zero())
    }

    pub fn contains_rat(&self, v: &RatVector) -> bool {
        (0..self.normals.rows()).all(|i| v.dot_int(&self.normals.row(i)).is_zero())
    }

    /// Coordinates in the saturated basis; `None` off the subspace.
    pub fn coordinates(&self, v: &IntVector) -> Option<IntVector> {
        let c = self.coordinates_rat(&v.to_rat())?;
        c.to_int()
    }

    pub fn coordinates_rat(&self, v: &RatVector) -> Option<RatVector> {
        let mut c: Vec<BigRational> = Vec::with_capacity(self.dim);
        for (j, &p) in self.pivot_rows.iter().enumerate() {
            let mut s = v[p].clone();
            for (l, cl) in c.iter().enumerate() {
                s -= int_rat(self.basis.get(p, l)) * cl;
            }
            c.push(s / int_rat(self.basis.get(p, j)));
        }
        let c = RatVector(c);
        if self.embed_rat(&c) == *v {
            Some(c)
        } else {
            None
        }
    }

    pub fn embed(&self, c: &IntVector) -> IntVector {
        self.basis.mul_vec(c)
    }

    pub fn embed_rat(&self, c: &RatVector) -> RatVector {
        RatVector(
            (0..self.ambient_dim())
                .map(|i| (0..self.dim).map(|j| int_rat(self.basis.get(i, j)) * &c[j]).sum())
                .collect(),
        )
    }

    /// Restricts an ambient functional to `r`, expressed in saturated coordinates.
    pub fn restrict_functional(&self, u: &RatVector) -> RatVector {
        RatVector((0..self.dim).map(|j| u.dot_int(&self.basis.column(j))).collect())
    }

    pub fn is_subspace_of(&self, other: &RationalSubspace) -> bool {
        self.basis.columns().iter().all(|c| other.contains(c))
    }
}

fn pivot_rows(h: &IntMatrix) -> Vec<usize> {
    (0..h.cols())
        .map(|j| {
            (0..h.rows())
                .find(|&i| !h.get(i, j).is_zero())
                .expect("echelon column is nonzero")
        })
        .collect()
}

/// All rational subspaces of X, graded by dimension.
#[derive(Clone, Debug)]
pub struct SubspacePoset {
    subspaces: Vec<RationalSubspace>,
    by_dim: Vec<Vec<usize>>,
}

impl SubspacePoset {
    pub fn all(&self) -> &[RationalSubspace] {
        &self.subspaces
    }

    pub fn get(&self, id: usize) -> &RationalSubspace {
        &self.subspaces[id]
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    /// Ids of the subspaces of dimension `i`.
    pub fn of_dim(&self, i: usize) -> &[usize] {
        self.by_dim.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn zero(&self) -> &RationalSubspace {
        &self.subspaces[0]
    }

    pub fn whole(&self) -> &RationalSubspace {
        self.subspaces.last().expect("poset contains V")
    }

    pub fn hyperplanes(&self) -> &[usize] {
        let d = self.whole().dim;
        if d == 0 {
            &[]
        } else {
            self.of_dim(d - 1)
        }
    }

    /// The subspace with exactly these members.
    pub fn find_by_members(&self, members: &[usize]) -> Option<&RationalSubspace> {
        self.subspaces.iter().find(|s| s.members == members)
    }

    /// Subspaces contained in `t` (including `t`).
    pub fn contained_in(&self, t: &RationalSubspace) -> Vec<usize> {
        self.subspaces
            .iter()
            .filter(|s| s.dim <= t.dim && s.members.iter().all(|i| t.members.contains(i)))
            .map(|s| s.id)
            .collect()
    }
}

/// Enumerates every span of a sublist of X exactly once, by closing flats
/// one generator at a time.
pub fn rational_subspaces(cfg: &VectorConfig) -> SubspacePoset {
    let m = cfg.len();
    let closure = |gens: &BTreeSet<usize>| -> Vec<usize> {
        let list: Vec<IntVector> = gens.iter().map(|&i| cfg.vector(i).clone()).collect();
        let (_, normals) = RationalSubspace::spanned_by(cfg.dim(), &list);
        (0..m)
            .filter(|&i| (0..normals.rows()).all(|r| normals.row(r).dot(cfg.vector(i)).is_zero()))
            .collect()
    };
    let mut flats: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![closure(&BTreeSet::new())];
    flats.insert(frontier[0].clone());
    while let Some(flat) = frontier.pop() {
        for i in 0..m {
            if flat.contains(&i) {
                continue;
            }
            let mut gens: BTreeSet<usize> = flat.iter().copied().collect();
            gens.insert(i);
            let next = closure(&gens);
            if flats.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut subspaces: Vec<RationalSubspace> = flats
        .into_iter()
        .map(|members| RationalSubspace::new(0, cfg, members))
        .collect();
    subspaces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.members.cmp(&b.members)));
    let mut by_dim = vec![Vec::new(); cfg.dim() + 1];
    for (id, s) in subspaces.iter_mut().enumerate() {
        s.id = id;
        by_dim[s.dim].push(id);
    }
    SubspacePoset { subspaces, by_dim }
}

/// One cocircuit `X \ H` per rational hyperplane `H`, as index lists aligned
/// with [`SubspacePoset::hyperplanes`].
pub fn cocircuits(cfg: &VectorConfig, poset: &SubspacePoset) -> Vec<Vec<usize>> {
    poset
        .hyperplanes()
        .iter()
        .map(|&h| {
            let members = &poset.get(h).members;
            (0..cfg.len()).filter(|i| !members.contains(i)).collect()
        })
        .collect()
}

/// The list `X ∩ r` written in the saturated coordinates of `r`.
pub fn restrict_config(cfg: &VectorConfig, r: &RationalSubspace) -> VectorConfig {
    let vecs = r
        .members
        .iter()
        .map(|&i| r.coordinates(cfg.vector(i)).expect("member lies in r"))
        .collect();
    build_config(r.dim, vecs).expect("members span r")
}

/// Primitive integer normal of a hyperplane, first nonzero entry positive.
pub fn hyperplane_normal(h: &RationalSubspace) -> IntVector {
    debug_assert_eq!(h.normals.rows(), 1);
    let n = h.normals.row(0).primitive();
    let g = n.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    debug_assert!(g == BigInt::from(1));
    n
}
