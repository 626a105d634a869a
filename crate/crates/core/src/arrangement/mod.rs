//! Combinatorics of a vector configuration: rational subspaces, cocircuits,
//! topes and their walls, big cells, and regular face collections.

pub mod config;
pub mod faces;
pub mod subspace;
pub mod topes;

use std::sync::{Arc, OnceLock};

pub use config::{
    build_config, config_from_i64, cone_contains, delta, for_each_subset, is_pointed, pointed_functional,
    zonotope_contains, VectorConfig,
};
pub use faces::{
    collection_from_beta, collection_nonpositive_at, collection_nonpositive_on_tope, is_positive_definite, make_face, BetaCollection, Face,
    FaceCollection,
};
pub use subspace::{cocircuits, rational_subspaces, restrict_config, RationalSubspace, SubspacePoset};
pub use topes::{
    enumerate_big_cells, enumerate_topes, find_tope, hyperplane_normals, in_tope_minus_zonotope, sign_vector,
    tope_adjacency, BigCell, Tope, Wall,
};

use num::Zero;

use crate::exactlin::{IntVector, RatVector};

/// A configuration together with its lazily computed combinatorial data.
/// Cloning is cheap and shares the caches.
#[derive(Clone, Debug)]
pub struct Arrangement {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    cfg: VectorConfig,
    poset: SubspacePoset,
    normals: Vec<IntVector>,
    topes: OnceLock<Vec<Tope>>,
    walls: OnceLock<Vec<Wall>>,
    cells: OnceLock<Vec<BigCell>>,
}

impl Arrangement {
    pub fn new(cfg: VectorConfig) -> Arrangement {
        let poset = rational_subspaces(&cfg);
        let normals = hyperplane_normals(&poset);
        Arrangement {
            inner: Arc::new(Inner {
                cfg,
                poset,
                normals,
                topes: OnceLock::new(),
                walls: OnceLock::new(),
                cells: OnceLock::new(),
            }),
        }
    }

    pub fn config(&self) -> &VectorConfig {
        &self.inner.cfg
    }

    pub fn dim(&self) -> usize {
        self.inner.cfg.dim()
    }

    pub fn poset(&self) -> &SubspacePoset {
        &self.inner.poset
    }

    pub fn normals(&self) -> &[IntVector] {
        &self.inner.normals
    }

    pub fn topes(&self) -> &[Tope] {
        self.inner
            .topes
            .get_or_init(|| enumerate_topes(self.dim(), &self.inner.normals))
    }

    pub fn walls(&self) -> &[Wall] {
        self.inner
            .walls
            .get_or_init(|| tope_adjacency(self.config(), self.poset(), self.topes()))
    }

    pub fn big_cells(&self) -> &[BigCell] {
        self.inner
            .cells
            .get_or_init(|| enumerate_big_cells(self.config(), self.poset(), self.topes(), self.walls()))
    }

    pub fn tope(&self, id: usize) -> &Tope {
        &self.topes()[id]
    }

    /// The tope strictly containing `x`, if `x` avoids every hyperplane.
    pub fn tope_of(&self, x: &RatVector) -> Option<usize> {
        find_tope(self.topes(), self.normals(), x)
    }

    /// The wall whose facet has `p` in its relative interior: `p` must lie on
    /// exactly one rational hyperplane.
    pub fn wall_at(&self, p: &RatVector) -> Option<usize> {
        let normals = self.normals();
        let on: Vec<usize> = (0..normals.len()).filter(|&i| p.dot_int(&normals[i]).is_zero()).collect();
        let [k] = on[..] else { return None };
        let side = |s: i8| -> Vec<i8> {
            let mut v = sign_vector(normals, p);
            v[k] = s;
            v
        };
        let (plus, minus) = (side(1), side(-1));
        let id_of = |signs: &Vec<i8>| self.topes().iter().find(|t| &t.signs == signs).map(|t| t.id);
        let (a, b) = (id_of(&plus)?, id_of(&minus)?);
        self.walls()
            .iter()
            .find(|w| w.normal_index == k && ((w.tope_a, w.tope_b) == (a, b) || (w.tope_a, w.tope_b) == (b, a)))
            .map(|w| w.id)
    }

    pub fn cell_of_tope(&self, tope: usize) -> usize {
        self.big_cells()
            .iter()
            .find(|c| c.tope_ids.contains(&tope))
            .map(|c| c.id)
            .expect("cells partition the topes")
    }

    /// The arrangement of `X ∩ r` in the saturated coordinates of `r`.
    pub fn induced(&self, r: &RationalSubspace) -> Arrangement {
        Arrangement::new(restrict_config(self.config(), r))
    }

    pub fn nonpositive_collection(&self, tope: usize) -> FaceCollection {
        collection_nonpositive_on_tope(self.config(), self.poset(), self.tope(tope))
    }

    pub fn in_tope_minus_zonotope(&self, tope: usize, gamma: &RatVector) -> bool {
        in_tope_minus_zonotope(self.config(), self.normals(), self.tope(tope), gamma)
    }
}
