//! Toric Q-Fano models: fan rays, the anticanonical moment polytope,
//! vertex charts and section spaces of `-k r0 K_X`.

mod catalog;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::linalg::{affine_rank, det_i64};
use crate::exactgeom::{LatticeRegion, PolytopeSpec, RationalPolytope};
use crate::rational::{self, q, Q};

pub use catalog::{by_name, catalog, CATALOG_NAMES};

/// Local coordinates at a torus-fixed point, i.e. at a vertex of `P`.
///
/// A section `u` of `-s K_X` has chart exponent `<u, rho> + s` along each
/// ray `rho` of the vertex cone; monomial ideals on the chart are stored in
/// these coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub vertex: Vec<Q>,
    /// Indices into the model's ray list: the facets through `vertex`.
    pub rays: Vec<usize>,
    /// Primitive edge directions of `P` at `vertex`.
    pub basis: Vec<Vec<i64>>,
    pub smooth: bool,
}

impl Chart {
    pub fn is_simplicial(&self, dim: usize) -> bool {
        self.rays.len() == dim
    }

    /// Position of a model ray inside this chart's coordinate list.
    pub fn coordinate_of(&self, ray: usize) -> Option<usize> {
        self.rays.iter().position(|&r| r == ray)
    }
}

#[derive(Debug, Clone)]
pub struct ToricFanoModel {
    name: String,
    rays: Vec<Vec<i64>>,
    polytope: RationalPolytope,
    cartier_index: i64,
    charts: Vec<Chart>,
}

impl ToricFanoModel {
    pub fn build(name: impl Into<String>, rays: Vec<Vec<i64>>) -> Result<Self> {
        let polytope = match RationalPolytope::from_rays(&rays) {
            Ok(p) => p,
            Err(Error::UnboundedPolytope) => {
                return Err(Error::NotFano("anticanonical polytope is unbounded".into()))
            }
            Err(Error::DegeneratePolytope) => {
                return Err(Error::NotFano(
                    "anticanonical polytope is not full-dimensional".into(),
                ))
            }
            Err(e) => return Err(e),
        };
        let dim = polytope.dim();
        for (i, r) in rays.iter().enumerate() {
            let g = r.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
            if g != 1 {
                return Err(Error::NotFano(format!("ray {i} is not primitive")));
            }
        }
        if rays.iter().collect::<BTreeSet<_>>().len() != rays.len() {
            return Err(Error::NotFano("duplicate rays".into()));
        }
        // Every ray must cut out a facet, otherwise the fan is not the
        // normal fan of P.
        for (i, r) in rays.iter().enumerate() {
            let tight: Vec<Vec<Q>> = polytope
                .vertices()
                .iter()
                .filter(|v| crate::exactgeom::linalg::dot_iq(r, v) == q(-1))
                .cloned()
                .collect();
            if tight.len() < dim || affine_rank(&tight) != dim - 1 {
                return Err(Error::NotFano(format!(
                    "ray {i} does not define a facet of the anticanonical polytope"
                )));
            }
        }
        let cartier_index = polytope.vertex_denominator_lcm();
        let charts = build_charts(&polytope, &rays);
        Ok(Self {
            name: name.into(),
            rays,
            polytope,
            cartier_index,
            charts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn polytope(&self) -> &RationalPolytope {
        &self.polytope
    }

    /// Smallest `r0` with `r0 * P` a lattice polytope.
    pub fn cartier_index(&self) -> i64 {
        self.cartier_index
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> Result<&Chart> {
        self.charts
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("no chart {i}")))
    }

    /// `((-K_X)^n) = n! vol(P)`.
    pub fn anticanonical_volume(&self) -> Q {
        self.polytope.normalized_volume()
    }

    /// Lattice points of `scale * P`: the monomial basis of `H^0(-scale K_X)`
    /// (for `scale` divisible by `r0`).
    pub fn sections(&self, scale: i64) -> LatticeRegion {
        LatticeRegion::new(&self.polytope, scale)
    }

    /// `h^0(X, -k r0 K_X)`.
    pub fn section_count(&self, k: i64) -> u64 {
        self.sections(k * self.cartier_index).count()
    }

    /// Vanishing orders of the section `u` of `-scale K_X` along the rays of
    /// chart `c`.
    pub fn chart_exponents(&self, c: usize, u: &[i64], scale: i64) -> Vec<i64> {
        self.charts[c]
            .rays
            .iter()
            .map(|&r| self.rays[r].iter().zip(u).map(|(a, b)| a * b).sum::<i64>() + scale)
            .collect()
    }

    pub fn smooth_charts(&self) -> Vec<usize> {
        (0..self.charts.len())
            .filter(|&i| self.charts[i].smooth)
            .collect()
    }

    pub fn charts_containing_ray(&self, ray: usize) -> Vec<usize> {
        (0..self.charts.len())
            .filter(|&i| self.charts[i].rays.contains(&ray))
            .collect()
    }

    pub fn to_spec(&self) -> ModelSpec {
        ModelSpec {
            name: Some(self.name.clone()),
            polytope: PolytopeSpec::Rays {
                dim: self.dim(),
                rays: self.rays.clone(),
            },
            r0: Some(self.cartier_index),
        }
    }
}

fn build_charts(p: &RationalPolytope, rays: &[Vec<i64>]) -> Vec<Chart> {
    let dim = p.dim();
    let verts = p.vertices();
    let tight_rays = |v: &[Q]| -> Vec<usize> {
        (0..rays.len())
            .filter(|&i| crate::exactgeom::linalg::dot_iq(&rays[i], v) == q(-1))
            .collect()
    };
    let tight: Vec<Vec<usize>> = verts.iter().map(|v| tight_rays(v)).collect();
    verts
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut basis = Vec::new();
            for (j, w) in verts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let common: Vec<usize> = tight[i]
                    .iter()
                    .copied()
                    .filter(|r| tight[j].contains(r))
                    .collect();
                let on_face = (0..verts.len())
                    .filter(|&k| common.iter().all(|r| tight[k].contains(r)))
                    .count();
                if on_face == 2 {
                    let d: Vec<Q> = w.iter().zip(v).map(|(a, b)| a - b).collect();
                    basis.push(rational::primitive_integer(&d).expect("distinct vertices"));
                }
            }
            basis.sort();
            let chart_rays = tight[i].clone();
            let smooth = chart_rays.len() == dim && basis.len() == dim && {
                let m: Vec<Vec<i64>> = chart_rays.iter().map(|&r| rays[r].clone()).collect();
                det_i64(&m).abs() == 1
            };
            Chart {
                vertex: v.clone(),
                rays: chart_rays,
                basis,
                smooth,
            }
        })
        .collect()
}

/// Model JSON: the polytope format (rays or vertices) plus `r0`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub polytope: PolytopeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<i64>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<ToricFanoModel> {
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        let model = match &self.polytope {
            PolytopeSpec::Rays { dim, rays } => {
                if rays.iter().any(|r| r.len() != *dim) {
                    return Err(Error::InvalidInput("ray length differs from dim".into()));
                }
                ToricFanoModel::build(name, rays.clone())?
            }
            PolytopeSpec::Vertices { vertices } => {
                let p = RationalPolytope::from_vertices(vertices)?;
                let mut rays = Vec::new();
                for h in p.inequalities() {
                    if h.offset != q(-1) {
                        return Err(Error::NotFano(
                            "vertex polytope is not of the form {<u, v_i> >= -1}".into(),
                        ));
                    }
                    rays.push(h.normal.clone());
                }
                ToricFanoModel::build(name, rays)?
            }
        };
        if let Some(r0) = self.r0 {
            if r0 != model.cartier_index() {
                return Err(Error::InvalidInput(format!(
                    "declared r0 = {r0} but the polytope needs r0 = {}",
                    model.cartier_index()
                )));
            }
        }
        Ok(model)
    }
}
