//! Rational polytopes carrying both a vertex and an inequality description.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{affine_rank, determinant, dot_iq, null_space, solve};
use super::lp::{LinearProgram, LpOutcome, Relation};
use crate::error::{Error, Result};
use crate::rational::{self, factorial, q, qz, Q};

/// `<normal, u> >= offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub offset: Q,
}

impl Inequality {
    pub fn new(normal: Vec<i64>, offset: Q) -> Self {
        Self { normal, offset }
    }

    /// `<normal, u> - offset`; non-negative exactly when `u` satisfies it.
    pub fn slack(&self, u: &[Q]) -> Q {
        dot_iq(&self.normal, u) - &self.offset
    }

    pub fn holds(&self, u: &[Q]) -> bool {
        !self.slack(u).is_negative()
    }

    pub fn is_tight(&self, u: &[Q]) -> bool {
        self.slack(u).is_zero()
    }

    /// Divide out the gcd of the normal so duplicates compare equal.
    fn normalized(&self) -> Self {
        let g = self
            .normal
            .iter()
            .fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        if g <= 1 {
            return self.clone();
        }
        Self {
            normal: self.normal.iter().map(|x| x / g).collect(),
            offset: &self.offset / q(g),
        }
    }
}

/// An affine functional `u -> <coeffs, u> + constant` with integer slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vec<i64>,
    pub constant: Q,
}

impl AffineFunctional {
    pub fn new(coeffs: Vec<i64>, constant: Q) -> Self {
        Self { coeffs, constant }
    }

    pub fn linear(coeffs: Vec<i64>) -> Self {
        Self {
            coeffs,
            constant: Q::zero(),
        }
    }

    pub fn value(&self, u: &[Q]) -> Q {
        dot_iq(&self.coeffs, u) + &self.constant
    }

    /// The half-space `{u : value(u) >= x}`.
    pub fn at_least(&self, x: &Q) -> Inequality {
        Inequality::new(self.coeffs.clone(), x - &self.constant)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<Vec<Q>>,
    inequalities: Vec<Inequality>,
    full_dimensional: bool,
}

impl RationalPolytope {
    /// `{u : <u, v_i> >= -1}` for the given fan rays.
    pub fn from_rays(rays: &[Vec<i64>]) -> Result<Self> {
        let dim = rays
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::InvalidInput("no rays given".into()))?;
        if dim == 0 || rays.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput(
                "rays have inconsistent dimension".into(),
            ));
        }
        let ineqs: Vec<Inequality> = rays
            .iter()
            .map(|r| Inequality::new(r.clone(), q(-1)))
            .collect();
        let p = Self::from_inequalities(dim, ineqs)?;
        if p.is_empty() || !p.full_dimensional {
            return Err(Error::DegeneratePolytope);
        }
        Ok(p)
    }

    /// Intersect half-spaces. Errors with `UnboundedPolytope` when the
    /// intersection is non-empty and unbounded.
    pub fn from_inequalities(dim: usize, ineqs: Vec<Inequality>) -> Result<Self> {
        if ineqs.iter().any(|h| h.normal.len() != dim) {
            return Err(Error::InvalidInput("inequality dimension mismatch".into()));
        }
        if !bounded_or_empty(dim, &ineqs) {
            return Err(Error::UnboundedPolytope);
        }
        Ok(Self::from_bounded_inequalities(dim, ineqs))
    }

    /// Like [`from_inequalities`](Self::from_inequalities) but the caller
    /// guarantees boundedness (e.g. the set is cut out of a known polytope).
    pub(crate) fn from_bounded_inequalities(dim: usize, ineqs: Vec<Inequality>) -> Self {
        let ineqs: Vec<Inequality> = ineqs
            .iter()
            .map(Inequality::normalized)
            .filter(|h| !(h.normal.iter().all(|&x| x == 0) && !h.offset.is_positive()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if ineqs
            .iter()
            .any(|h| h.normal.iter().all(|&x| x == 0) && h.offset.is_positive())
        {
            return Self::empty(dim);
        }
        let vertices = enumerate_vertices(dim, &ineqs);
        if vertices.is_empty() {
            return Self::empty(dim);
        }
        let full_dimensional = affine_rank(&vertices) == dim;
        let inequalities = if full_dimensional {
            facets_only(dim, &vertices, ineqs)
        } else {
            ineqs
        };
        Self {
            dim,
            vertices,
            inequalities,
            full_dimensional,
        }
    }

    /// Convex hull of a full-dimensional point set.
    pub fn from_vertices(points: &[Vec<Q>]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::InvalidInput("no vertices given".into()))?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("vertex dimension mismatch".into()));
        }
        let pts: Vec<Vec<Q>> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if affine_rank(&pts) < dim {
            return Err(Error::DegeneratePolytope);
        }
        let mut facets = BTreeSet::new();
        for combo in combinations(pts.len(), dim) {
            let base = &pts[combo[0]];
            let diffs: Vec<Vec<Q>> = combo[1..]
                .iter()
                .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let ns = null_space(&diffs, dim);
            if ns.len() != 1 {
                continue;
            }
            let Some(normal) = rational::primitive_integer(&ns[0]) else {
                continue;
            };
            let offset = dot_iq(&normal, base);
            let signs: Vec<Q> = pts.iter().map(|p| dot_iq(&normal, p) - &offset).collect();
            let (pos, neg) = (
                signs.iter().any(|s| s.is_positive()),
                signs.iter().any(|s| s.is_negative()),
            );
            if pos && neg {
                continue;
            }
            let h = if neg {
                Inequality::new(normal.iter().map(|x| -x).collect(), -offset)
            } else {
                Inequality::new(normal, offset)
            };
            facets.insert(h);
        }
        Ok(Self::from_bounded_inequalities(
            dim,
            facets.into_iter().collect(),
        ))
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vertices: Vec::new(),
            inequalities: Vec::new(),
            full_dimensional: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.full_dimensional
    }

    pub fn contains(&self, u: &[Q]) -> bool {
        !self.is_empty() && self.inequalities.iter().all(|h| h.holds(u))
    }

    /// Intersection with extra half-spaces.
    pub fn intersect(&self, extra: &[Inequality]) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(extra.iter().cloned());
        Self::from_bounded_inequalities(self.dim, ineqs)
    }

    /// Dilation by a positive rational.
    pub fn scaled(&self, s: &Q) -> Self {
        Self {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * s).collect())
                .collect(),
            inequalities: self
                .inequalities
                .iter()
                .map(|h| Inequality::new(h.normal.clone(), &h.offset * s))
                .collect(),
            full_dimensional: self.full_dimensional,
        }
    }

    /// Indices of vertices tight on each inequality.
    fn incidence(&self) -> Vec<Vec<usize>> {
        self.inequalities
            .iter()
            .map(|h| {
                (0..self.vertices.len())
                    .filter(|&i| h.is_tight(&self.vertices[i]))
                    .collect()
            })
            .collect()
    }

    /// Pulling triangulation: every face is coned from its lexicographically
    /// smallest vertex. Simplices are returned as vertex index lists.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        if !self.full_dimensional {
            return Vec::new();
        }
        let incidence = self.incidence();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.pull(&all, self.dim, &incidence, &mut out);
        out
    }

    fn pull(&self, face: &[usize], d: usize, incidence: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
        let apex = face[0];
        if d == 0 {
            out.push(vec![apex]);
            return;
        }
        if face.len() == d + 1 {
            out.push(face.to_vec());
            return;
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for tight in incidence {
            let sub: Vec<usize> = face.iter().copied().filter(|i| tight.contains(i)).collect();
            if sub.len() < d || sub.contains(&apex) || seen.contains(&sub) {
                continue;
            }
            let pts: Vec<Vec<Q>> = sub.iter().map(|&i| self.vertices[i].clone()).collect();
            if affine_rank(&pts) != d - 1 {
                continue;
            }
            let mut simplices = Vec::new();
            self.pull(&sub, d - 1, incidence, &mut simplices);
            for mut s in simplices {
                s.insert(0, apex);
                out.push(s);
            }
            seen.insert(sub);
        }
    }

    /// Exact Lebesgue volume (zero for lower-dimensional or empty sets).
    pub fn euclidean_volume(&self) -> Q {
        let nf = qz(&factorial(self.dim as u32));
        self.triangulate()
            .iter()
            .map(|s| simplex_volume_times_factorial(&self.vertices, s))
            .sum::<Q>()
            / nf
    }

    /// `n! * volume`, the normalized volume.
    pub fn normalized_volume(&self) -> Q {
        self.triangulate()
            .iter()
            .map(|s| simplex_volume_times_factorial(&self.vertices, s))
            .sum()
    }

    /// Integer lattice points of `scale * P` in lexicographic order.
    pub fn lattice_points(&self, scale: i64) -> Vec<Vec<i64>> {
        super::lattice::LatticeRegion::new(self, scale).points()
    }

    pub fn count_lattice_points(&self, scale: i64) -> u64 {
        super::lattice::LatticeRegion::new(self, scale).count()
    }

    /// Least common multiple of vertex denominators.
    pub fn vertex_denominator_lcm(&self) -> i64 {
        use num_integer::Integer;
        let l = self
            .vertices
            .iter()
            .flatten()
            .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        num_traits::ToPrimitive::to_i64(&l).expect("denominator fits in i64")
    }

    pub fn to_spec(&self) -> PolytopeSpec {
        PolytopeSpec::Vertices {
            vertices: self.vertices.clone(),
        }
    }
}

fn simplex_volume_times_factorial(vertices: &[Vec<Q>], simplex: &[usize]) -> Q {
    let base = &vertices[simplex[0]];
    let m: Vec<Vec<Q>> = simplex[1..]
        .iter()
        .map(|&i| vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    determinant(&m).abs()
}

fn bounded_or_empty(dim: usize, ineqs: &[Inequality]) -> bool {
    for j in 0..dim {
        for sign in [1i64, -1] {
            let mut obj = vec![Q::zero(); dim];
            obj[j] = q(sign);
            let mut lp = LinearProgram::new(obj).all_free();
            for h in ineqs {
                lp.push(
                    h.normal.iter().map(|&x| q(x)).collect(),
                    Relation::Ge,
                    h.offset.clone(),
                );
            }
            match lp.maximize() {
                LpOutcome::Infeasible => return true,
                LpOutcome::Unbounded => return false,
                LpOutcome::Optimal { .. } => {}
            }
        }
    }
    true
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn enumerate_vertices(dim: usize, ineqs: &[Inequality]) -> Vec<Vec<Q>> {
    let rows: Vec<Vec<Q>> = ineqs
        .iter()
        .map(|h| h.normal.iter().map(|&x| q(x)).collect())
        .collect();
    let mut found = BTreeSet::new();
    if dim == 0 {
        return vec![Vec::new()];
    }
    for combo in combinations(ineqs.len(), dim) {
        let a: Vec<Vec<Q>> = combo.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<Q> = combo.iter().map(|&i| ineqs[i].offset.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if ineqs.iter().all(|h| h.holds(&x)) {
                found.insert(x);
            }
        }
    }
    found.into_iter().collect()
}

/// Keep the inequalities whose tight vertices span a facet.
fn facets_only(dim: usize, vertices: &[Vec<Q>], ineqs: Vec<Inequality>) -> Vec<Inequality> {
    ineqs
        .into_iter()
        .filter(|h| {
            let tight: Vec<Vec<Q>> = vertices.iter().filter(|v| h.is_tight(v)).cloned().collect();
            tight.len() >= dim && affine_rank(&tight) == dim - 1
        })
        .collect()
}

/// JSON form: either fan rays or explicit vertices.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PolytopeSpec {
    Rays {
        dim: usize,
        rays: Vec<Vec<i64>>,
    },
    Vertices {
        #[serde(with = "crate::rational::vecvec_as_str")]
        vertices: Vec<Vec<Q>>,
    },
}

impl PolytopeSpec {
    pub fn build(&self) -> Result<RationalPolytope> {
        match self {
            PolytopeSpec::Rays { dim, rays } => {
                if rays.iter().any(|r| r.len() != *dim) {
                    return Err(Error::InvalidInput("ray length differs from dim".into()));
                }
                RationalPolytope::from_rays(rays)
            }
            PolytopeSpec::Vertices { vertices } => RationalPolytope::from_vertices(vertices),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn projective_plane_triangle() {
        let p = RationalPolytope::from_rays(&[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        assert_eq!(p.vertices(), &[qv(&[-1, -1]), qv(&[-1, 2]), qv(&[2, -1])]);
        assert_eq!(p.euclidean_volume(), frac(9, 2));
        assert_eq!(p.inequalities().len(), 3);
    }

    #[test]
    fn segment_and_errors() {
        let p = RationalPolytope::from_rays(&[vec![1], vec![-1]]).unwrap();
        assert_eq!(p.vertices(), &[qv(&[-1]), qv(&[1])]);
        assert_eq!(p.euclidean_volume(), q(2));
        assert!(matches!(
            RationalPolytope::from_rays(&[vec![1, 0], vec![0, 1]]),
            Err(Error::UnboundedPolytope)
        ));
    }

    #[test]
    fn unit_cube_volume() {
        let mut pts = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    pts.push(qv(&[a, b, c]));
                }
            }
        }
        let p = RationalPolytope::from_vertices(&pts).unwrap();
        assert_eq!(p.euclidean_volume(), q(1));
        assert_eq!(p.inequalities().len(), 6);
        assert_eq!(p.triangulate().len(), 6);
    }

    #[test]
    fn round_trip_vertices() {
        let p = RationalPolytope::from_rays(&[
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, -1],
        ])
        .unwrap();
        let back = RationalPolytope::from_vertices(p.vertices()).unwrap();
        assert_eq!(back.vertices(), p.vertices());
        assert_eq!(p.euclidean_volume(), q(3));
    }

    #[test]
    fn interior_points_are_dropped_from_hull() {
        let p = RationalPolytope::from_vertices(&[
            qv(&[0, 0]),
            qv(&[2, 0]),
            qv(&[0, 2]),
            vec![frac(1, 2), frac(1, 2)],
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.euclidean_volume(), q(2));
    }

    #[test]
    fn json_forms() {
        let s: PolytopeSpec = serde_json::from_str(r#"{"dim":1,"rays":[[1],[-1]]}"#).unwrap();
        assert_eq!(s.build().unwrap().euclidean_volume(), q(2));
        let s: PolytopeSpec =
            serde_json::from_str(r#"{"vertices":[["0/1","0/1"],["1/2","0/1"],["0/1","1/2"]]}"#)
                .unwrap();
        assert_eq!(s.build().unwrap().euclidean_volume(), frac(1, 8));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
