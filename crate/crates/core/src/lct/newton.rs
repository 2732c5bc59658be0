use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::ideal::{ChartIdeal, IdealSheaf, MonomialSubscheme};
use crate::error::{Error, Result};
use crate::exactgeom::linalg::solve;
use crate::exactgeom::lp::{LinearProgram, LpOutcome, Relation};
use crate::exactgeom::polytope::combinations;
use crate::par;
use crate::rational::{self, q, Q};
use crate::toricmodel::ToricFanoModel;

/// `conv(generators) + R^n_{>=0}` in inequality form: the non-coordinate
/// facets are `<w, u> >= 1` for the vertices `w` of the blocker
/// `{w >= 0 : <w, g> >= 1 for every generator g}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolyhedron {
    dim: usize,
    generators: Vec<Vec<i64>>,
    facets: Vec<Vec<Q>>,
}

impl NewtonPolyhedron {
    pub fn new(ideal: &ChartIdeal) -> Result<Self> {
        if ideal.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let n = ideal.dim();
        let gens = ideal.generators().to_vec();
        let facets = if ideal.is_unit() {
            Vec::new()
        } else {
            blocker_vertices(n, &gens)
        };
        Ok(Self {
            dim: n,
            generators: gens,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Normals `w >= 0` of the facets `<w, u> >= 1`. The coordinate
    /// half-spaces `u_i >= 0` are implicit.
    pub fn facets(&self) -> &[Vec<Q>] {
        &self.facets
    }

    /// The recession cone is the positive orthant, spanned by the unit vectors.
    pub fn extreme_rays(&self) -> Vec<Vec<i64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| i64::from(i == j)).collect())
            .collect()
    }

    pub fn contains(&self, u: &[Q]) -> bool {
        u.iter().all(|x| *x >= Q::zero())
            && self.facets.iter().all(|w| {
                let s: Q = w.iter().zip(u).map(|(a, b)| a * b).sum();
                s >= Q::one()
            })
    }
}

fn blocker_vertices(n: usize, gens: &[Vec<i64>]) -> Vec<Vec<Q>> {
    // Constraint rows: first the n coordinate constraints w_i >= 0, then one
    // row <g, w> >= 1 per generator.
    let mut rows: Vec<(Vec<Q>, Q)> = (0..n)
        .map(|i| ((0..n).map(|j| q(i64::from(i == j))).collect(), Q::zero()))
        .collect();
    rows.extend(
        gens.iter()
            .map(|g| (g.iter().map(|&x| q(x)).collect(), Q::one())),
    );
    let feasible = |w: &[Q]| {
        rows.iter()
            .all(|(a, b)| a.iter().zip(w).map(|(x, y)| x * y).sum::<Q>() >= *b)
    };
    let subsets = combinations(rows.len(), n);
    let found: Vec<Option<Vec<Q>>> = par::map(&subsets, |s| {
        let a: Vec<Vec<Q>> = s.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Q> = s.iter().map(|&i| rows[i].1.clone()).collect();
        solve(&a, &b).filter(|w| feasible(w))
    });
    let mut out: Vec<Vec<Q>> = found.into_iter().flatten().collect();
    out.sort();
    out.dedup();
    out
}

/// A threshold that may be `+∞` (the unit ideal imposes no condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Finite(Q),
    Unbounded,
}

impl Threshold {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Threshold::Finite(x) => Some(x),
            Threshold::Unbounded => None,
        }
    }

    pub fn min(self, other: Threshold) -> Threshold {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
            (Threshold::Finite(_), Threshold::Unbounded) => Ordering::Less,
            (Threshold::Unbounded, Threshold::Finite(_)) => Ordering::Greater,
            (Threshold::Unbounded, Threshold::Unbounded) => Ordering::Equal,
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::Finite(x) => write!(f, "{}", rational::to_string(x)),
            Threshold::Unbounded => write!(f, "unbounded"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Howald: `lct = min over facets <w,u> >= 1 of sum(w)`.
pub fn lct_chart(ideal: &ChartIdeal) -> Result<Threshold> {
    let newt = NewtonPolyhedron::new(ideal)?;
    Ok(newt
        .facets()
        .iter()
        .map(|w| w.iter().sum::<Q>())
        .min()
        .map_or(Threshold::Unbounded, Threshold::Finite))
}

/// The same threshold by a different route: `1 / min{t : t·(1,…,1) ∈ Newt}`.
pub fn lct_chart_lp(ideal: &ChartIdeal) -> Result<Threshold> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Ok(Threshold::Unbounded);
    }
    let n = ideal.dim();
    let gens = ideal.generators();
    // Variables: t, then one convex weight per generator.
    let nv = 1 + gens.len();
    let mut obj = vec![Q::zero(); nv];
    obj[0] = Q::one();
    let mut lp = LinearProgram::new(obj);
    for i in 0..n {
        let mut row = vec![Q::zero(); nv];
        row[0] = Q::one();
        for (j, g) in gens.iter().enumerate() {
            row[1 + j] = q(-g[i]);
        }
        lp.push(row, Relation::Ge, Q::zero());
    }
    let mut sum = vec![Q::one(); nv];
    sum[0] = Q::zero();
    lp.push(sum, Relation::Eq, Q::one());
    match lp.minimize() {
        LpOutcome::Optimal { value, .. } => Ok(Threshold::Finite(Q::one() / value)),
        other => Err(Error::InvalidInput(format!(
            "threshold program did not solve: {other:?}"
        ))),
    }
}

/// Minimum of the chart thresholds over every chart where the ideal is proper.
pub fn lct_ideal_sheaf(model: &ToricFanoModel, ideal: &IdealSheaf) -> Result<Threshold> {
    let charts: Vec<usize> = (0..ideal.charts().len()).collect();
    let per_chart = par::try_map(&charts, |&c| {
        let i = ideal.chart(c);
        if i.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        if i.is_unit() {
            return Ok(Threshold::Unbounded);
        }
        if !model.charts()[c].smooth {
            return Err(Error::NotSmoothChart(c));
        }
        lct_chart(i)
    })?;
    Ok(per_chart
        .into_iter()
        .fold(Threshold::Unbounded, Threshold::min))
}

/// `lct(X; I_Z)`.
pub fn lct_monomial(model: &ToricFanoModel, z: &MonomialSubscheme) -> Result<Q> {
    match lct_ideal_sheaf(model, z.ideal())? {
        Threshold::Finite(x) => Ok(x),
        Threshold::Unbounded => Err(Error::EmptyOrFull),
    }
}

/// Values `lct(X, a_r^{c/r}) = r·lct(a_r)/c` along a sampled list of levels.
#[derive(Debug, Clone, Serialize)]
pub struct GradedLctEstimate {
    pub values: Vec<(u32, Threshold)>,
    pub non_decreasing: bool,
    pub supremum: Threshold,
}

pub fn graded_family_lct_estimate<F>(
    model: &ToricFanoModel,
    family: F,
    c: &Q,
    r_list: &[u32],
) -> Result<GradedLctEstimate>
where
    F: Fn(u32) -> Result<IdealSheaf>,
{
    if *c <= Q::zero() {
        return Err(Error::Precondition("c must be positive".into()));
    }
    let members: Vec<(u32, IdealSheaf)> = r_list
        .iter()
        .map(|&r| family(r).map(|a| (r, a)))
        .collect::<Result<_>>()?;
    for (r, a) in &members {
        for (s, b) in &members {
            if let Some((_, ab)) = members.iter().find(|(t, _)| *t == r + s) {
                if !ab.contains_ideal(&a.product(b)) {
                    return Err(Error::FamilyNotGraded(*r, *s));
                }
            }
        }
    }
    let mut values = Vec::with_capacity(members.len());
    for (r, a) in &members {
        let t = match lct_ideal_sheaf(model, a)? {
            Threshold::Finite(x) => Threshold::Finite(x * q(i64::from(*r)) / c),
            Threshold::Unbounded => Threshold::Unbounded,
        };
        values.push((*r, t));
    }
    let non_decreasing = values.windows(2).all(|w| w[0].1 <= w[1].1);
    let supremum = values
        .iter()
        .map(|(_, t)| t.clone())
        .max()
        .unwrap_or(Threshold::Unbounded);
    Ok(GradedLctEstimate {
        values,
        non_decreasing,
        supremum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::toricmodel::by_name;

    fn ideal(n: usize, g: &[&[i64]]) -> ChartIdeal {
        ChartIdeal::new(n, g.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn standard_thresholds() {
        let cases = [
            (ideal(2, &[&[1, 0], &[0, 1]]), q(2)),
            (ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), q(3)),
            (ideal(2, &[&[2, 0], &[0, 3]]), frac(5, 6)),
            (ideal(2, &[&[1, 0]]), q(1)),
            (ideal(2, &[&[1, 1]]), q(1)),
            (ideal(2, &[&[4, 0], &[1, 1], &[0, 4]]), frac(1, 1)),
        ];
        for (i, want) in cases {
            assert_eq!(
                lct_chart(&i).unwrap(),
                Threshold::Finite(want.clone()),
                "{i:?}"
            );
            assert_eq!(lct_chart_lp(&i).unwrap(), Threshold::Finite(want));
        }
        assert_eq!(
            lct_chart(&ChartIdeal::unit(2)).unwrap(),
            Threshold::Unbounded
        );
        assert!(matches!(
            lct_chart(&ChartIdeal::zero(2)),
            Err(Error::ZeroIdeal)
        ));
    }

    #[test]
    fn newton_facets_of_cusp() {
        let newt = NewtonPolyhedron::new(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(newt.facets(), &[vec![frac(1, 2), frac(1, 3)]]);
        assert!(newt.contains(&[q(1), frac(3, 2)]));
        assert!(!newt.contains(&[q(1), q(1)]));
        assert!(newt.facets().iter().flatten().all(|x| *x >= Q::zero()));
    }

    #[test]
    fn points_and_divisors() {
        for (name, n) in [("P1", 1), ("P2", 2), ("P3", 3)] {
            let m = by_name(name).unwrap();
            for c in 0..m.charts().len() {
                let p = MonomialSubscheme::fixed_point(&m, c).unwrap();
                assert_eq!(lct_monomial(&m, &p).unwrap(), q(n));
                for k in [2u32, 3] {
                    assert_eq!(lct_monomial(&m, &p.power(k)).unwrap(), q(n) / q(k as i64));
                }
            }
            for r in 0..m.rays().len() {
                let d = MonomialSubscheme::boundary_divisor(&m, r).unwrap();
                assert_eq!(lct_monomial(&m, &d).unwrap(), q(1));
            }
        }
    }

    #[test]
    fn singular_chart_is_rejected() {
        let m = by_name("P(1,1,2)").unwrap();
        let sing = m.charts().iter().position(|c| !c.smooth).unwrap();
        let p = MonomialSubscheme::fixed_point(&m, sing).unwrap();
        assert!(matches!(lct_monomial(&m, &p), Err(Error::NotSmoothChart(c)) if c == sing));
    }

    #[test]
    fn graded_families() {
        let m = by_name("P2").unwrap();
        let p = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        let est = graded_family_lct_estimate(&m, |r| Ok(p.ideal().power(r)), &q(1), &[1, 2, 3, 4])
            .unwrap();
        assert!(est
            .values
            .iter()
            .all(|(_, t)| *t == Threshold::Finite(q(2))));
        assert!(est.non_decreasing);
        let unit =
            graded_family_lct_estimate(&m, |_| Ok(IdealSheaf::unit(&m)), &q(1), &[1, 2]).unwrap();
        assert_eq!(unit.supremum, Threshold::Unbounded);
        let bad = graded_family_lct_estimate(
            &m,
            |r| {
                Ok(if r == 2 {
                    p.ideal().power(3)
                } else {
                    p.ideal().clone()
                })
            },
            &q(1),
            &[1, 2],
        );
        assert!(matches!(bad, Err(Error::FamilyNotGraded(1, 1))));
    }
}
