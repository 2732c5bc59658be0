//! Torus-invariant ideals: per-chart monomial ideals and their gluing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toricmodel::ToricFanoModel;

/// A monomial ideal in chart coordinates, stored by its minimal generators.
///
/// No generators means the zero ideal; the generator `0` means the unit ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartIdeal {
    dim: usize,
    gens: Vec<Vec<i64>>,
}

fn dominates(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Drop every generator that is componentwise above another one.
fn minimalize(mut gens: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    gens.sort_by_key(|g| (g.iter().sum::<i64>(), g.clone()));
    gens.dedup();
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| dominates(&g, h)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

impl ChartIdeal {
    pub fn new(dim: usize, gens: Vec<Vec<i64>>) -> Result<Self> {
        for g in &gens {
            if g.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "generator {g:?} has length {} but the chart has {dim} coordinates",
                    g.len()
                )));
            }
            if g.iter().any(|&x| x < 0) {
                return Err(Error::InvalidInput(format!(
                    "generator {g:?} has a negative exponent"
                )));
            }
        }
        Ok(Self::from_trusted(dim, gens))
    }

    pub(crate) fn from_trusted(dim: usize, gens: Vec<Vec<i64>>) -> Self {
        Self {
            dim,
            gens: minimalize(gens),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, gens: vec![] }
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            dim,
            gens: vec![vec![0; dim]],
        }
    }

    /// The maximal ideal `(x_1, ..., x_n)` of the chart origin.
    pub fn maximal(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                e
            })
            .collect();
        Self::from_trusted(dim, gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&x| x == 0))
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        self.gens.iter().any(|g| dominates(a, g))
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &ChartIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &ChartIdeal) -> ChartIdeal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self::from_trusted(self.dim, gens)
    }

    pub fn product(&self, other: &ChartIdeal) -> ChartIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_trusted(self.dim, gens)
    }

    pub fn power(&self, m: u32) -> ChartIdeal {
        let mut acc = Self::unit(self.dim);
        for _ in 0..m {
            acc = acc.product(self);
        }
        acc
    }

    /// Localization that inverts every coordinate outside `keep`, written in
    /// the coordinates listed by `keep`.
    pub fn localize(&self, keep: &[usize]) -> ChartIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| keep.iter().map(|&i| g[i]).collect())
            .collect();
        Self::from_trusted(keep.len(), gens)
    }

    /// Append a coordinate with the given exponent to every generator.
    pub fn times_monomial_in_new_variable(&self, e: i64) -> ChartIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut h = g.clone();
                h.push(e);
                h
            })
            .collect();
        Self::from_trusted(self.dim + 1, gens)
    }
}

/// One chart ideal per chart of a model, indexed like `model.charts()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealSheaf {
    charts: Vec<ChartIdeal>,
}

impl IdealSheaf {
    pub fn new(model: &ToricFanoModel, charts: Vec<ChartIdeal>) -> Result<Self> {
        if charts.len() != model.charts().len() {
            return Err(Error::InvalidInput(format!(
                "{} chart ideals given for a model with {} charts",
                charts.len(),
                model.charts().len()
            )));
        }
        for (c, (ideal, chart)) in charts.iter().zip(model.charts()).enumerate() {
            if ideal.dim() != chart.rays.len() {
                return Err(Error::InvalidInput(format!(
                    "chart {c} has {} coordinates, ideal has {}",
                    chart.rays.len(),
                    ideal.dim()
                )));
            }
        }
        Ok(Self { charts })
    }

    pub(crate) fn from_trusted(charts: Vec<ChartIdeal>) -> Self {
        Self { charts }
    }

    pub fn unit(model: &ToricFanoModel) -> Self {
        Self {
            charts: model
                .charts()
                .iter()
                .map(|c| ChartIdeal::unit(c.rays.len()))
                .collect(),
        }
    }

    pub fn zero(model: &ToricFanoModel) -> Self {
        Self {
            charts: model
                .charts()
                .iter()
                .map(|c| ChartIdeal::zero(c.rays.len()))
                .collect(),
        }
    }

    pub fn charts(&self) -> &[ChartIdeal] {
        &self.charts
    }

    pub fn chart(&self, c: usize) -> &ChartIdeal {
        &self.charts[c]
    }

    pub fn is_zero(&self) -> bool {
        self.charts.iter().all(ChartIdeal::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.charts.iter().all(ChartIdeal::is_unit)
    }

    pub fn contains_ideal(&self, other: &IdealSheaf) -> bool {
        self.charts
            .iter()
            .zip(&other.charts)
            .all(|(a, b)| a.contains_ideal(b))
    }

    pub fn product(&self, other: &IdealSheaf) -> IdealSheaf {
        Self {
            charts: self
                .charts
                .iter()
                .zip(&other.charts)
                .map(|(a, b)| a.product(b))
                .collect(),
        }
    }

    pub fn sum(&self, other: &IdealSheaf) -> IdealSheaf {
        Self {
            charts: self
                .charts
                .iter()
                .zip(&other.charts)
                .map(|(a, b)| a.sum(b))
                .collect(),
        }
    }

    pub fn power(&self, m: u32) -> IdealSheaf {
        Self {
            charts: self.charts.iter().map(|a| a.power(m)).collect(),
        }
    }

    /// Whether the section `u` of `-scale K_X` lies in `L^scale * self`.
    pub fn contains_section(&self, model: &ToricFanoModel, u: &[i64], scale: i64) -> bool {
        (0..self.charts.len()).all(|c| self.charts[c].contains(&model.chart_exponents(c, u, scale)))
    }

    /// Check that chart ideals agree on every pairwise overlap.
    pub fn check_gluing(&self, model: &ToricFanoModel) -> Result<()> {
        let charts = model.charts();
        for a in 0..charts.len() {
            for b in a + 1..charts.len() {
                let common: Vec<usize> = charts[a]
                    .rays
                    .iter()
                    .copied()
                    .filter(|r| charts[b].rays.contains(r))
                    .collect();
                let keep_a: Vec<usize> = common
                    .iter()
                    .map(|&r| charts[a].coordinate_of(r).unwrap())
                    .collect();
                let keep_b: Vec<usize> = common
                    .iter()
                    .map(|&r| charts[b].coordinate_of(r).unwrap())
                    .collect();
                if self.charts[a].localize(&keep_a) != self.charts[b].localize(&keep_b) {
                    return Err(Error::InvalidInput(format!(
                        "chart ideals {a} and {b} do not agree on their overlap"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A closed subscheme `0 ≠ I_Z ⊊ O_X` given by a torus-invariant ideal sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSubscheme {
    name: String,
    ideal: IdealSheaf,
}

impl MonomialSubscheme {
    pub fn new(model: &ToricFanoModel, name: impl Into<String>, ideal: IdealSheaf) -> Result<Self> {
        if ideal.charts.len() != model.charts().len() {
            return Err(Error::InvalidInput("chart count mismatch".into()));
        }
        if ideal.is_unit() || ideal.charts.iter().any(ChartIdeal::is_zero) {
            return Err(Error::EmptyOrFull);
        }
        ideal.check_gluing(model)?;
        Ok(Self {
            name: name.into(),
            ideal,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ideal(&self) -> &IdealSheaf {
        &self.ideal
    }

    /// Charts on which the ideal is proper.
    pub fn support_charts(&self) -> Vec<usize> {
        (0..self.ideal.charts.len())
            .filter(|&c| !self.ideal.charts[c].is_unit())
            .collect()
    }

    pub fn power(&self, m: u32) -> MonomialSubscheme {
        Self {
            name: format!("{}^{m}", self.name),
            ideal: self.ideal.power(m),
        }
    }

    /// The reduced torus-fixed point of chart `c`.
    pub fn fixed_point(model: &ToricFanoModel, c: usize) -> Result<Self> {
        let mut charts: Vec<ChartIdeal> = model
            .charts()
            .iter()
            .map(|ch| ChartIdeal::unit(ch.rays.len()))
            .collect();
        let chart = model.chart(c)?;
        charts[c] = ChartIdeal::maximal(chart.rays.len());
        Self::new(model, format!("point{c}"), IdealSheaf { charts })
    }

    /// `I_p^m` for the fixed point of chart `c`.
    pub fn thick_point(model: &ToricFanoModel, c: usize, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyOrFull);
        }
        let p = Self::fixed_point(model, c)?;
        let mut z = p.power(m);
        z.name = format!("point{c}^{m}");
        Ok(z)
    }

    /// The reduced toric boundary divisor of ray `ray`.
    pub fn boundary_divisor(model: &ToricFanoModel, ray: usize) -> Result<Self> {
        if ray >= model.rays().len() {
            return Err(Error::InvalidInput(format!("no ray {ray}")));
        }
        let charts = model
            .charts()
            .iter()
            .map(|ch| match ch.coordinate_of(ray) {
                Some(i) => {
                    let mut e = vec![0; ch.rays.len()];
                    e[i] = 1;
                    ChartIdeal::from_trusted(ch.rays.len(), vec![e])
                }
                None => ChartIdeal::unit(ch.rays.len()),
            })
            .collect();
        Self::new(model, format!("divisor{ray}"), IdealSheaf { charts })
    }
}

/// JSON description of a subscheme.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubschemeSpec {
    FixedPoint {
        chart: usize,
    },
    ThickPoint {
        chart: usize,
        power: u32,
    },
    BoundaryDivisor {
        ray: usize,
    },
    /// Explicit generators per chart id; charts left out carry the unit ideal.
    Charts {
        #[serde(default)]
        name: Option<String>,
        /// Keys are chart ids written as strings, as JSON object keys must be.
        charts: BTreeMap<String, Vec<Vec<i64>>>,
    },
}

impl SubschemeSpec {
    pub fn build(&self, model: &ToricFanoModel) -> Result<MonomialSubscheme> {
        match self {
            SubschemeSpec::FixedPoint { chart } => MonomialSubscheme::fixed_point(model, *chart),
            SubschemeSpec::ThickPoint { chart, power } => {
                MonomialSubscheme::thick_point(model, *chart, *power)
            }
            SubschemeSpec::BoundaryDivisor { ray } => {
                MonomialSubscheme::boundary_divisor(model, *ray)
            }
            SubschemeSpec::Charts { name, charts } => {
                let mut ideals: Vec<ChartIdeal> = model
                    .charts()
                    .iter()
                    .map(|ch| ChartIdeal::unit(ch.rays.len()))
                    .collect();
                for (key, gens) in charts {
                    let c: usize = key
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad chart id {key:?}")))?;
                    let ch = model.chart(c)?;
                    ideals[c] = ChartIdeal::new(ch.rays.len(), gens.clone())?;
                }
                MonomialSubscheme::new(
                    model,
                    name.clone().unwrap_or_else(|| "custom".into()),
                    IdealSheaf { charts: ideals },
                )
            }
        }
    }

    /// Short forms used on the command line: `point:C`, `thick:C:M`,
    /// `divisor:R`.
    pub fn parse_short(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<usize> {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            ["point", c] => Ok(SubschemeSpec::FixedPoint { chart: num(c)? }),
            ["thick", c, m] => Ok(SubschemeSpec::ThickPoint {
                chart: num(c)?,
                power: num(m)? as u32,
            }),
            ["divisor", r] => Ok(SubschemeSpec::BoundaryDivisor { ray: num(r)? }),
            _ => Err(Error::Parse(format!(
                "expected point:C, thick:C:M or divisor:R, got {s:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toricmodel::by_name;

    #[test]
    fn minimal_generators() {
        let i = ChartIdeal::new(
            2,
            vec![vec![2, 0], vec![1, 1], vec![2, 3], vec![0, 2], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(i.generators(), &[vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(ChartIdeal::maximal(2).power(2), i);
        assert!(i.contains(&[3, 1]));
        assert!(!i.contains(&[1, 0]));
        assert!(ChartIdeal::maximal(2).contains_ideal(&i));
        assert!(ChartIdeal::unit(2).is_unit());
        assert!(ChartIdeal::zero(2).product(&i).is_zero());
    }

    #[test]
    fn builders_glue() {
        for m in crate::toricmodel::catalog() {
            for c in 0..m.charts().len() {
                MonomialSubscheme::fixed_point(&m, c).unwrap();
                MonomialSubscheme::thick_point(&m, c, 2).unwrap();
            }
            for r in 0..m.rays().len() {
                MonomialSubscheme::boundary_divisor(&m, r).unwrap();
            }
        }
    }

    #[test]
    fn rejects_inconsistent_and_trivial() {
        let m = by_name("P2").unwrap();
        let mut charts: Vec<ChartIdeal> = (0..3).map(|_| ChartIdeal::unit(2)).collect();
        charts[0] = ChartIdeal::new(2, vec![vec![1, 0]]).unwrap();
        assert!(MonomialSubscheme::new(&m, "half", IdealSheaf::from_trusted(charts)).is_err());
        assert!(matches!(
            MonomialSubscheme::new(&m, "all", IdealSheaf::unit(&m)),
            Err(Error::EmptyOrFull)
        ));
        assert!(matches!(
            MonomialSubscheme::new(&m, "none", IdealSheaf::zero(&m)),
            Err(Error::EmptyOrFull)
        ));
    }

    #[test]
    fn spec_parsing() {
        let m = by_name("P1xP1").unwrap();
        let s: SubschemeSpec =
            serde_json::from_str(r#"{"kind":"charts","charts":{"0":[[2,0],[0,3]]}}"#).unwrap();
        let z = s.build(&m).unwrap();
        assert_eq!(z.support_charts(), vec![0]);
        assert_eq!(
            SubschemeSpec::parse_short("thick:1:2").unwrap(),
            SubschemeSpec::ThickPoint { chart: 1, power: 2 }
        );
        assert!(SubschemeSpec::parse_short("line").is_err());
    }
}
