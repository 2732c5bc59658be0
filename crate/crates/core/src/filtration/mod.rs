//! Torus-equivariant filtrations of the section ring of `L = -r0 K_X`,
//! their saturations, the ideal families they induce, and the numerical
//! data (`A_r`, `d_r`, `d_∞`) of the associated test configurations.
//!
//! A torus-equivariant filtration is determined by a weight on the monomial
//! basis of each level: `F^x V_r` is spanned by the lattice points `u` of
//! `r r0 P` with `weight_r(u) >= x`. Decreasing and left-continuous are then
//! automatic.

mod saturation;
mod weights;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lct::{ChartIdeal, MonomialSubscheme};
use crate::rational::{self, q, Q};
use crate::toricmodel::ToricFanoModel;
use crate::volumes::blowup_volume_profile;

pub use saturation::{
    find_r1, find_r1_capped, saturate, LawReport, SaturatedIdealTable, Saturation, R_CAP,
};
pub use weights::{
    compute_d_infty, compute_weight_series, filtration_volume, stable_difference, DInftyReport,
    FiltrationVolume, LevelSample, WeightParams, WeightRecord, WeightSeries,
};

/// Per-level weights for finitely many levels.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExplicitTable {
    /// `levels[r]` lists `(u, weight)`; unlisted points of a tabulated level
    /// get `r * default_slope`.
    #[serde(default)]
    pub levels: BTreeMap<u32, Vec<(Vec<i64>, String)>>,
    /// Slope applied to points without an explicit weight.
    #[serde(default = "zero_str")]
    pub default_slope: String,
    /// Adds `r * shift` to every weight of level `r`.
    #[serde(default = "zero_str")]
    pub shift: String,
    /// When set, every level is tabulated (by defaults where not listed).
    #[serde(default)]
    pub uniform: bool,
}

fn zero_str() -> String {
    "0".into()
}

impl ExplicitTable {
    /// `F^x V_r = V_r` for `x <= 0` and `0` for `x > 0`.
    pub fn trivial() -> Self {
        Self {
            levels: BTreeMap::new(),
            default_slope: "0".into(),
            shift: "0".into(),
            uniform: true,
        }
    }

    fn is_tabulated(&self, r: u32) -> bool {
        self.uniform || self.levels.contains_key(&r)
    }
}

#[derive(Debug, Clone)]
pub enum FiltrationKind {
    /// `F^x V_r = H^0(L^r · I_Z^{⌈x⌉})` for `x >= 0`, all of `V_r` below.
    IdealPower(MonomialSubscheme),
    Explicit(ExplicitTable),
}

type LevelWeights = Arc<Vec<(Vec<i64>, Q)>>;

/// Parsed explicit table: default slope, shift, and per-level point weights.
type ParsedTable = (Q, Q, BTreeMap<u32, BTreeMap<Vec<i64>, Q>>);

#[derive(Debug, Clone)]
pub struct FiltrationSpec {
    model: ToricFanoModel,
    kind: FiltrationKind,
    e_min_est: Q,
    e_max_est: Q,
    tau: Option<Q>,
    explicit: Option<ParsedTable>,
    cache: Arc<Mutex<BTreeMap<u32, LevelWeights>>>,
}

/// Serializable description of a filtration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiltrationDescription {
    IdealPower {
        subscheme: crate::lct::SubschemeSpec,
    },
    Explicit {
        #[serde(flatten)]
        table: ExplicitTable,
    },
}

impl FiltrationDescription {
    pub fn build(&self, model: &ToricFanoModel) -> Result<FiltrationSpec> {
        match self {
            FiltrationDescription::IdealPower { subscheme } => {
                FiltrationSpec::ideal_power(model, subscheme.build(model)?)
            }
            FiltrationDescription::Explicit { table } => {
                FiltrationSpec::explicit(model, table.clone())
            }
        }
    }
}

impl FiltrationSpec {
    pub fn ideal_power(model: &ToricFanoModel, z: MonomialSubscheme) -> Result<Self> {
        let tau = blowup_volume_profile(model, &z)?.tau;
        Ok(Self {
            model: model.clone(),
            e_min_est: Q::zero(),
            e_max_est: q(model.cartier_index()) * &tau,
            tau: Some(tau),
            kind: FiltrationKind::IdealPower(z),
            explicit: None,
            cache: Arc::default(),
        })
    }

    pub fn explicit(model: &ToricFanoModel, table: ExplicitTable) -> Result<Self> {
        let slope = rational::parse(&table.default_slope)?;
        let shift = rational::parse(&table.shift)?;
        let mut parsed = BTreeMap::new();
        for (&r, entries) in &table.levels {
            if r == 0 {
                return Err(Error::InvalidInput("levels start at r = 1".into()));
            }
            let region = model.sections(i64::from(r) * model.cartier_index());
            let mut m = BTreeMap::new();
            for (u, w) in entries {
                if u.len() != model.dim() || region.filter(|p| p == u.as_slice()).is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "{u:?} is not a lattice point of level {r}"
                    )));
                }
                m.insert(u.clone(), rational::parse(w)?);
            }
            parsed.insert(r, m);
        }
        let mut spec = Self {
            model: model.clone(),
            kind: FiltrationKind::Explicit(table.clone()),
            e_min_est: Q::zero(),
            e_max_est: Q::zero(),
            tau: None,
            explicit: Some((slope.clone(), shift, parsed)),
            cache: Arc::default(),
        };
        // Bounds from the tabulated levels, or from the default slope alone.
        let mut levels: Vec<u32> = table.levels.keys().copied().collect();
        if levels.is_empty() {
            levels.push(1);
        }
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for r in levels {
            for (_, w) in spec.level_weights(r)?.iter() {
                let s = w / q(i64::from(r));
                if lo.as_ref().is_none_or(|l| s < *l) {
                    lo = Some(s.clone());
                }
                if hi.as_ref().is_none_or(|h| s > *h) {
                    hi = Some(s);
                }
            }
        }
        spec.e_min_est = lo.unwrap_or_else(Q::zero);
        spec.e_max_est = hi.unwrap_or_else(Q::zero);
        Ok(spec)
    }

    pub fn model(&self) -> &ToricFanoModel {
        &self.model
    }

    pub fn kind(&self) -> &FiltrationKind {
        &self.kind
    }

    pub fn e_min_est(&self) -> &Q {
        &self.e_min_est
    }

    pub fn e_max_est(&self) -> &Q {
        &self.e_max_est
    }

    /// `τ_Z` for ideal-power filtrations.
    pub fn tau(&self) -> Option<&Q> {
        self.tau.as_ref()
    }

    /// Integer bounds `e_+ > e_max`, `e_- < e_min`. For ideal powers these
    /// are `⌈r0 τ⌉ + 1` and `-1`.
    pub fn default_bounds(&self) -> (i64, i64) {
        let e_plus = match &self.tau {
            Some(t) => rational::ceil_i64(&(q(self.model.cartier_index()) * t)) + 1,
            None => rational::floor_i64(&self.e_max_est) + 1,
        };
        let e_minus = rational::ceil_i64(&self.e_min_est) - 1;
        (e_plus, e_minus)
    }

    pub fn scale(&self, r: u32) -> i64 {
        i64::from(r) * self.model.cartier_index()
    }

    /// Every lattice point of `r r0 P` with its weight, in lexicographic order.
    pub fn level_weights(&self, r: u32) -> Result<LevelWeights> {
        if r == 0 {
            return Err(Error::Precondition("levels start at r = 1".into()));
        }
        if let Some(w) = self.cache.lock().expect("cache lock").get(&r) {
            return Ok(w.clone());
        }
        let s = self.scale(r);
        let points = self.model.sections(s).points();
        let weights: Vec<(Vec<i64>, Q)> = match &self.kind {
            FiltrationKind::IdealPower(z) => {
                let orders = ideal_orders(&self.model, z, &points, s);
                points.into_iter().zip(orders.into_iter().map(q)).collect()
            }
            FiltrationKind::Explicit(table) => {
                if !table.is_tabulated(r) {
                    return Err(Error::LevelNotTabulated(r));
                }
                let (slope, shift, parsed) = self.explicit.as_ref().expect("explicit data");
                let rq = q(i64::from(r));
                let empty = BTreeMap::new();
                let level = parsed.get(&r).unwrap_or(&empty);
                points
                    .into_iter()
                    .map(|u| {
                        let w = level.get(&u).cloned().unwrap_or_else(|| slope * &rq);
                        (u, w + shift * &rq)
                    })
                    .collect()
            }
        };
        let weights = Arc::new(weights);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(r, weights.clone());
        Ok(weights)
    }

    /// `F^x V_r` as lattice points.
    pub fn level_set(&self, r: u32, x: &Q) -> Result<Vec<Vec<i64>>> {
        Ok(self
            .level_weights(r)?
            .iter()
            .filter(|(_, w)| w >= x)
            .map(|(u, _)| u.clone())
            .collect())
    }

    /// The values of `x` at which `F^x V_r` changes, ascending.
    pub fn jumps(&self, r: u32) -> Result<Vec<Q>> {
        let mut out: Vec<Q> = self
            .level_weights(r)?
            .iter()
            .map(|(_, w)| w.clone())
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// `max{m : a_c(u) ∈ I_c^m for every chart}` for every point.
fn ideal_orders(
    model: &ToricFanoModel,
    z: &MonomialSubscheme,
    points: &[Vec<i64>],
    scale: i64,
) -> Vec<i64> {
    let mut orders = vec![i64::MAX; points.len()];
    for c in z.support_charts() {
        let base = z.ideal().chart(c);
        let mut powers: Vec<ChartIdeal> = vec![ChartIdeal::unit(base.dim())];
        for (i, u) in points.iter().enumerate() {
            let a = model.chart_exponents(c, u, scale);
            let mut m = 0usize;
            loop {
                if powers.len() <= m + 1 {
                    let next = powers[m].product(base);
                    powers.push(next);
                }
                if !powers[m + 1].contains(&a) {
                    break;
                }
                m += 1;
            }
            orders[i] = orders[i].min(m as i64);
        }
    }
    orders
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toricmodel::by_name;

    #[test]
    fn ideal_power_levels() {
        let m = by_name("P1").unwrap();
        let z = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        let f = FiltrationSpec::ideal_power(&m, z).unwrap();
        assert_eq!(f.level_set(1, &q(1)).unwrap().len(), 2);
        assert_eq!(f.level_set(1, &q(-1)).unwrap().len(), 3);
        assert_eq!(f.e_max_est(), &q(2));
        assert_eq!(f.default_bounds(), (3, -1));

        let p2 = by_name("P2").unwrap();
        let f2 = FiltrationSpec::ideal_power(&p2, MonomialSubscheme::fixed_point(&p2, 0).unwrap())
            .unwrap();
        assert!(f2.level_set(1, &q(4)).unwrap().is_empty());
        assert_eq!(f2.level_set(1, &q(-3)).unwrap().len(), 10);
        assert_eq!(f2.default_bounds(), (4, -1));
    }

    #[test]
    fn explicit_tables() {
        let m = by_name("P1").unwrap();
        let f = FiltrationSpec::explicit(&m, ExplicitTable::trivial()).unwrap();
        assert_eq!(f.level_set(3, &q(0)).unwrap().len(), 7);
        assert!(f.level_set(3, &rational::frac(1, 2)).unwrap().is_empty());
        let mut levels = BTreeMap::new();
        levels.insert(1, vec![(vec![1], "2".to_string())]);
        let t = ExplicitTable {
            levels,
            default_slope: "0".into(),
            shift: "1".into(),
            uniform: false,
        };
        let g = FiltrationSpec::explicit(&m, t).unwrap();
        assert_eq!(g.jumps(1).unwrap(), vec![q(1), q(3)]);
        assert!(matches!(
            g.level_set(2, &q(0)),
            Err(Error::LevelNotTabulated(2))
        ));
        assert_eq!(g.e_min_est(), &q(1));
        assert_eq!(g.e_max_est(), &q(3));
    }

    #[test]
    fn description_round_trip() {
        let m = by_name("P2").unwrap();
        let d: FiltrationDescription = serde_json::from_str(
            r#"{"kind":"ideal_power","subscheme":{"kind":"fixed_point","chart":1}}"#,
        )
        .unwrap();
        assert_eq!(d.build(&m).unwrap().tau(), Some(&q(3)));
        let e: FiltrationDescription =
            serde_json::from_str(r#"{"kind":"explicit","uniform":true}"#).unwrap();
        assert_eq!(e.build(&m).unwrap().e_max_est(), &q(0));
    }
}
