use serde::Serialize;

use super::FiltrationSpec;
use crate::error::{Error, Result};
use crate::lct::{ChartIdeal, IdealSheaf};
use crate::rational::{self, q, Q};

/// Search bound for `r1`.
pub const R_CAP: u32 = 64;

/// The base ideal `I_(r,x)` of `F^x V_r` and the saturation `F̄^x V_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Saturation {
    pub r: u32,
    pub x: Q,
    pub ideal: IdealSheaf,
    pub filtered: Vec<Vec<i64>>,
    pub saturated: Vec<Vec<i64>>,
}

/// Image of `F^x V_r ⊗ L^{-r} -> O_X`, chart by chart, and the sections of
/// `L^r` it cuts out. An empty `F^x V_r` gives the zero ideal.
pub fn saturate(f: &FiltrationSpec, r: u32, x: &Q) -> Result<Saturation> {
    let filtered = f.level_set(r, x)?;
    let ideal = base_ideal(f, r, &filtered);
    let saturated = sections_in(f, r, &ideal);
    Ok(Saturation {
        r,
        x: x.clone(),
        ideal,
        filtered,
        saturated,
    })
}

pub(crate) fn base_ideal(f: &FiltrationSpec, r: u32, points: &[Vec<i64>]) -> IdealSheaf {
    let model = f.model();
    let s = f.scale(r);
    let charts = model
        .charts()
        .iter()
        .enumerate()
        .map(|(c, ch)| {
            let gens = points
                .iter()
                .map(|u| model.chart_exponents(c, u, s))
                .collect();
            ChartIdeal::new(ch.rays.len(), gens)
                .expect("points of r r0 P have non-negative exponents")
        })
        .collect();
    IdealSheaf::new(model, charts).expect("one ideal per chart")
}

pub(crate) fn sections_in(f: &FiltrationSpec, r: u32, ideal: &IdealSheaf) -> Vec<Vec<i64>> {
    let model = f.model();
    let s = f.scale(r);
    model
        .sections(s)
        .filter(|u| ideal.contains_section(model, u, s))
}

/// Smallest `r1 <= R_CAP` such that `F^{r e_-} V_r = V_r` and
/// `I_(r, r e_-) = O_X` for every `r ∈ [r1, 2 r1]`.
pub fn find_r1(f: &FiltrationSpec, e_minus: &Q) -> Result<u32> {
    find_r1_capped(f, e_minus, R_CAP)
}

pub fn find_r1_capped(f: &FiltrationSpec, e_minus: &Q, cap: u32) -> Result<u32> {
    if e_minus >= f.e_min_est() {
        return Err(Error::Precondition(format!(
            "e_- = {} must lie below e_min = {}",
            rational::to_string(e_minus),
            rational::to_string(f.e_min_est())
        )));
    }
    'search: for r1 in 1..=cap {
        for r in r1..=2 * r1 {
            let x = e_minus * q(i64::from(r));
            let sat = saturate(f, r, &x)?;
            let full = f.model().sections(f.scale(r)).count() as usize;
            if sat.filtered.len() != full || !sat.ideal.is_unit() {
                continue 'search;
            }
        }
        return Ok(r1);
    }
    Err(Error::R1NotFound(cap))
}

/// Saturations at a list of `(r, x)` pairs together with the structural laws
/// they must satisfy.
#[derive(Debug, Clone)]
pub struct SaturatedIdealTable {
    pub entries: Vec<Saturation>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LawReport {
    pub checked_pairs: usize,
    /// `I_(r,x) · I_(r',x') ⊆ I_(r+r',x+x')`.
    pub multiplicative: bool,
    /// `x <= x'` implies `I_(r,x') ⊆ I_(r,x)`.
    pub monotone: bool,
    /// `I_(r,x) = 0` for `x > r e_max`.
    pub vanishing_above: bool,
    /// `I_(r,x) = O_X` for `x <= r e_min`, `r >= r1`.
    pub trivial_below: bool,
    /// `F^x V_r ⊆ F̄^x V_r`.
    pub contained_in_saturation: bool,
    /// Saturating `F̄` again changes neither the space nor the ideal.
    pub idempotent: bool,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        self.multiplicative
            && self.monotone
            && self.vanishing_above
            && self.trivial_below
            && self.contained_in_saturation
            && self.idempotent
    }
}

impl SaturatedIdealTable {
    pub fn build(f: &FiltrationSpec, pairs: &[(u32, Q)]) -> Result<Self> {
        let entries = crate::par::try_map(pairs, |(r, x)| saturate(f, *r, x))?;
        Ok(Self { entries })
    }

    pub fn check_laws(&self, f: &FiltrationSpec, r1: u32) -> Result<LawReport> {
        let mut rep = LawReport {
            checked_pairs: self.entries.len(),
            ..LawReport::default()
        };
        let mut violations = Vec::new();
        let label = |s: &Saturation| format!("(r={}, x={})", s.r, rational::to_string(&s.x));

        for a in &self.entries {
            for b in &self.entries {
                let target = saturate(f, a.r + b.r, &(&a.x + &b.x))?;
                if !target.ideal.contains_ideal(&a.ideal.product(&b.ideal)) {
                    violations.push(format!(
                        "multiplicativity fails for {} and {}",
                        label(a),
                        label(b)
                    ));
                }
                if a.r == b.r && a.x <= b.x && !a.ideal.contains_ideal(&b.ideal) {
                    violations.push(format!(
                        "monotonicity fails for {} and {}",
                        label(a),
                        label(b)
                    ));
                }
            }
        }
        rep.multiplicative = !violations.iter().any(|v| v.starts_with("multiplicativity"));
        rep.monotone = !violations.iter().any(|v| v.starts_with("monotonicity"));

        let mut vanishing = true;
        let mut trivial = true;
        let mut contained = true;
        let mut idempotent = true;
        for s in &self.entries {
            let rq = q(i64::from(s.r));
            if s.x > f.e_max_est() * &rq && !s.ideal.is_zero() {
                vanishing = false;
                violations.push(format!("nonzero ideal above r e_max at {}", label(s)));
            }
            if s.r >= r1 && s.x <= f.e_min_est() * &rq && !s.ideal.is_unit() {
                trivial = false;
                violations.push(format!("proper ideal below r e_min at {}", label(s)));
            }
            if !s
                .filtered
                .iter()
                .all(|u| s.saturated.binary_search(u).is_ok())
            {
                contained = false;
                violations.push(format!("F not inside its saturation at {}", label(s)));
            }
            let again = base_ideal(f, s.r, &s.saturated);
            if again != s.ideal || sections_in(f, s.r, &again) != s.saturated {
                idempotent = false;
                violations.push(format!("saturation not idempotent at {}", label(s)));
            }
        }
        rep.vanishing_above = vanishing;
        rep.trivial_below = trivial;
        rep.contained_in_saturation = contained;
        rep.idempotent = idempotent;
        rep.violations = violations;
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::ExplicitTable;
    use crate::lct::MonomialSubscheme;
    use crate::toricmodel::by_name;

    #[test]
    fn ideal_power_is_saturated() {
        let m = by_name("P1xP1").unwrap();
        let z = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        let f = FiltrationSpec::ideal_power(&m, z.clone()).unwrap();
        for r in 1..3u32 {
            for x in -1..6 {
                let s = saturate(&f, r, &q(x)).unwrap();
                assert_eq!(s.filtered, s.saturated, "r={r} x={x}");
                if x >= 0 {
                    let want = z.ideal().power(x as u32);
                    assert!(want.contains_ideal(&s.ideal) || s.ideal.is_zero());
                }
            }
        }
        let full = saturate(&f, 1, &q(-1)).unwrap();
        assert!(full.ideal.is_unit());
        let empty = saturate(&f, 1, &q(9)).unwrap();
        assert!(empty.ideal.is_zero());
        assert!(empty.saturated.is_empty());
    }

    #[test]
    fn r1_search() {
        let m = by_name("P2").unwrap();
        let f = FiltrationSpec::ideal_power(&m, MonomialSubscheme::fixed_point(&m, 0).unwrap())
            .unwrap();
        assert_eq!(find_r1(&f, &q(-1)).unwrap(), 1);
        assert!(matches!(find_r1(&f, &q(0)), Err(Error::Precondition(_))));
        let t = FiltrationSpec::explicit(&m, ExplicitTable::trivial()).unwrap();
        assert_eq!(find_r1(&t, &q(-1)).unwrap(), 1);
    }

    #[test]
    fn laws_on_grid() {
        let m = by_name("P2").unwrap();
        let f = FiltrationSpec::ideal_power(&m, MonomialSubscheme::fixed_point(&m, 2).unwrap())
            .unwrap();
        let pairs: Vec<(u32, Q)> = (1..3u32)
            .flat_map(|r| (-1..5).map(move |x| (r, rational::frac(x, 2))))
            .collect();
        let table = SaturatedIdealTable::build(&f, &pairs).unwrap();
        let rep = table.check_laws(&f, 1).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.violations);
    }
}
