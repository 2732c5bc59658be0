//! The invariants that test Ding semistability: `β(Z)`, Ding invariants of
//! ideal-sequence test configurations, and the `(n+1)^n` volume bound.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::FiltrationSpec;
use crate::lct::{lct_monomial, lct_on_product_with_line, IdealSequenceOnXxA1, MonomialSubscheme};
use crate::par;
use crate::rational::{self, q, Q};
use crate::toricmodel::ToricFanoModel;
use crate::volumes::{blowup_volume_profile, seshadri_constant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    ObstructsSemistability,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaReport {
    pub model: String,
    pub subscheme: String,
    #[serde(with = "rational::report")]
    pub lct_value: Q,
    /// `∫_0^τ vol(σ^*(-K_X) - xF) dx`.
    #[serde(with = "rational::report")]
    pub volume_integral: Q,
    #[serde(with = "rational::report")]
    pub anticanonical_volume: Q,
    #[serde(with = "rational::report")]
    pub beta: Q,
    pub verdict: Verdict,
    pub approximate: bool,
}

/// `β(Z) = lct(X; I_Z)·vol(-K_X) - ∫_0^∞ vol(σ^*(-K_X) - xF) dx`.
pub fn beta(model: &ToricFanoModel, z: &MonomialSubscheme) -> Result<BetaReport> {
    let lct_value = lct_monomial(model, z)?;
    let profile = blowup_volume_profile(model, z)?;
    let volume_integral = profile.integral();
    let v = model.anticanonical_volume();
    let beta = &lct_value * &v - &volume_integral;
    let verdict = if beta < Q::zero() {
        Verdict::ObstructsSemistability
    } else {
        Verdict::Consistent
    };
    Ok(BetaReport {
        model: model.name().to_string(),
        subscheme: z.name().to_string(),
        lct_value,
        volume_integral,
        anticanonical_volume: v,
        beta,
        verdict,
        approximate: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DingReport {
    pub r: u32,
    pub r0: i64,
    pub m: usize,
    /// `w(k)` for `k = 1..=k_max`.
    pub w: Vec<i128>,
    /// `(L̄^{n+1})`.
    #[serde(with = "rational::report")]
    pub l_power_top: Q,
    #[serde(with = "rational::report")]
    pub d: Q,
    #[serde(with = "rational::report")]
    pub lct_product: Q,
    #[serde(with = "rational::report")]
    pub ding: Q,
    /// The induced line bundle is assumed semiample over `A^1`; this is not
    /// checked.
    pub semiample_assumed: bool,
}

/// Ding invariant of the (semi) test configuration of `(X, -r r0 K_X)`
/// obtained by blowing up the ideal of `seq` on `X × A^1`.
pub fn ding_invariant(
    model: &ToricFanoModel,
    seq: &IdealSequenceOnXxA1,
    r: u32,
    k_max: u32,
) -> Result<DingReport> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let n = model.dim();
    let r0 = model.cartier_index();
    let rr0 = i64::from(r) * r0;
    let ks: Vec<u32> = (1..=k_max).collect();
    let w: Vec<i128> = par::map(&ks, |&k| {
        -i128::from(seq.power(k).quotient_dimension(model, i64::from(k) * rr0))
    });
    let top =
        crate::filtration::stable_difference(&w, n + 1).ok_or(Error::NoStabilization(k_max))?;
    let l_power_top = Q::from_integer(top.into());
    let denom =
        q(n as i64 + 1) * rational::pow(&q(rr0), n as u32 + 1) * model.anticanonical_volume();
    let d = Q::one() + &l_power_top / denom;
    let lct_product = lct_on_product_with_line(model, seq, &(Q::one() / q(rr0)))?;
    let ding = &lct_product - &d;
    Ok(DingReport {
        r,
        r0,
        m: seq.m(),
        w,
        l_power_top,
        d,
        lct_product,
        ding,
        semiample_assumed: true,
    })
}

/// The level-`r` ideal sequence `𝔦_r` of a filtration with bounds `e_±`.
pub fn filtration_sequence(
    f: &FiltrationSpec,
    r: u32,
    e_plus: i64,
    e_minus: i64,
) -> Result<IdealSequenceOnXxA1> {
    let ri = i64::from(r);
    let ideals = (ri * e_minus + 1..=ri * e_plus)
        .map(|j| crate::filtration::saturate(f, r, &q(j)).map(|s| s.ideal))
        .collect::<Result<Vec<_>>>()?;
    IdealSequenceOnXxA1::new(f.model(), ideals)
}

#[derive(Debug, Clone, Serialize)]
pub struct SeshadriCheck {
    pub chart: usize,
    #[serde(with = "rational::report")]
    pub epsilon: Q,
    pub equals_n_plus_1: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeBoundReport {
    pub model: String,
    #[serde(with = "rational::report")]
    pub bound: Q,
    #[serde(with = "rational::report")]
    pub volume: Q,
    pub satisfied: bool,
    pub equality: bool,
    /// Present when the bound is attained, every fixed point is smooth and
    /// `n >= 2`.
    pub seshadri_check: Option<Vec<SeshadriCheck>>,
}

/// `vol(-K_X) <= (n+1)^n`, with the Seshadri signature of the equality case.
pub fn verify_volume_bound(model: &ToricFanoModel) -> Result<VolumeBoundReport> {
    let n = model.dim();
    let bound = rational::pow(&q(n as i64 + 1), n as u32);
    let volume = model.anticanonical_volume();
    let equality = volume == bound;
    let all_smooth = model.charts().iter().all(|c| c.smooth);
    let seshadri_check = if equality && all_smooth && n >= 2 {
        let charts: Vec<usize> = (0..model.charts().len()).collect();
        let checks = par::try_map(&charts, |&c| {
            seshadri_constant(model, c).map(|eps| SeshadriCheck {
                chart: c,
                equals_n_plus_1: eps == q(n as i64 + 1),
                epsilon: eps,
            })
        })?;
        Some(checks)
    } else {
        None
    };
    Ok(VolumeBoundReport {
        model: model.name().to_string(),
        satisfied: volume <= bound,
        equality,
        bound,
        volume,
        seshadri_check,
    })
}

/// Smooth torus-fixed points, reduced boundary divisors meeting only smooth
/// charts, and the thickened points `I_p^2`.
pub fn standard_candidates(model: &ToricFanoModel) -> Result<Vec<MonomialSubscheme>> {
    let mut out = Vec::new();
    for c in model.smooth_charts() {
        out.push(MonomialSubscheme::fixed_point(model, c)?);
    }
    for ray in 0..model.rays().len() {
        if model
            .charts_containing_ray(ray)
            .iter()
            .all(|&c| model.charts()[c].smooth)
        {
            out.push(MonomialSubscheme::boundary_divisor(model, ray)?);
        }
    }
    for c in model.smooth_charts() {
        out.push(MonomialSubscheme::thick_point(model, c, 2)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub candidate: String,
    pub report: Option<BetaReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub model: String,
    pub entries: Vec<ScanEntry>,
    /// Some candidate has `β < 0`, so `X` is not Ding semistable.
    pub obstructed: bool,
    pub failures: usize,
}

pub fn semistability_scan(model: &ToricFanoModel, candidates: &[MonomialSubscheme]) -> ScanReport {
    let entries: Vec<ScanEntry> = par::map(candidates, |z| match beta(model, z) {
        Ok(rep) => ScanEntry {
            candidate: z.name().to_string(),
            report: Some(rep),
            error: None,
        },
        Err(e) => ScanEntry {
            candidate: z.name().to_string(),
            report: None,
            error: Some(e.to_string()),
        },
    });
    let obstructed = entries.iter().any(|e| {
        e.report
            .as_ref()
            .is_some_and(|r| r.verdict == Verdict::ObstructsSemistability)
    });
    let failures = entries.iter().filter(|e| e.error.is_some()).count();
    ScanReport {
        model: model.name().to_string(),
        entries,
        obstructed,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lct::IdealSheaf;
    use crate::rational::frac;
    use crate::toricmodel::{by_name, catalog};

    #[test]
    fn beta_of_points_on_projective_space() {
        for (name, n) in [("P1", 1i64), ("P2", 2), ("P3", 3)] {
            let m = by_name(name).unwrap();
            let z = MonomialSubscheme::fixed_point(&m, 0).unwrap();
            let rep = beta(&m, &z).unwrap();
            assert_eq!(rep.lct_value, q(n));
            assert_eq!(
                rep.volume_integral,
                q(n) * rational::pow(&q(n + 1), n as u32)
            );
            assert_eq!(rep.beta, Q::zero());
            assert_eq!(rep.verdict, Verdict::Consistent);
        }
    }

    #[test]
    fn beta_of_line_and_thick_point() {
        let m = by_name("P2").unwrap();
        let line = MonomialSubscheme::boundary_divisor(&m, 1).unwrap();
        assert_eq!(beta(&m, &line).unwrap().beta, Q::zero());
        let thick = MonomialSubscheme::thick_point(&m, 0, 2).unwrap();
        assert_eq!(beta(&m, &thick).unwrap().beta, Q::zero());
    }

    #[test]
    fn kahler_einstein_catalog_scan() {
        for name in ["P1", "P2", "P1xP1", "P1xP2", "dP6"] {
            let m = by_name(name).unwrap();
            let cands = standard_candidates(&m).unwrap();
            let rep = semistability_scan(&m, &cands);
            assert_eq!(rep.failures, 0, "{name}");
            assert!(!rep.obstructed, "{name}");
        }
        let m = by_name("P2").unwrap();
        assert!(semistability_scan(&m, &[]).entries.is_empty());
    }

    #[test]
    fn volume_bounds() {
        for m in catalog() {
            let rep = verify_volume_bound(&m).unwrap();
            assert!(rep.satisfied, "{}", m.name());
            let is_projective_space = matches!(m.name(), "P1" | "P2" | "P3");
            assert_eq!(rep.equality, is_projective_space, "{}", m.name());
        }
        let p3 = verify_volume_bound(&by_name("P3").unwrap()).unwrap();
        let checks = p3.seshadri_check.unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.equals_n_plus_1));
        let weighted = verify_volume_bound(&by_name("P(1,1,2)").unwrap()).unwrap();
        assert_eq!(weighted.volume, q(8));
        assert!(!weighted.equality);
    }

    #[test]
    fn ding_hand_cases() {
        let m = by_name("P1").unwrap();
        let p = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        let trivial = IdealSequenceOnXxA1::trivial(&m, 3).unwrap();
        let rep = ding_invariant(&m, &trivial, 1, 10).unwrap();
        assert_eq!(rep.ding, Q::zero());
        assert_eq!(rep.d, Q::one());

        let flat =
            IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone(), p.ideal().clone()]).unwrap();
        let rep = ding_invariant(&m, &flat, 1, 10).unwrap();
        let want: Vec<i128> = (1..=10).map(|k| -k * k - k).collect();
        assert_eq!(rep.w, want);
        assert_eq!(rep.d, frac(1, 2));
        assert_eq!(rep.ding, frac(1, 2));

        let normal_cone =
            IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone(), p.ideal().power(2)]).unwrap();
        let rep = ding_invariant(&m, &normal_cone, 1, 10).unwrap();
        assert_eq!(rep.l_power_top, q(-4));
        assert_eq!(rep.ding, Q::zero());
        // The same configuration seen at level 2 through the squared ideal.
        let rep2 = ding_invariant(&m, &normal_cone.power(2), 2, 10).unwrap();
        assert_eq!(rep2.ding, Q::zero());
    }

    #[test]
    fn ding_needs_enough_terms() {
        let m = by_name("P1").unwrap();
        let s = IdealSequenceOnXxA1::new(&m, vec![IdealSheaf::zero(&m)]).unwrap();
        assert!(matches!(
            ding_invariant(&m, &s, 1, 3),
            Err(Error::NoStabilization(3))
        ));
    }
}
