//! The weight series of the test configurations attached to a filtration.
//!
//! For integer `e_- < e_min`, `e_+ > e_max` and `e = e_+ - e_-`, the level-`r`
//! configuration is cut out by
//! `𝔦_r = I_(r,r e_+) + I_(r,r e_+ - 1) t + … + I_(r,r e_- + 1) t^{re-1} + (t^{re})`,
//! and `𝔦_r^k` has coefficient ideals `J_(k;r,j) = Σ_{j_1+…+j_k=j} Π I_(r,j_i)`.
//! Then `v_r(k) = Σ_{j=kre_-+1}^{kre_+} h^0(L^{kr} · J_(k;r,j))` and the
//! quotient dimension of `𝔦_r^k` equals `kre·h^0(L^{kr}) - v_r(k)`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::saturation::{find_r1_capped, saturate, R_CAP};
use super::{FiltrationKind, FiltrationSpec};
use crate::error::{Error, Result};
use crate::lct::{IdealSequenceOnXxA1, IdealSheaf};
use crate::par;
use crate::rational::{self, q, Q};
use crate::volumes::blowup_volume_profile;

#[derive(Debug, Clone)]
pub struct WeightParams {
    pub k_max: u32,
    pub e_plus: i64,
    pub e_minus: i64,
    /// Bound on the generator count of any chart ideal `J_(k;r,j)`.
    pub cap: usize,
    /// Search bound for `r1`.
    pub r_cap: u32,
}

impl WeightParams {
    pub fn for_filtration(f: &FiltrationSpec, k_max: u32) -> Self {
        let (e_plus, e_minus) = f.default_bounds();
        Self {
            k_max,
            e_plus,
            e_minus,
            cap: 50_000,
            r_cap: R_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightRecord {
    pub k: u32,
    /// `h^0(X, L^{kr})`.
    pub h0: u64,
    pub v: i128,
    /// `-kre·h^0 + v`.
    pub w: i128,
    /// Minus the quotient dimension of `𝔦_r^k`, counted point by point.
    pub w_direct: i128,
    /// `(j, h^0(L^{kr} · J_(k;r,j)))` for `j` in `(kre_-, kre_+]`.
    pub dims: Vec<(i64, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightSeries {
    pub r: u32,
    pub e_plus: i64,
    pub e_minus: i64,
    pub records: Vec<WeightRecord>,
}

impl WeightSeries {
    pub fn identity_holds(&self) -> bool {
        self.records.iter().all(|rec| rec.w == rec.w_direct)
    }

    pub fn v(&self) -> Vec<i128> {
        self.records.iter().map(|r| r.v).collect()
    }

    pub fn w(&self) -> Vec<i128> {
        self.records.iter().map(|r| r.w).collect()
    }

    /// `A_r = lim v_r(k)·n!/(k r r0)^{n+1} = Δ^{n+1} v / ((n+1)(r r0)^{n+1})`.
    pub fn a_r(&self, n: usize, r0: i64) -> Result<Q> {
        let k_max = self.records.len() as u32;
        let top = stable_difference(&self.v(), n + 1).ok_or(Error::NoStabilization(k_max))?;
        let rr0 = q(i64::from(self.r) * r0);
        Ok(q_from_i128(top) / (q(n as i64 + 1) * rational::pow(&rr0, n as u32 + 1)))
    }
}

fn q_from_i128(x: i128) -> Q {
    Q::from_integer(x.into())
}

/// `Δ^d` of the tail once `Δ^{d+1}` has vanished at three consecutive
/// indices at the end of the sequence.
pub fn stable_difference(seq: &[i128], d: usize) -> Option<i128> {
    let mut diffs = seq.to_vec();
    for _ in 0..d {
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let next: Vec<i128> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    if next.len() < 3 || next[next.len() - 3..].iter().any(|&x| x != 0) {
        return None;
    }
    diffs.last().copied()
}

fn check_cap(ideal: &IdealSheaf, cap: usize) -> Result<()> {
    if ideal.charts().iter().any(|c| c.generators().len() > cap) {
        return Err(Error::CombinatorialBlowup(cap));
    }
    Ok(())
}

pub fn compute_weight_series(f: &FiltrationSpec, r: u32, p: &WeightParams) -> Result<WeightSeries> {
    let model = f.model();
    if p.e_plus <= p.e_minus {
        return Err(Error::Precondition("need e_+ > e_-".into()));
    }
    let r1 = find_r1_capped(f, &q(p.e_minus), p.r_cap)?;
    if r < r1 {
        return Err(Error::Precondition(format!("r = {r} is below r1 = {r1}")));
    }
    let ri = i64::from(r);
    let lo = ri * p.e_minus;
    let hi = ri * p.e_plus;
    let e = p.e_plus - p.e_minus;
    let js: Vec<i64> = (lo..=hi).collect();
    let base: Vec<IdealSheaf> = par::try_map(&js, |&j| saturate(f, r, &q(j)).map(|s| s.ideal))?;

    // 𝔦_r as an ideal sequence: I_j = I_(r, r e_- + j) for 1 <= j <= re.
    let seq = IdealSequenceOnXxA1::new(model, base[1..].to_vec())?;

    let mut records = Vec::with_capacity(p.k_max as usize);
    // current[j - k lo] = J_(k;r,j) for j in [k lo, k hi].
    let mut current = base.clone();
    for k in 1..=p.k_max {
        let ki = i64::from(k);
        if k > 1 {
            let prev = current;
            let prev_lo = (ki - 1) * lo;
            let prev_hi = (ki - 1) * hi;
            let targets: Vec<i64> = (ki * lo..=ki * hi).collect();
            current = par::try_map(&targets, |&j| {
                let mut acc: Option<IdealSheaf> = None;
                for j1 in lo..=hi {
                    let rest = j - j1;
                    if rest < prev_lo || rest > prev_hi {
                        continue;
                    }
                    let a = &base[(j1 - lo) as usize];
                    let b = &prev[(rest - prev_lo) as usize];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = a.product(b);
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s.sum(&term),
                    });
                }
                let ideal = acc.unwrap_or_else(|| IdealSheaf::zero(model));
                check_cap(&ideal, p.cap).map(|()| ideal)
            })?;
        }
        let scale = ki * f.scale(r);
        let region = model.sections(scale);
        let h0 = region.count();
        let window: Vec<i64> = (ki * lo + 1..=ki * hi).collect();
        let dims: Vec<(i64, u64)> = par::map(&window, |&j| {
            let ideal = &current[(j - ki * lo) as usize];
            let count = if ideal.is_zero() {
                0
            } else if ideal.is_unit() {
                h0
            } else {
                region.count_where(|u| ideal.contains_section(model, u, scale))
            };
            (j, count)
        });
        let v: i128 = dims.iter().map(|&(_, c)| i128::from(c)).sum();
        let w = -i128::from(ki * ri * e) * i128::from(h0) + v;
        let w_direct = -i128::from(seq.power(k).quotient_dimension(model, scale));
        records.push(WeightRecord {
            k,
            h0,
            v,
            w,
            w_direct,
            dims,
        });
    }
    Ok(WeightSeries {
        r,
        e_plus: p.e_plus,
        e_minus: p.e_minus,
        records,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationVolume {
    #[serde(with = "rational::as_str")]
    pub value: Q,
    pub approximate: bool,
}

/// `vol(F V^x) = lim dim F^{rx} V_r · n!/r^n`.
///
/// Exact for ideal powers, where it equals `r0^n·vol(σ^*(-K_X) - (x/r0)F)`.
/// Explicit tables are fitted from levels `1..=r_max` and flagged.
pub fn filtration_volume(f: &FiltrationSpec, x: &Q, r_max: u32) -> Result<FiltrationVolume> {
    let model = f.model();
    let n = model.dim();
    let r0 = q(model.cartier_index());
    let r0n = rational::pow(&r0, n as u32);
    match f.kind() {
        FiltrationKind::IdealPower(z) => {
            let value = if *x < Q::zero() {
                r0n * model.anticanonical_volume()
            } else {
                let prof = blowup_volume_profile(model, z)?;
                r0n * prof.eval(&(x / &r0))?
            };
            Ok(FiltrationVolume {
                value,
                approximate: false,
            })
        }
        FiltrationKind::Explicit(_) => {
            let counts: Vec<i128> = (1..=r_max)
                .map(|r| Ok(f.level_set(r, &(x * q(i64::from(r))))?.len() as i128))
                .collect::<Result<_>>()?;
            let top = stable_difference(&counts, n).ok_or(Error::NoStabilization(r_max))?;
            Ok(FiltrationVolume {
                value: q_from_i128(top),
                approximate: true,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSample {
    pub r: u32,
    #[serde(with = "rational::as_str")]
    pub value: Q,
}

#[derive(Debug, Clone, Serialize)]
pub struct DInftyReport {
    pub e_plus: i64,
    pub e_minus: i64,
    pub r1: u32,
    pub a_samples: Vec<LevelSample>,
    pub d_samples: Vec<LevelSample>,
    /// `∫_{e_-}^{e_+} vol(F̄ V^x) dx`.
    #[serde(with = "rational::opt_as_str")]
    pub integral: Option<Q>,
    #[serde(with = "rational::as_str")]
    pub a_limit: Q,
    pub a_limit_exact: bool,
    #[serde(with = "rational::as_str")]
    pub d_infty: Q,
    /// Per level: lower Riemann sum `<= r0^{n+1} A_r <= integral`.
    pub sandwich: Vec<(u32, bool)>,
}

pub fn compute_d_infty(
    f: &FiltrationSpec,
    params: &WeightParams,
    r_list: &[u32],
) -> Result<DInftyReport> {
    let (e_plus, e_minus) = (params.e_plus, params.e_minus);
    let model = f.model();
    let n = model.dim();
    let r0i = model.cartier_index();
    let r0 = q(r0i);
    let v = model.anticanonical_volume();
    if q(e_plus) <= *f.e_max_est() {
        return Err(Error::Precondition(format!(
            "e_+ = {e_plus} must exceed e_max = {}",
            rational::to_string(f.e_max_est())
        )));
    }
    if q(e_minus) >= *f.e_min_est() {
        return Err(Error::Precondition(format!(
            "e_- = {e_minus} must lie below e_min = {}",
            rational::to_string(f.e_min_est())
        )));
    }
    if r_list.is_empty() {
        return Err(Error::InvalidInput("empty r list".into()));
    }
    let r1 = find_r1_capped(f, &q(e_minus), params.r_cap)?;
    let e = q(e_plus - e_minus);
    let base_d = Q::one() - &e / &r0;
    let r0n1 = rational::pow(&r0, n as u32 + 1);

    let integral = match f.kind() {
        FiltrationKind::IdealPower(z) => {
            let prof = blowup_volume_profile(model, z)?;
            let r0n = rational::pow(&r0, n as u32);
            Some(r0n * &v * q(-e_minus) + &r0n1 * prof.integral())
        }
        FiltrationKind::Explicit(_) => None,
    };

    let mut a_samples = Vec::new();
    let mut d_samples = Vec::new();
    let mut sandwich = Vec::new();
    for &r in r_list {
        let series = compute_weight_series(f, r, params)?;
        let a = series.a_r(n, r0i)?;
        d_samples.push(LevelSample {
            r,
            value: &base_d + &a / &v,
        });
        if let Some(total) = &integral {
            let rq = q(i64::from(r));
            let mut lower = Q::zero();
            for j in i64::from(r) * e_minus + 1..=i64::from(r) * e_plus {
                lower += filtration_volume(f, &(q(j) / &rq), 1)?.value;
            }
            lower /= rq;
            let scaled = &r0n1 * &a;
            sandwich.push((r, lower <= scaled && scaled <= *total));
        }
        a_samples.push(LevelSample { r, value: a });
    }
    let (a_limit, a_limit_exact) = match &integral {
        Some(total) => (total / &r0n1, true),
        None => (a_samples.last().expect("non-empty").value.clone(), false),
    };
    let d_infty = &base_d + &a_limit / &v;
    Ok(DInftyReport {
        e_plus,
        e_minus,
        r1,
        a_samples,
        d_samples,
        integral,
        a_limit,
        a_limit_exact,
        d_infty,
        sandwich,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::ExplicitTable;
    use crate::lct::MonomialSubscheme;
    use crate::toricmodel::by_name;

    fn point_filtration(name: &str) -> FiltrationSpec {
        let m = by_name(name).unwrap();
        let z = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        FiltrationSpec::ideal_power(&m, z).unwrap()
    }

    #[test]
    fn line_point_series() {
        let f = point_filtration("P1");
        for r in [1u32, 2] {
            let p = WeightParams::for_filtration(&f, 8);
            let s = compute_weight_series(&f, r, &p).unwrap();
            assert!(s.identity_holds());
            let rr = i128::from(r);
            for rec in &s.records {
                let k = i128::from(rec.k);
                assert_eq!(rec.v, 4 * k * k * rr * rr + 2 * k * rr);
            }
            assert_eq!(s.a_r(1, 1).unwrap(), q(4));
        }
    }

    #[test]
    fn first_level_matches_saturation() {
        let f = point_filtration("P2");
        let p = WeightParams::for_filtration(&f, 1);
        let s = compute_weight_series(&f, 1, &p).unwrap();
        let direct: u64 = (p.e_minus + 1..=p.e_plus)
            .map(|j| saturate(&f, 1, &q(j)).unwrap().saturated.len() as u64)
            .sum();
        assert_eq!(s.records[0].v, i128::from(direct));
    }

    #[test]
    fn trivial_filtration() {
        let m = by_name("P1xP1").unwrap();
        let f = FiltrationSpec::explicit(&m, ExplicitTable::trivial()).unwrap();
        let p = WeightParams {
            k_max: 7,
            e_plus: 1,
            e_minus: -1,
            cap: 1000,
            r_cap: 4,
        };
        let s = compute_weight_series(&f, 1, &p).unwrap();
        for rec in &s.records {
            assert_eq!(rec.v, i128::from(rec.k) * i128::from(rec.h0));
            assert_eq!(rec.w, rec.w_direct);
        }
        let rep = compute_d_infty(&f, &p, &[1, 2]).unwrap();
        assert!(!rep.a_limit_exact);
        assert_eq!(rep.d_infty, Q::zero());
        let vol = filtration_volume(&f, &rational::frac(-1, 2), 6).unwrap();
        assert_eq!(vol.value, q(8));
        assert!(vol.approximate);
    }

    #[test]
    fn plane_point_d_infty() {
        let f = point_filtration("P2");
        let p = WeightParams::for_filtration(&f, 10);
        assert_eq!((p.e_plus, p.e_minus), (4, -1));
        let rep = compute_d_infty(&f, &p, &[1]).unwrap();
        assert_eq!(rep.integral, Some(q(27)));
        assert_eq!(rep.d_infty, q(-1));
        assert!(rep.sandwich.iter().all(|(_, ok)| *ok));
        assert_eq!(filtration_volume(&f, &q(1), 1).unwrap().value, q(8));
        let p1 = point_filtration("P1");
        assert_eq!(filtration_volume(&p1, &q(1), 1).unwrap().value, q(1));
        assert_eq!(filtration_volume(&p1, &q(-3), 1).unwrap().value, q(2));
    }

    #[test]
    fn stabilization_needs_enough_terms() {
        assert_eq!(stable_difference(&[1, 4, 9, 16, 25, 36], 2), Some(2));
        assert_eq!(stable_difference(&[1, 4, 9, 16], 2), None);
        let f = point_filtration("P1");
        let p = WeightParams::for_filtration(&f, 2);
        let s = compute_weight_series(&f, 1, &p).unwrap();
        assert!(matches!(s.a_r(1, 1), Err(Error::NoStabilization(2))));
    }
}
