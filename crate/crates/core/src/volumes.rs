//! Volume functions `x -> vol(σ^*(-K_X) - xF)` on the blowup along a
//! monomial subscheme, Seshadri constants and pseudoeffective thresholds.
//!
//! For sections of `-kK_X`, membership in `I_Z^m` is asymptotically the
//! condition `a_c(u) ∈ m·Newt(I_c)` on every chart. Rescaling by `k`, the
//! profile is `n!·vol(P(x))` with `P(x)` cut out of `P` by the Newton facet
//! inequalities `<w, a_c(u)> >= x`. Lifting `x` to an extra coordinate gives
//! a polytope whose vertex heights are exactly the breakpoints.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactgeom::{
    AffineFunctional, Inequality, PiecewisePolynomial, Polynomial, RationalPolytope,
};
use crate::lct::{MonomialSubscheme, NewtonPolyhedron};
use crate::rational::{self, q, Q};
use crate::toricmodel::ToricFanoModel;

#[derive(Debug, Clone, Serialize)]
pub struct BlowupVolumeProfile {
    pub model: String,
    pub subscheme: String,
    #[serde(skip)]
    pub profile: PiecewisePolynomial,
    #[serde(with = "rational::as_str")]
    pub tau: Q,
    #[serde(with = "rational::opt_as_str")]
    pub epsilon: Option<Q>,
}

impl BlowupVolumeProfile {
    /// The profile extended by `0` past `tau`.
    pub fn eval(&self, x: &Q) -> Result<Q> {
        if *x >= self.tau {
            return Ok(Q::zero());
        }
        self.profile.eval(x)
    }

    /// `∫_0^τ vol(σ^*(-K_X) - xF) dx`.
    pub fn integral(&self) -> Q {
        self.profile
            .integrate(&Q::zero(), &self.tau)
            .expect("profile spans [0, tau]")
    }
}

/// A Newton-facet constraint `<w, a_c(u)> >= x` written as
/// `<normal, u> - den·x >= -den·sum(w)`, all integral.
#[derive(Debug, Clone)]
pub(crate) struct ExcessConstraint {
    pub normal: Vec<i64>,
    pub den: i64,
    pub shift: i64,
}

impl ExcessConstraint {
    /// The slice at height `x` as an inequality on `u`.
    pub fn at(&self, x: &Q) -> Inequality {
        Inequality::new(self.normal.clone(), q(self.den) * x - q(self.shift))
    }
}

pub(crate) fn excess_constraints(
    model: &ToricFanoModel,
    z: &MonomialSubscheme,
) -> Result<Vec<ExcessConstraint>> {
    let n = model.dim();
    let mut out = Vec::new();
    for c in z.support_charts() {
        let chart = &model.charts()[c];
        if !chart.smooth {
            return Err(Error::UnsupportedSubscheme(format!(
                "{} meets the non-smooth chart {c}",
                z.name()
            )));
        }
        let newt = NewtonPolyhedron::new(z.ideal().chart(c))?;
        for w in newt.facets() {
            let den = w.iter().fold(1i64, |acc, x| {
                acc.lcm(&x.denom().to_i64().expect("facet denominators are small"))
            });
            let wi: Vec<i64> = w
                .iter()
                .map(|x| rational::floor_i64(&(x * q(den))))
                .collect();
            let mut normal = vec![0i64; n];
            for (k, &r) in chart.rays.iter().enumerate() {
                for (d, nd) in normal.iter_mut().enumerate() {
                    *nd += wi[k] * model.rays()[r][d];
                }
            }
            out.push(ExcessConstraint {
                normal,
                den,
                shift: wi.iter().sum(),
            });
        }
    }
    Ok(out)
}

/// `P(x)` for a given `x >= 0`.
pub(crate) fn sliced_region(
    model: &ToricFanoModel,
    cons: &[ExcessConstraint],
    x: &Q,
) -> RationalPolytope {
    let extra: Vec<Inequality> = cons.iter().map(|h| h.at(x)).collect();
    model.polytope().intersect(&extra)
}

pub fn blowup_volume_profile(
    model: &ToricFanoModel,
    z: &MonomialSubscheme,
) -> Result<BlowupVolumeProfile> {
    let n = model.dim();
    let cons = excess_constraints(model, z)?;
    // Lifted polytope in (u, x).
    let mut lifted: Vec<Inequality> = model
        .polytope()
        .inequalities()
        .iter()
        .map(|h| {
            let mut normal = h.normal.clone();
            normal.push(0);
            Inequality::new(normal, h.offset.clone())
        })
        .collect();
    let mut x_ge_0 = vec![0; n + 1];
    x_ge_0[n] = 1;
    lifted.push(Inequality::new(x_ge_0, Q::zero()));
    for h in &cons {
        let mut normal = h.normal.clone();
        normal.push(-h.den);
        lifted.push(Inequality::new(normal, q(-h.shift)));
    }
    let lifted = RationalPolytope::from_bounded_inequalities(n + 1, lifted);
    let mut breakpoints: Vec<Q> = lifted.vertices().iter().map(|v| v[n].clone()).collect();
    breakpoints.sort();
    breakpoints.dedup();
    let tau = breakpoints.last().cloned().unwrap_or_else(Q::zero);
    if breakpoints.len() < 2 || tau <= Q::zero() {
        return Err(Error::EmptyOrFull);
    }
    let profile = PiecewisePolynomial::interpolate(breakpoints, n, |x| {
        sliced_region(model, &cons, x).normalized_volume()
    })?;
    Ok(BlowupVolumeProfile {
        model: model.name().to_string(),
        subscheme: z.name().to_string(),
        profile,
        tau,
        epsilon: None,
    })
}

/// The profile at the torus-fixed point of chart `c` through the vertex
/// functional `sum_i (<u, rho_i> + 1)`.
pub fn fixed_point_profile(model: &ToricFanoModel, c: usize) -> Result<PiecewisePolynomial> {
    let chart = model.chart(c)?;
    if !chart.smooth {
        return Err(Error::NotSmoothPoint(c));
    }
    let n = model.dim();
    let mut coeffs = vec![0i64; n];
    for &r in &chart.rays {
        for (d, cd) in coeffs.iter_mut().enumerate() {
            *cd += model.rays()[r][d];
        }
    }
    let lam = AffineFunctional::new(coeffs, q(chart.rays.len() as i64));
    crate::exactgeom::sliced_volume_function(model.polytope(), &lam)
}

/// `ε_p`: the right end of the initial run of pieces equal to `V - x^n`.
pub fn seshadri_constant(model: &ToricFanoModel, c: usize) -> Result<Q> {
    let n = model.dim();
    let chart = model.chart(c)?;
    if !chart.smooth {
        return Err(Error::NotSmoothPoint(c));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let z = MonomialSubscheme::fixed_point(model, c)?;
    let prof = blowup_volume_profile(model, &z)?;
    Ok(initial_agreement(
        &prof.profile,
        model.anticanonical_volume(),
        n,
    ))
}

fn initial_agreement(profile: &PiecewisePolynomial, v: Q, n: usize) -> Q {
    let target = Polynomial::constant_minus_power(v, n);
    let bps = profile.breakpoints();
    let mut eps = bps[0].clone();
    for (i, p) in profile.pieces().iter().enumerate() {
        if *p != target {
            break;
        }
        eps = bps[i + 1].clone();
    }
    eps
}

/// Profile together with `ε` when `Z` is a smooth fixed point and `n >= 2`.
pub fn blowup_volume_profile_with_seshadri(
    model: &ToricFanoModel,
    z: &MonomialSubscheme,
) -> Result<BlowupVolumeProfile> {
    let mut prof = blowup_volume_profile(model, z)?;
    let n = model.dim();
    let support = z.support_charts();
    let is_point =
        support.len() == 1 && *z.ideal().chart(support[0]) == crate::lct::ChartIdeal::maximal(n);
    if is_point && n >= 2 {
        prof.epsilon = Some(initial_agreement(
            &prof.profile,
            model.anticanonical_volume(),
            n,
        ));
    }
    Ok(prof)
}

/// `τ_Z = sup{x : vol(σ^*(-K_X) - xF) > 0}`.
pub fn pseudoeffective_threshold(model: &ToricFanoModel, z: &MonomialSubscheme) -> Result<Q> {
    Ok(blowup_volume_profile(model, z)?.tau)
}

/// `(n+1)^n - x^n` style check used by callers: `V - x^n` at `x`.
pub fn point_lower_bound(v: &Q, n: usize, x: &Q) -> Q {
    v - rational::pow(x, n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::toricmodel::by_name;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn projective_spaces() {
        for (name, n) in [("P1", 1usize), ("P2", 2), ("P3", 3)] {
            let m = by_name(name).unwrap();
            let v = rational::pow(&q(n as i64 + 1), n as u32);
            for c in 0..m.charts().len() {
                let z = MonomialSubscheme::fixed_point(&m, c).unwrap();
                let p = blowup_volume_profile(&m, &z).unwrap();
                assert_eq!(p.profile.breakpoints(), &[q(0), q(n as i64 + 1)]);
                assert_eq!(
                    p.profile.pieces(),
                    &[Polynomial::constant_minus_power(v.clone(), n)]
                );
                assert_eq!(p.tau, q(n as i64 + 1));
                if n >= 2 {
                    assert_eq!(seshadri_constant(&m, c).unwrap(), q(n as i64 + 1));
                }
            }
        }
        let p1 = by_name("P1").unwrap();
        assert!(matches!(
            seshadri_constant(&p1, 0),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn quadric_point() {
        let m = by_name("P1xP1").unwrap();
        let z = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        let p = blowup_volume_profile(&m, &z).unwrap();
        assert_eq!(p.profile.breakpoints(), &[q(0), q(2), q(4)]);
        assert_eq!(p.profile.pieces(), &[poly(&[8, 0, -1]), poly(&[16, -8, 1])]);
        assert_eq!(seshadri_constant(&m, 0).unwrap(), q(2));
        assert_eq!(p.tau, q(4));
    }

    #[test]
    fn fixed_point_routes_agree() {
        for m in crate::toricmodel::catalog() {
            for c in m.smooth_charts() {
                let z = MonomialSubscheme::fixed_point(&m, c).unwrap();
                let a = blowup_volume_profile(&m, &z).unwrap().profile;
                let b = fixed_point_profile(&m, c).unwrap();
                assert_eq!(a, b, "{} chart {c}", m.name());
            }
        }
    }

    #[test]
    fn line_on_plane_and_thick_point() {
        let m = by_name("P2").unwrap();
        let d = MonomialSubscheme::boundary_divisor(&m, 0).unwrap();
        let p = blowup_volume_profile(&m, &d).unwrap();
        assert_eq!(p.tau, q(3));
        assert_eq!(p.profile.pieces(), &[poly(&[9, -6, 1])]);
        assert_eq!(p.integral(), q(9));
        let t = MonomialSubscheme::thick_point(&m, 0, 2).unwrap();
        let p2 = blowup_volume_profile(&m, &t).unwrap();
        assert_eq!(p2.tau, frac(3, 2));
        assert_eq!(p2.profile.pieces(), &[poly(&[9, 0, -4])]);
    }

    #[test]
    fn singular_support_is_unsupported() {
        let m = by_name("P(1,1,2)").unwrap();
        let sing = m.charts().iter().position(|c| !c.smooth).unwrap();
        let z = MonomialSubscheme::fixed_point(&m, sing).unwrap();
        assert!(matches!(
            blowup_volume_profile(&m, &z),
            Err(Error::UnsupportedSubscheme(_))
        ));
        assert!(matches!(
            seshadri_constant(&m, sing),
            Err(Error::NotSmoothPoint(_))
        ));
    }

    #[test]
    fn lower_bound_near_point() {
        for m in crate::toricmodel::catalog() {
            let n = m.dim();
            let v = m.anticanonical_volume();
            for c in m.smooth_charts() {
                let z = MonomialSubscheme::fixed_point(&m, c).unwrap();
                let p = blowup_volume_profile(&m, &z).unwrap();
                for i in 0..50 {
                    let x = p.tau.clone() * frac(i, 50);
                    if rational::pow(&x, n as u32) > v {
                        break;
                    }
                    assert!(p.eval(&x).unwrap() >= point_lower_bound(&v, n, &x));
                }
            }
        }
    }
}
