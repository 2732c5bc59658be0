//! Brute-force reference computations. None of these go through the
//! polytope, lattice-region, Newton-polyhedron or ideal-arithmetic code they
//! are used to check. Lattice counts come from scanning bounding boxes, and
//! ideal powers are expanded as raw exponent sets.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lct::{IdealSequenceOnXxA1, MonomialSubscheme};
use crate::rational::{self, q, Q};
use crate::toricmodel::ToricFanoModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleMethod {
    LatticeCount,
    ValuationEnum,
    HandFormula,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub quantity: String,
    pub method: OracleMethod,
    #[serde(with = "rational::report")]
    pub value: Q,
    pub parameters: Vec<(String, String)>,
}

/// Enumeration cap for the raw power expansions.
pub const ORACLE_SIZE_CAP: usize = 2_000_000;

/// Lattice points `u` with `<u, rho> >= -scale` for every ray, by scanning
/// the box `[-scale·B, scale·B]^n` where `B` bounds the vertex coordinates.
fn box_points(model: &ToricFanoModel, scale: i64) -> Result<Vec<Vec<i64>>> {
    let n = model.dim();
    let bound = model
        .polytope()
        .vertices()
        .iter()
        .flatten()
        .map(|x| rational::ceil_i64(&rational::abs(x)))
        .max()
        .unwrap_or(1)
        * scale;
    let side = (2 * bound + 1) as usize;
    if side
        .checked_pow(n as u32)
        .is_none_or(|s| s > ORACLE_SIZE_CAP)
    {
        return Err(Error::SizeCap(ORACLE_SIZE_CAP));
    }
    let mut out = Vec::new();
    let mut u = vec![-bound; n];
    loop {
        if model
            .rays()
            .iter()
            .all(|r| r.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() >= -scale)
        {
            out.push(u.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            if u[i] < bound {
                u[i] += 1;
                break;
            }
            u[i] = -bound;
            i += 1;
        }
    }
}

fn ray_exponents(model: &ToricFanoModel, chart: usize, u: &[i64], scale: i64) -> Vec<i64> {
    model.charts()[chart]
        .rays
        .iter()
        .map(|&r| {
            model.rays()[r]
                .iter()
                .zip(u)
                .map(|(a, b)| a * b)
                .sum::<i64>()
                + scale
        })
        .collect()
}

fn minkowski(a: &BTreeSet<Vec<i64>>, b: &BTreeSet<Vec<i64>>) -> Result<BTreeSet<Vec<i64>>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.iter().zip(y).map(|(p, q)| p + q).collect());
            if out.len() > ORACLE_SIZE_CAP {
                return Err(Error::SizeCap(ORACLE_SIZE_CAP));
            }
        }
    }
    Ok(out)
}

fn below(a: &[i64], set: &BTreeSet<Vec<i64>>) -> bool {
    set.iter().any(|g| g.iter().zip(a).all(|(x, y)| x <= y))
}

/// `dim H^0(X × A^1, L^{kr r0}) / H^0(X × A^1, L^{kr r0} · 𝔦^k)` by raw
/// expansion of `𝔦^k` chart by chart.
pub fn oracle_h0_quotient(
    model: &ToricFanoModel,
    seq: &IdealSequenceOnXxA1,
    r: u32,
    k: u32,
) -> Result<u64> {
    let m = seq.m() as i64;
    let scale = i64::from(k) * i64::from(r) * model.cartier_index();
    let points = box_points(model, scale)?;
    let nc = model.charts().len();
    let mut expanded = Vec::with_capacity(nc);
    for c in 0..nc {
        // Raw generators of 𝔦: (g, M - j) for g ∈ I_j, and t^M.
        let mut gens: BTreeSet<Vec<i64>> = BTreeSet::new();
        let dim = model.charts()[c].rays.len();
        let mut tm = vec![0; dim];
        tm.push(m);
        gens.insert(tm);
        for j in 1..=seq.m() {
            for g in seq.ideal(j).chart(c).generators() {
                let mut h = g.clone();
                h.push(m - j as i64);
                gens.insert(h);
            }
        }
        let mut power: BTreeSet<Vec<i64>> = BTreeSet::from([vec![0; dim + 1]]);
        for _ in 0..k {
            power = minkowski(&power, &gens)?;
        }
        expanded.push(power);
    }
    let mut total = 0u64;
    for u in &points {
        let mut need = 0i64;
        for (c, set) in expanded.iter().enumerate() {
            let mut a = ray_exponents(model, c, u, scale);
            a.push(0);
            let last = a.len() - 1;
            while !below(&a, set) {
                a[last] += 1;
            }
            need = need.max(a[last]);
        }
        total += need as u64;
    }
    Ok(total)
}

/// `min Σw / min_g <w, g>` over integer `w ∈ [0, bound]^n`.
pub fn oracle_lct_bruteforce(n: usize, gens: &[Vec<i64>], bound: i64) -> Option<Q> {
    let mut best: Option<Q> = None;
    let mut w = vec![0i64; n];
    loop {
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if w[i] < bound {
                w[i] += 1;
                break;
            }
            w[i] = 0;
            i += 1;
        }
        let val = gens
            .iter()
            .map(|g| g.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>())
            .min()
            .unwrap_or(0);
        if val > 0 {
            let ratio = Q::new(w.iter().sum::<i64>().into(), val.into());
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        }
    }
}

/// Membership order of `a` in the powers of a raw generator set.
fn order_in_powers(
    powers: &mut Vec<BTreeSet<Vec<i64>>>,
    base: &BTreeSet<Vec<i64>>,
    a: &[i64],
) -> Result<usize> {
    let mut m = 0;
    loop {
        if powers.len() <= m + 1 {
            let next = minkowski(&powers[m], base)?;
            // Keep only minimal elements so the sets stay small.
            let minimal: BTreeSet<Vec<i64>> = next
                .iter()
                .filter(|g| {
                    !next
                        .iter()
                        .any(|h| h != *g && h.iter().zip(g.iter()).all(|(x, y)| x <= y))
                })
                .cloned()
                .collect();
            powers.push(minimal);
        }
        if !below(a, &powers[m + 1]) {
            return Ok(m);
        }
        m += 1;
    }
}

/// `vol(σ^*(-K_X) - xF)` from an Ehrhart fit of
/// `#{u ∈ k r0 P : u ∈ L^{k r0} · I_Z^{⌈k r0 x⌉}}` over `k = step·m`.
pub fn oracle_profile_value(
    model: &ToricFanoModel,
    z: &MonomialSubscheme,
    x: &Q,
    k_max: u32,
) -> Result<OracleResult> {
    let n = model.dim();
    let r0 = model.cartier_index();
    let den = x
        .denom()
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("denominator too large".into()))?;
    let needed = n as i64 + 4;
    let mut step = den;
    let nc = model.charts().len();
    let bases: Vec<BTreeSet<Vec<i64>>> = (0..nc)
        .map(|c| z.ideal().chart(c).generators().iter().cloned().collect())
        .collect();
    while step * needed <= i64::from(k_max) {
        let mut counts = Vec::new();
        let mut powers: Vec<Vec<BTreeSet<Vec<i64>>>> = (0..nc)
            .map(|c| vec![BTreeSet::from([vec![0; model.charts()[c].rays.len()]])])
            .collect();
        for mm in 1..=needed {
            let k = step * mm;
            let scale = k * r0;
            let target = rational::ceil_i64(&(q(scale) * x)).max(0) as usize;
            let mut count = 0i128;
            for u in box_points(model, scale)? {
                let mut ok = true;
                for c in 0..nc {
                    if bases[c].iter().any(|g| g.iter().all(|&e| e == 0)) {
                        continue;
                    }
                    let a = ray_exponents(model, c, &u, scale);
                    if order_in_powers(&mut powers[c], &bases[c], &a)? < target {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    count += 1;
                }
            }
            counts.push(count);
        }
        let mut diffs = counts.clone();
        for _ in 0..n {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let next: Vec<i128> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        if next.len() >= 3 && next[next.len() - 3..].iter().all(|d| *d == 0) {
            // Δ^n c = n!·lead, and vol = n!·lead / (step r0)^n.
            let top = Q::from_integer((*diffs.last().expect("non-empty")).into());
            let value = top / rational::pow(&q(step * r0), n as u32);
            return Ok(OracleResult {
                quantity: format!("profile({}, {})", z.name(), rational::to_string(x)),
                method: OracleMethod::LatticeCount,
                value,
                parameters: vec![
                    ("model".into(), model.name().into()),
                    ("step".into(), step.to_string()),
                ],
            });
        }
        step += den;
    }
    Err(Error::NoStabilization(k_max))
}

/// `n!·vol(P)` as the leading Ehrhart difference of box counts.
pub fn oracle_anticanonical_volume(model: &ToricFanoModel, k_max: u32) -> Result<Q> {
    let n = model.dim();
    let counts: Vec<i128> = (1..=i64::from(k_max))
        .map(|k| box_points(model, k * model.cartier_index()).map(|p| p.len() as i128))
        .collect::<Result<_>>()?;
    let mut diffs = counts;
    for _ in 0..n {
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let next: Vec<i128> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    if next.len() < 3 || !next[next.len() - 3..].iter().all(|d| d.is_zero()) {
        return Err(Error::NoStabilization(k_max));
    }
    let r0 = q(model.cartier_index());
    Ok(Q::from_integer((*diffs.last().expect("non-empty")).into()) / rational::pow(&r0, n as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::toricmodel::by_name;

    #[test]
    fn box_scan_matches_section_counts() {
        for m in crate::toricmodel::catalog() {
            for k in 1..3 {
                assert_eq!(
                    box_points(&m, k).unwrap().len() as u64,
                    m.sections(k).count()
                );
            }
        }
    }

    #[test]
    fn quotient_of_simple_sequences() {
        let m = by_name("P1").unwrap();
        let unit = IdealSequenceOnXxA1::trivial(&m, 2).unwrap();
        assert_eq!(oracle_h0_quotient(&m, &unit, 1, 3).unwrap(), 0);
        let p = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        // 𝔦 = I_p + (t): only the section not vanishing at p needs a factor t.
        let s = IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone()]).unwrap();
        assert_eq!(oracle_h0_quotient(&m, &s, 1, 1).unwrap(), 1);
        let zero = IdealSequenceOnXxA1::new(&m, vec![crate::lct::IdealSheaf::zero(&m)]).unwrap();
        assert_eq!(oracle_h0_quotient(&m, &zero, 1, 2).unwrap(), 5 * 2);
    }

    #[test]
    fn lct_brute_force() {
        assert_eq!(
            oracle_lct_bruteforce(2, &[vec![2, 0], vec![0, 3]], 6),
            Some(frac(5, 6))
        );
        assert_eq!(
            oracle_lct_bruteforce(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 6),
            Some(q(3))
        );
    }

    #[test]
    fn profile_and_volume_oracles() {
        let m = by_name("P1xP1").unwrap();
        let z = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        assert_eq!(oracle_profile_value(&m, &z, &q(1), 12).unwrap().value, q(7));
        assert_eq!(oracle_profile_value(&m, &z, &q(3), 12).unwrap().value, q(1));
        assert_eq!(oracle_anticanonical_volume(&m, 8).unwrap(), q(8));
    }
}
