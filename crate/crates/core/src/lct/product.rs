use num_traits::{One, Zero};

use super::ideal::{ChartIdeal, IdealSheaf};
use crate::error::{Error, Result};
use crate::exactgeom::lp::{LinearProgram, LpOutcome, Relation};
use crate::par;
use crate::rational::{q, Q};
use crate::toricmodel::ToricFanoModel;

/// A decreasing chain `I_M ⊆ … ⊆ I_1` on `X`, encoding the ideal
/// `I_M + I_{M-1} t + … + I_1 t^{M-1} + (t^M)` on `X × A^1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSequenceOnXxA1 {
    /// `ideals[j - 1] = I_j`.
    ideals: Vec<IdealSheaf>,
}

impl IdealSequenceOnXxA1 {
    pub fn new(model: &ToricFanoModel, ideals: Vec<IdealSheaf>) -> Result<Self> {
        if ideals.is_empty() {
            return Err(Error::InvalidInput("need M >= 1".into()));
        }
        for i in &ideals {
            IdealSheaf::new(model, i.charts().to_vec())?;
        }
        for j in 1..ideals.len() {
            if !ideals[j - 1].contains_ideal(&ideals[j]) {
                return Err(Error::InvalidInput(format!(
                    "I_{} is not contained in I_{}",
                    j + 1,
                    j
                )));
            }
        }
        Ok(Self { ideals })
    }

    /// `I_1 = … = I_M = O_X`: the trivial configuration.
    pub fn trivial(model: &ToricFanoModel, m: usize) -> Result<Self> {
        Self::new(model, vec![IdealSheaf::unit(model); m])
    }

    pub fn m(&self) -> usize {
        self.ideals.len()
    }

    /// `I_j` for `1 <= j <= M`.
    pub fn ideal(&self, j: usize) -> &IdealSheaf {
        &self.ideals[j - 1]
    }

    /// The coefficient ideal of `t^s` in the encoded ideal, `0 <= s <= M`.
    pub fn component(&self, s: usize) -> IdealSheaf {
        let m = self.m();
        if s >= m {
            let dims = self.ideals[0].charts().iter().map(ChartIdeal::dim);
            IdealSheaf::from_trusted(dims.map(ChartIdeal::unit).collect())
        } else {
            self.ideals[m - 1 - s].clone()
        }
    }

    /// The encoded ideal on chart `c` of `X × A^1`, with `t` as last coordinate.
    pub fn chart_ideal(&self, c: usize) -> ChartIdeal {
        let m = self.m();
        let mut acc = self
            .component(m)
            .chart(c)
            .times_monomial_in_new_variable(m as i64);
        for s in 0..m {
            acc = acc.sum(
                &self
                    .component(s)
                    .chart(c)
                    .times_monomial_in_new_variable(s as i64),
            );
        }
        acc
    }

    /// The sequence encoding the `k`-th power of this ideal, of length `k·M`.
    pub fn power(&self, k: u32) -> IdealSequenceOnXxA1 {
        if k == 0 {
            let dims = self.ideals[0].charts().iter().map(ChartIdeal::dim);
            let unit = IdealSheaf::from_trusted(dims.map(ChartIdeal::unit).collect());
            return Self { ideals: vec![unit] };
        }
        let m = self.m();
        let base: Vec<IdealSheaf> = (0..=m).map(|s| self.component(s)).collect();
        let mut comps = base.clone();
        for _ in 1..k {
            let len = comps.len() - 1 + m;
            comps = (0..=len)
                .map(|s| {
                    let lo = s.saturating_sub(m);
                    let hi = s.min(comps.len() - 1);
                    let mut acc: Option<IdealSheaf> = None;
                    for s1 in lo..=hi {
                        let term = comps[s1].product(&base[s - s1]);
                        acc = Some(match acc {
                            None => term,
                            Some(a) => a.sum(&term),
                        });
                    }
                    acc.expect("non-empty range")
                })
                .collect();
        }
        let total = comps.len() - 1;
        Self {
            ideals: (1..=total).map(|j| comps[total - j].clone()).collect(),
        }
    }
}

impl IdealSequenceOnXxA1 {
    /// `dim H^0(X × A^1, L) / H^0(X × A^1, L · 𝔦)` for `L = -scale K_X`,
    /// i.e. the sum over sections `u` of the least `t`-degree `s` with
    /// `u · t^s` in the ideal.
    pub fn quotient_dimension(&self, model: &ToricFanoModel, scale: i64) -> u64 {
        let m = self.m();
        let comps: Vec<IdealSheaf> = (0..=m).map(|s| self.component(s)).collect();
        let nc = model.charts().len();
        model.sections(scale).sum_map(|u| {
            (0..nc)
                .map(|c| {
                    let a = model.chart_exponents(c, u, scale);
                    (0..=m)
                        .find(|&s| comps[s].chart(c).contains(&a))
                        .expect("the top component is the unit ideal") as u64
                })
                .max()
                .unwrap_or(0)
        })
    }
}

fn chart_product_lct(ideal: &ChartIdeal, c1: &Q) -> Q {
    let n = ideal.dim() - 1;
    // Variables: w_1..w_n >= 0, then s free. Weight 1 on t.
    let mut obj = vec![Q::one(); n + 1];
    obj[n] = -c1.clone();
    let mut lp = LinearProgram::new(obj);
    lp.free[n] = true;
    for g in ideal.generators() {
        let mut row: Vec<Q> = g[..n].iter().map(|&x| q(x)).collect();
        row.push(-Q::one());
        lp.push(row, Relation::Ge, q(-g[n]));
    }
    match lp.minimize() {
        LpOutcome::Optimal { value, .. } => value + Q::one(),
        other => unreachable!("t^M bounds the program: {other:?}"),
    }
}

/// The largest `c2` with `(X × A^1, 𝔦^{c1} · (t)^{c2})` sub log canonical.
pub fn lct_on_product_with_line(
    model: &ToricFanoModel,
    seq: &IdealSequenceOnXxA1,
    c1: &Q,
) -> Result<Q> {
    if *c1 <= Q::zero() {
        return Err(Error::Precondition("c1 must be positive".into()));
    }
    let charts: Vec<usize> = (0..model.charts().len()).collect();
    let values = par::try_map(&charts, |&c| {
        let ideal = seq.chart_ideal(c);
        if ideal.is_unit() {
            return Ok(Q::one());
        }
        if !model.charts()[c].smooth {
            return Err(Error::NotSmoothChart(c));
        }
        Ok(chart_product_lct(&ideal, c1))
    })?;
    Ok(values.into_iter().min().expect("models have charts"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lct::MonomialSubscheme;
    use crate::rational::frac;
    use crate::toricmodel::by_name;

    #[test]
    fn pure_power_of_t() {
        let m = by_name("P1").unwrap();
        for mm in 1..4 {
            let s = IdealSequenceOnXxA1::trivial(&m, mm).unwrap();
            // I_j = O for all j makes the ideal the unit ideal.
            assert_eq!(lct_on_product_with_line(&m, &s, &q(1)).unwrap(), q(1));
        }
        let zero = IdealSheaf::zero(&m);
        let s = IdealSequenceOnXxA1::new(&m, vec![zero.clone(), zero]).unwrap();
        assert_eq!(s.chart_ideal(0).generators(), &[vec![0, 2]]);
        for r in 1..4 {
            let c1 = frac(1, r);
            assert_eq!(
                lct_on_product_with_line(&m, &s, &c1).unwrap(),
                q(1) - q(2) * c1
            );
        }
    }

    #[test]
    fn deformation_to_normal_cone() {
        let m = by_name("P1").unwrap();
        let p = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        let s = IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone(), p.ideal().power(2)]).unwrap();
        assert_eq!(
            s.chart_ideal(0).generators(),
            &[vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(lct_on_product_with_line(&m, &s, &q(1)).unwrap(), q(0));
        assert_eq!(lct_on_product_with_line(&m, &s, &frac(1, 2)).unwrap(), q(1));
        let flat =
            IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone(), p.ideal().clone()]).unwrap();
        assert_eq!(lct_on_product_with_line(&m, &flat, &q(1)).unwrap(), q(1));
    }

    #[test]
    fn powers_match_direct_products() {
        let m = by_name("P2").unwrap();
        let p = MonomialSubscheme::fixed_point(&m, 1).unwrap();
        let s = IdealSequenceOnXxA1::new(
            &m,
            vec![p.ideal().clone(), p.ideal().power(2), p.ideal().power(2)],
        )
        .unwrap();
        for k in 1..4u32 {
            let pk = s.power(k);
            assert_eq!(pk.m(), 3 * k as usize);
            for c in 0..3 {
                assert_eq!(pk.chart_ideal(c), s.chart_ideal(c).power(k), "k={k} c={c}");
            }
        }
    }

    #[test]
    fn rejects_increasing_chain() {
        let m = by_name("P1").unwrap();
        let p = MonomialSubscheme::fixed_point(&m, 0).unwrap();
        assert!(IdealSequenceOnXxA1::new(&m, vec![p.ideal().power(2), p.ideal().clone()]).is_err());
    }
}
