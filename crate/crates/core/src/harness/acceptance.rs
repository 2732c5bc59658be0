//! The acceptance criteria, each run at exact tolerance.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::oracles::{oracle_h0_quotient, oracle_lct_bruteforce, oracle_profile_value};
use super::RunConfig;
use crate::exactgeom::Polynomial;
use crate::filtration::{
    compute_d_infty, compute_weight_series, find_r1_capped, FiltrationSpec, SaturatedIdealTable,
};
use crate::lct::{
    lct_chart, lct_chart_lp, lct_monomial, ChartIdeal, IdealSequenceOnXxA1, MonomialSubscheme,
    Threshold,
};
use crate::rational::{self, frac, q, Q};
use crate::stability::{
    beta, ding_invariant, filtration_sequence, semistability_scan, standard_candidates,
    verify_volume_bound, ScanReport,
};
use crate::toricmodel::{by_name, catalog};
use crate::volumes::{blowup_volume_profile, seshadri_constant};

type Outcome = std::result::Result<String, String>;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Scan of the model and subschemes named in the run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ConfiguredScan {
    pub source: String,
    pub report: Option<ScanReport>,
    pub error: Option<String>,
}

impl ConfiguredScan {
    fn ok(&self) -> bool {
        self.error.is_none() && self.report.as_ref().is_some_and(|r| r.failures == 0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceSummary {
    pub criteria: Vec<CriterionResult>,
    pub configured: Option<ConfiguredScan>,
    pub all_passed: bool,
}

impl AcceptanceSummary {
    /// One `PASS`/`FAIL` line per criterion.
    pub fn lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .criteria
            .iter()
            .map(|c| {
                format!(
                    "[{}] criterion {}: {} ({:.2}s) {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.name,
                    c.seconds,
                    c.detail
                )
            })
            .collect();
        if let Some(c) = &self.configured {
            let status = if c.ok() { "PASS" } else { "FAIL" };
            let detail = match (&c.report, &c.error) {
                (_, Some(e)) => e.clone(),
                (Some(r), None) => format!(
                    "{} candidates, {} failures, {}",
                    r.entries.len(),
                    r.failures,
                    if r.obstructed {
                        "obstruction found"
                    } else {
                        "no obstruction"
                    }
                ),
                (None, None) => String::new(),
            };
            lines.push(format!(
                "[{status}] configured scan of {}: {detail}",
                c.source
            ));
        }
        lines
    }
}

pub const CRITERIA: &[(u32, &str)] = &[
    (1, "volume bound on the catalog"),
    (2, "Seshadri constant n+1 at points of P^n"),
    (3, "blowup profile of P^n at a point"),
    (4, "beta of a point on P^n vanishes"),
    (5, "beta non-negative on Kahler-Einstein models"),
    (6, "saturation laws of ideal-power filtrations"),
    (7, "weight identity and limit of A_r"),
    (
        8,
        "Ding invariants of trivial and normal-cone configurations",
    ),
    (9, "log canonical threshold engine"),
];

fn run_one(id: u32, cfg: &RunConfig) -> Outcome {
    match id {
        1 => volume_bound(),
        2 => seshadri_projective(),
        3 => profile_projective(),
        4 => beta_projective(),
        5 => beta_kahler_einstein(cfg),
        6 => saturation_laws(cfg),
        7 => weight_limit(cfg),
        8 => ding_cases(cfg),
        9 => lct_engine(cfg),
        _ => Err(format!("unknown criterion {id}")),
    }
}

pub fn run_acceptance_suite(cfg: &RunConfig) -> AcceptanceSummary {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|&(id, name)| {
            let start = Instant::now();
            let outcome = run_one(id, cfg);
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CriterionResult {
                id,
                name: name.to_string(),
                passed,
                detail,
                seconds,
            }
        })
        .collect();
    let configured = cfg.model.as_ref().map(|source| {
        let scan = cfg.load_model().and_then(|m| {
            let m = m.expect("model is configured");
            let cands = if cfg.subschemes.is_empty() {
                standard_candidates(&m)?
            } else {
                cfg.load_subschemes(&m)?
            };
            Ok(semistability_scan(&m, &cands))
        });
        match scan {
            Ok(report) => ConfiguredScan {
                source: source.clone(),
                report: Some(report),
                error: None,
            },
            Err(e) => ConfiguredScan {
                source: source.clone(),
                report: None,
                error: Some(e.to_string()),
            },
        }
    });
    let all_passed =
        criteria.iter().all(|c| c.passed) && configured.as_ref().is_none_or(ConfiguredScan::ok);
    AcceptanceSummary {
        criteria,
        configured,
        all_passed,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn projective(n: usize) -> std::result::Result<crate::toricmodel::ToricFanoModel, String> {
    by_name(&format!("P{n}")).map_err(err)
}

fn volume_bound() -> Outcome {
    let mut equal = Vec::new();
    for m in catalog().into_iter().filter(|m| m.dim() <= 3) {
        let rep = verify_volume_bound(&m).map_err(err)?;
        ensure(rep.satisfied, || format!("{} violates the bound", m.name()))?;
        if rep.equality {
            equal.push(m.name().to_string());
        }
    }
    ensure(equal == ["P1", "P2", "P3"], || {
        format!("equality for {equal:?}")
    })?;
    Ok(format!("equality exactly for {}", equal.join(", ")))
}

fn seshadri_projective() -> Outcome {
    for n in [2usize, 3] {
        let m = projective(n)?;
        for c in 0..m.charts().len() {
            let eps = seshadri_constant(&m, c).map_err(err)?;
            ensure(eps == q(n as i64 + 1), || {
                format!("P{n} chart {c}: epsilon = {}", rational::to_string(&eps))
            })?;
        }
    }
    Ok("epsilon = 3 on P2 and 4 on P3 at every fixed point".into())
}

fn profile_projective() -> Outcome {
    for n in 1..=3usize {
        let m = projective(n)?;
        let v = rational::pow(&q(n as i64 + 1), n as u32);
        let want = Polynomial::constant_minus_power(v, n);
        for c in 0..m.charts().len() {
            let z = MonomialSubscheme::fixed_point(&m, c).map_err(err)?;
            let p = blowup_volume_profile(&m, &z).map_err(err)?;
            ensure(
                p.profile.breakpoints() == [q(0), q(n as i64 + 1)]
                    && p.profile.pieces() == [want.clone()],
                || format!("P{n} chart {c}: profile {}", p.profile.to_csv()),
            )?;
            ensure(p.eval(&q(n as i64 + 2)).map_err(err)?.is_zero(), || {
                "profile not 0 past tau".into()
            })?;
        }
    }
    Ok("(n+1)^n - x^n on [0, n+1] for n = 1, 2, 3".into())
}

fn beta_projective() -> Outcome {
    for n in 1..=3usize {
        let m = projective(n)?;
        let ni = n as i64;
        for c in 0..m.charts().len() {
            let z = MonomialSubscheme::fixed_point(&m, c).map_err(err)?;
            let rep = beta(&m, &z).map_err(err)?;
            let gens = z.ideal().chart(c).generators().to_vec();
            let brute = oracle_lct_bruteforce(n, &gens, 6);
            ensure(rep.lct_value == q(ni) && brute == Some(q(ni)), || {
                format!(
                    "P{n}: lct {} vs oracle {brute:?}",
                    rational::to_string(&rep.lct_value)
                )
            })?;
            ensure(
                rep.volume_integral == q(ni) * rational::pow(&q(ni + 1), n as u32),
                || {
                    format!(
                        "P{n}: integral {}",
                        rational::to_string(&rep.volume_integral)
                    )
                },
            )?;
            ensure(rep.beta.is_zero(), || {
                format!("P{n}: beta {}", rational::to_string(&rep.beta))
            })?;
        }
    }
    Ok("beta = 0, lct = n, integral = n(n+1)^n for n = 1, 2, 3".into())
}

fn beta_kahler_einstein(cfg: &RunConfig) -> Outcome {
    let mut total = 0;
    let mut oracle_checks = 0;
    let mut min_beta: Option<Q> = None;
    for name in ["P1", "P2", "P1xP1", "P1xP2", "dP6"] {
        let m = by_name(name).map_err(err)?;
        let cands = standard_candidates(&m).map_err(err)?;
        let scan = semistability_scan(&m, &cands);
        for e in &scan.entries {
            let rep = e.report.as_ref().ok_or_else(|| {
                format!(
                    "{name} {}: {}",
                    e.candidate,
                    e.error.clone().unwrap_or_default()
                )
            })?;
            ensure(!rep.approximate && rep.beta >= Q::zero(), || {
                format!(
                    "{name} {}: beta = {}",
                    e.candidate,
                    rational::to_string(&rep.beta)
                )
            })?;
            if min_beta.as_ref().is_none_or(|b| rep.beta < *b) {
                min_beta = Some(rep.beta.clone());
            }
            total += 1;
        }
        // Independent lattice-count check of the profiles on surfaces and curves.
        if m.dim() <= 2 {
            for z in &cands {
                let prof = blowup_volume_profile(&m, z).map_err(err)?;
                for x in [frac(1, 2), q(1)] {
                    if x >= prof.tau {
                        continue;
                    }
                    let oracle = oracle_profile_value(&m, z, &x, cfg.oracle_k_max).map_err(err)?;
                    let main = prof.eval(&x).map_err(err)?;
                    ensure(oracle.value == main, || {
                        format!(
                            "{name} {} at x = {}: profile {} vs lattice count {}",
                            z.name(),
                            rational::to_string(&x),
                            rational::to_string(&main),
                            rational::to_string(&oracle.value)
                        )
                    })?;
                    oracle_checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "{total} candidates, min beta = {}, {oracle_checks} profile values confirmed by lattice counts",
        min_beta.map(|b| rational::to_string(&b)).unwrap_or_default()
    ))
}

fn saturation_laws(cfg: &RunConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checked = 0;
    for m in catalog() {
        let c = *m
            .smooth_charts()
            .first()
            .ok_or_else(|| format!("{} has no smooth chart", m.name()))?;
        let z = MonomialSubscheme::fixed_point(&m, c).map_err(err)?;
        let f = FiltrationSpec::ideal_power(&m, z).map_err(err)?;
        let r1 = find_r1_capped(&f, &q(-1), cfg.r_cap).map_err(err)?;
        let top = rational::ceil_i64(f.e_max_est());
        let pairs: Vec<(u32, Q)> = (0..cfg.law_samples)
            .map(|_| {
                let r: u32 = rng.gen_range(1..=2);
                let hi = 2 * (i64::from(r) * top + 1);
                let a: i64 = rng.gen_range(-2..=hi);
                (r, frac(a, 2))
            })
            .collect();
        let table = SaturatedIdealTable::build(&f, &pairs).map_err(err)?;
        let rep = table.check_laws(&f, r1).map_err(err)?;
        ensure(rep.all_hold(), || {
            format!("{}: {:?}", m.name(), rep.violations)
        })?;
        // Ideal-power filtrations are already saturated.
        for s in &table.entries {
            ensure(s.filtered == s.saturated, || {
                format!("{}: F differs from its saturation at r = {}", m.name(), s.r)
            })?;
        }
        checked += rep.checked_pairs;
    }
    Ok(format!(
        "all six laws hold on {checked} sampled (r, x) pairs"
    ))
}

fn weight_limit(cfg: &RunConfig) -> Outcome {
    let m = by_name("P1").map_err(err)?;
    let z = MonomialSubscheme::fixed_point(&m, 0).map_err(err)?;
    let f = FiltrationSpec::ideal_power(&m, z).map_err(err)?;
    let params = cfg.weight_params(&f);
    let oracle_k = cfg.k_max.min(cfg.oracle_k_max);
    for r in [1u32, 2] {
        let series = compute_weight_series(&f, r, &params).map_err(err)?;
        ensure(series.identity_holds(), || {
            format!("r = {r}: weight identity fails")
        })?;
        series.a_r(1, 1).map_err(err)?;
        let seq = filtration_sequence(&f, r, params.e_plus, params.e_minus).map_err(err)?;
        for rec in series.records.iter().filter(|rec| rec.k <= oracle_k) {
            let direct = oracle_h0_quotient(&m, &seq, r, rec.k).map_err(err)?;
            ensure(rec.w == -i128::from(direct), || {
                format!(
                    "r = {r}, k = {}: w = {} but the oracle quotient is {direct}",
                    rec.k, rec.w
                )
            })?;
        }
    }
    let rep = compute_d_infty(&f, &params, &cfg.r_list).map_err(err)?;
    let limit = rep.a_limit.clone();
    let gaps: Vec<Q> = rep
        .a_samples
        .iter()
        .map(|s| rational::abs(&(&s.value - &limit)))
        .collect();
    ensure(gaps.windows(2).all(|w| w[1] <= w[0]), || {
        "A_r does not approach the limit monotonically".into()
    })?;
    ensure(gaps.last() <= gaps.first(), || {
        "last sample is further from the limit than the first".into()
    })?;
    let samples: Vec<String> = rep
        .a_samples
        .iter()
        .map(|s| format!("A_{} = {}", s.r, rational::to_string(&s.value)))
        .collect();
    Ok(format!(
        "{}; limit {}; d_inf = {}",
        samples.join(", "),
        rational::to_string(&limit),
        rational::to_string(&rep.d_infty)
    ))
}

fn ding_cases(cfg: &RunConfig) -> Outcome {
    for name in ["P1", "P2", "P1xP1"] {
        let m = by_name(name).map_err(err)?;
        let s = IdealSequenceOnXxA1::trivial(&m, 2).map_err(err)?;
        let rep = ding_invariant(&m, &s, 1, cfg.k_max).map_err(err)?;
        ensure(rep.ding.is_zero(), || {
            format!("{name}: trivial Ding = {}", rational::to_string(&rep.ding))
        })?;
    }
    let m = by_name("P1").map_err(err)?;
    let p = MonomialSubscheme::fixed_point(&m, 0).map_err(err)?;
    let seq =
        IdealSequenceOnXxA1::new(&m, vec![p.ideal().clone(), p.ideal().power(2)]).map_err(err)?;
    let rep = ding_invariant(&m, &seq, 1, cfg.k_max).map_err(err)?;
    ensure(rep.ding >= Q::zero(), || {
        format!("normal cone Ding = {}", rational::to_string(&rep.ding))
    })?;
    for (i, w) in rep.w.iter().enumerate() {
        let k = i as u32 + 1;
        let direct = oracle_h0_quotient(&m, &seq, 1, k).map_err(err)?;
        ensure(*w == -i128::from(direct), || {
            format!("k = {k}: w = {w}, oracle {direct}")
        })?;
    }
    Ok(format!(
        "trivial Ding = 0; normal cone Ding = {} with d = {}, lct = {}",
        rational::to_string(&rep.ding),
        rational::to_string(&rep.d),
        rational::to_string(&rep.lct_product)
    ))
}

/// Random proper non-zero monomial ideal with exponents at most 4.
pub(crate) fn random_ideal(rng: &mut ChaCha8Rng) -> ChartIdeal {
    loop {
        let n: usize = rng.gen_range(1..=3);
        let count: usize = rng.gen_range(1..=4);
        let gens: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..n).map(|_| rng.gen_range(0..=4)).collect())
            .collect();
        if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
            continue;
        }
        return ChartIdeal::new(n, gens).expect("valid exponents");
    }
}

fn lct_engine(cfg: &RunConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..cfg.lct_samples {
        let ideal = random_ideal(&mut rng);
        let howald = lct_chart(&ideal).map_err(err)?;
        let lp = lct_chart_lp(&ideal).map_err(err)?;
        let brute = oracle_lct_bruteforce(ideal.dim(), ideal.generators(), 6);
        ensure(howald == lp && howald.finite() == brute.as_ref(), || {
            format!(
                "sample {i} {:?}: facets {howald}, program {lp}, enumeration {brute:?}",
                ideal.generators()
            )
        })?;
        for m in [2u32, 3] {
            let Threshold::Finite(base) = &howald else {
                unreachable!()
            };
            ensure(
                lct_chart(&ideal.power(m)).map_err(err)?
                    == Threshold::Finite(base / q(i64::from(m))),
                || format!("sample {i}: scaling fails for m = {m}"),
            )?;
        }
    }
    for n in 1..=3usize {
        let model = projective(n)?;
        for c in 0..model.charts().len() {
            let z = MonomialSubscheme::fixed_point(&model, c).map_err(err)?;
            let t = lct_monomial(&model, &z).map_err(err)?;
            ensure(t == q(n as i64), || {
                format!("P{n}: lct of a point is {}", rational::to_string(&t))
            })?;
            for m in [2u32, 3] {
                let tm = lct_monomial(&model, &z.power(m)).map_err(err)?;
                ensure(tm == &t / q(i64::from(m)), || {
                    format!("P{n}: scaling fails for m = {m}")
                })?;
            }
        }
    }
    Ok(format!(
        "{} random ideals agree across facets, program and enumeration; points and powers exact",
        cfg.lct_samples
    ))
}
