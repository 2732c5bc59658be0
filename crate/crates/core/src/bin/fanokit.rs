use std::path::{Path, PathBuf};

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use fanokit::filtration::{compute_d_infty, compute_weight_series, FiltrationSpec};
use fanokit::harness::{self, canonical_json, run_acceptance_suite, RunConfig};
use fanokit::lct::{
    lct_monomial, lct_on_product_with_line, IdealSequenceOnXxA1, IdealSheaf, MonomialSubscheme,
    SubschemeSpec,
};
use fanokit::rational::{self, Q};
use fanokit::stability::{
    beta, ding_invariant, semistability_scan, standard_candidates, verify_volume_bound, Verdict,
};
use fanokit::toricmodel::{catalog, ModelSpec, ToricFanoModel};
use fanokit::volumes::blowup_volume_profile_with_seshadri;

/// Exact stability invariants of toric Q-Fano varieties.
#[derive(Parser)]
#[command(name = "fanokit", version)]
struct Cli {
    /// Worker threads (overrides FANOKIT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Catalog name (see `fanokit catalog`) or path to a model JSON file.
    #[arg(long)]
    model: String,
}

#[derive(Args)]
struct OutArg {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in models.
    Catalog {
        /// Print the models as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Anticanonical volume and, with a subscheme, the blowup volume profile.
    Volume {
        #[command(flatten)]
        model: ModelArg,
        /// `point:C`, `thick:C:M`, `divisor:R` or a subscheme JSON file.
        #[arg(long)]
        subscheme: Option<String>,
        /// Write the profile pieces as CSV.
        #[arg(long)]
        profile_csv: Option<PathBuf>,
    },
    /// Log canonical threshold of a subscheme, or of the ideal it induces on X × A^1.
    Lct {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        subscheme: String,
        /// Raise the ideal to this power first.
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Compute the threshold of (t) against 𝔦^{c1} on X × A^1, where
        /// 𝔦 = I_Z^M + I_Z^{M-1} t + … + I_Z t^{M-1} + (t^M).
        #[arg(long)]
        product_line: bool,
        #[arg(long, default_value = "1")]
        c1: String,
        /// M for --product-line.
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Saturation data, weight series and d_∞ of an ideal-power filtration.
    Filtration {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        subscheme: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        rlist: Vec<u32>,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        #[arg(long)]
        e_plus: Option<i64>,
        #[arg(long)]
        e_minus: Option<i64>,
        /// Write the full report (including weight series) here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// β(Z) = lct·vol - ∫ vol(σ^*(-K_X) - xF) dx.
    Beta {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        subscheme: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Ding invariant of the test configuration of an ideal sequence.
    Ding {
        #[command(flatten)]
        model: ModelArg,
        /// Use I_j = I_Z^j for j = 1..M (deformation to the normal cone).
        #[arg(long, conflicts_with = "sequence")]
        subscheme: Option<String>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// JSON file describing I_1, …, I_M.
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check vol(-K_X) <= (n+1)^n and the equality-case Seshadri signature.
    VerifyBound {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// β over a candidate list (default: fixed points, boundary divisors, I_p^2).
    Scan {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        subscheme: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the acceptance suite.
    TestAcceptance {
        /// JSON run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
}

/// How a command ended, mapped to the process exit code.
enum Status {
    Consistent,
    Obstruction,
}

fn load_model(arg: &str) -> Result<ToricFanoModel> {
    harness::load_model(arg).with_context(|| format!("loading model {arg}"))
}

fn load_subscheme(model: &ToricFanoModel, arg: &str) -> Result<MonomialSubscheme> {
    harness::load_subscheme(model, arg).with_context(|| format!("loading subscheme {arg}"))
}

/// One entry of a sequence file: `"unit"`, `"zero"`, a subscheme, or a power
/// of one.
#[derive(Deserialize)]
#[serde(untagged)]
enum SequenceEntry {
    Named(String),
    Power {
        power_of: SubschemeSpec,
        exponent: u32,
    },
    Subscheme(SubschemeSpec),
}

#[derive(Deserialize)]
struct SequenceFile {
    ideals: Vec<SequenceEntry>,
}

fn load_sequence(model: &ToricFanoModel, path: &Path) -> Result<IdealSequenceOnXxA1> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SequenceFile = serde_json::from_str(&text)?;
    let ideals = file
        .ideals
        .iter()
        .map(|e| -> Result<IdealSheaf> {
            Ok(match e {
                SequenceEntry::Named(s) if s == "unit" => IdealSheaf::unit(model),
                SequenceEntry::Named(s) if s == "zero" => IdealSheaf::zero(model),
                SequenceEntry::Named(s) => load_subscheme(model, s)?.ideal().clone(),
                SequenceEntry::Power { power_of, exponent } => {
                    power_of.build(model)?.ideal().power(*exponent)
                }
                SequenceEntry::Subscheme(spec) => spec.build(model)?.ideal().clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdealSequenceOnXxA1::new(model, ideals)?)
}

fn normal_cone_sequence(
    z: &MonomialSubscheme,
    m: usize,
    model: &ToricFanoModel,
) -> Result<IdealSequenceOnXxA1> {
    if m == 0 {
        bail!("M must be positive");
    }
    let ideals = (1..=m as u32).map(|j| z.ideal().power(j)).collect();
    Ok(IdealSequenceOnXxA1::new(model, ideals)?)
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = canonical_json(value)?;
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn show(x: &Q) -> String {
    format!("{} (~{})", rational::to_string(x), rational::to_decimal(x))
}

#[derive(Serialize)]
struct CatalogEntry {
    name: String,
    dim: usize,
    r0: i64,
    #[serde(with = "rational::report")]
    volume: Q,
    charts: usize,
    smooth_charts: usize,
    spec: ModelSpec,
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Catalog { json } => {
            let entries: Vec<CatalogEntry> = catalog()
                .iter()
                .map(|m| CatalogEntry {
                    name: m.name().to_string(),
                    dim: m.dim(),
                    r0: m.cartier_index(),
                    volume: m.anticanonical_volume(),
                    charts: m.charts().len(),
                    smooth_charts: m.smooth_charts().len(),
                    spec: m.to_spec(),
                })
                .collect();
            if json {
                emit(&entries, None)?;
            } else {
                for e in &entries {
                    println!(
                        "{:<9} n={} r0={} vol={} charts={} smooth={}",
                        e.name,
                        e.dim,
                        e.r0,
                        rational::to_string(&e.volume),
                        e.charts,
                        e.smooth_charts
                    );
                }
            }
            Ok(Status::Consistent)
        }
        Command::Volume {
            model,
            subscheme,
            profile_csv,
        } => {
            let m = load_model(&model.model)?;
            println!(
                "model {}: vol(-K_X) = {}",
                m.name(),
                show(&m.anticanonical_volume())
            );
            if let Some(s) = subscheme {
                let z = load_subscheme(&m, &s)?;
                let p = blowup_volume_profile_with_seshadri(&m, &z)?;
                println!("subscheme {}: tau = {}", z.name(), show(&p.tau));
                if let Some(e) = &p.epsilon {
                    println!("epsilon = {}", show(e));
                }
                print!("{}", p.profile.to_csv());
                if let Some(path) = profile_csv {
                    std::fs::write(&path, p.profile.to_csv())
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
            Ok(Status::Consistent)
        }
        Command::Lct {
            model,
            subscheme,
            power,
            product_line,
            c1,
            m,
        } => {
            let x = load_model(&model.model)?;
            let z = load_subscheme(&x, &subscheme)?;
            let z = if power > 1 { z.power(power) } else { z };
            if product_line {
                let c1 = rational::parse(&c1)?;
                let seq = normal_cone_sequence(&z, m, &x)?;
                let v = lct_on_product_with_line(&x, &seq, &c1)?;
                println!(
                    "lct(X x A^1, I^{}; (t)) = {}",
                    rational::to_string(&c1),
                    show(&v)
                );
            } else {
                println!("lct(X; {}) = {}", z.name(), show(&lct_monomial(&x, &z)?));
            }
            Ok(Status::Consistent)
        }
        Command::Filtration {
            model,
            subscheme,
            rlist,
            kmax,
            e_plus,
            e_minus,
            report,
        } => {
            let x = load_model(&model.model)?;
            let z = load_subscheme(&x, &subscheme)?;
            let f = FiltrationSpec::ideal_power(&x, z)?;
            let cfg = RunConfig {
                k_max: kmax,
                ..RunConfig::default()
            };
            let mut params = cfg.weight_params(&f);
            if let Some(e) = e_plus {
                params.e_plus = e;
            }
            if let Some(e) = e_minus {
                params.e_minus = e;
            }
            let d = compute_d_infty(&f, &params, &rlist)?;
            println!("e_+ = {}, e_- = {}, r1 = {}", d.e_plus, d.e_minus, d.r1);
            for (a, dr) in d.a_samples.iter().zip(&d.d_samples) {
                println!(
                    "r = {}: A_r = {}, d_r = {}",
                    a.r,
                    show(&a.value),
                    show(&dr.value)
                );
            }
            println!("A_limit = {}", show(&d.a_limit));
            println!("d_infty = {}", show(&d.d_infty));
            if let Some(path) = report {
                #[derive(Serialize)]
                struct FullReport {
                    d_infty: fanokit::filtration::DInftyReport,
                    series: Vec<fanokit::filtration::WeightSeries>,
                }
                let series = rlist
                    .iter()
                    .map(|&r| compute_weight_series(&f, r, &params))
                    .collect::<fanokit::Result<Vec<_>>>()?;
                emit(&FullReport { d_infty: d, series }, Some(&path))?;
            }
            Ok(Status::Consistent)
        }
        Command::Beta {
            model,
            subscheme,
            out,
        } => {
            let x = load_model(&model.model)?;
            let z = load_subscheme(&x, &subscheme)?;
            let rep = beta(&x, &z)?;
            emit(&rep, out.out.as_deref())?;
            Ok(match rep.verdict {
                Verdict::Consistent => Status::Consistent,
                Verdict::ObstructsSemistability => Status::Obstruction,
            })
        }
        Command::Ding {
            model,
            subscheme,
            m,
            sequence,
            r,
            kmax,
            out,
        } => {
            let x = load_model(&model.model)?;
            let seq = match (subscheme, sequence) {
                (Some(s), None) => normal_cone_sequence(&load_subscheme(&x, &s)?, m, &x)?,
                (None, Some(p)) => load_sequence(&x, &p)?,
                _ => bail!("give exactly one of --subscheme or --sequence"),
            };
            let rep = ding_invariant(&x, &seq, r, kmax)?;
            emit(&rep, out.out.as_deref())?;
            Ok(if rep.ding < Q::from_integer(0.into()) {
                Status::Obstruction
            } else {
                Status::Consistent
            })
        }
        Command::VerifyBound { model, out } => {
            let x = load_model(&model.model)?;
            let rep = verify_volume_bound(&x)?;
            emit(&rep, out.out.as_deref())?;
            let signature_ok = rep
                .seshadri_check
                .as_ref()
                .is_none_or(|c| c.iter().all(|s| s.equals_n_plus_1));
            Ok(if rep.satisfied && signature_ok {
                Status::Consistent
            } else {
                Status::Obstruction
            })
        }
        Command::Scan {
            model,
            subscheme,
            out,
        } => {
            let x = load_model(&model.model)?;
            let cands = if subscheme.is_empty() {
                standard_candidates(&x)?
            } else {
                subscheme
                    .iter()
                    .map(|s| load_subscheme(&x, s))
                    .collect::<Result<Vec<_>>>()?
            };
            let rep = semistability_scan(&x, &cands);
            emit(&rep, out.out.as_deref())?;
            if rep.obstructed {
                Ok(Status::Obstruction)
            } else if rep.failures > 0 {
                bail!("{} candidates failed to evaluate", rep.failures)
            } else {
                Ok(Status::Consistent)
            }
        }
        Command::TestAcceptance { config, out } => {
            let cfg = match config {
                Some(p) => RunConfig::from_file(&p)
                    .with_context(|| format!("loading config {}", p.display()))?,
                None => RunConfig::default(),
            };
            if let Some(t) = cfg.threads {
                fanokit::par::configure_threads(t);
            }
            let summary = run_acceptance_suite(&cfg);
            for line in summary.lines() {
                println!("{line}");
            }
            if let Some(path) = out.out.as_deref().or(cfg.out.as_deref()) {
                std::fs::write(path, serde_json::to_string_pretty(&summary)? + "\n")?;
            }
            if !summary.all_passed {
                bail!("acceptance suite failed");
            }
            Ok(Status::Consistent)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.threads {
        Some(t) => fanokit::par::configure_threads(t),
        None => fanokit::par::configure_from_env(),
    }
    match run(cli) {
        Ok(Status::Consistent) => ExitCode::SUCCESS,
        Ok(Status::Obstruction) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
