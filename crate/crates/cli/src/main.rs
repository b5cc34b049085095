mod cache;
mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use weilcx_core::complexes::build_complex_capped;
use weilcx_core::manifold::{Cospherical, LoopSeries};
use weilcx_core::vey::{validate_vey_with, vey_basis_with, ValidationReport, WoCondition};
use weilcx_core::{
    build_model_with, cohomology, kappa, loop_poincare, report, ComplexKind, ManifoldDescriptor,
    ModelBudget, VERSION,
};

use cache::{cache_key, Cache};
use config::{Config, ConfigError, OutputFormat};
use emit::{render, KappaOutput, ModelOutput, Render, VeyTable};

/// Exit status for rejected input (bad flags, values, config or descriptors).
const EXIT_INVALID: u8 = 2;
/// Exit status when a computation is refused by a resource cap.
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "weilcx",
    about = "Truncated Weil complexes, Vey bases, minimal models and manifold class reports"
)]
#[command(disable_version_flag = true, arg_required_else_help = true)]
struct Cli {
    /// Print the library version and the config digest.
    #[arg(short = 'V', long)]
    version: bool,
    /// Config file (TOML); defaults to ./weilcx.toml when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format, overriding the config.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Suppress progress messages on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

fn parse_kind(s: &str) -> Result<ComplexKind, weilcx_core::Error> {
    s.parse()
}

fn parse_wo(s: &str) -> Result<WoCondition, weilcx_core::Error> {
    s.parse()
}

fn parse_cospherical(s: &str) -> Result<Cospherical, String> {
    let (k, c) = s
        .split_once(':')
        .ok_or_else(|| format!("expected k:count, got {s:?}"))?;
    let degree = k
        .trim()
        .parse()
        .map_err(|_| format!("bad degree in {s:?}"))?;
    let count = c
        .trim()
        .parse()
        .map_err(|_| format!("bad count in {s:?}"))?;
    Ok(Cospherical { degree, count })
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology of W_q, WO_q or I_q with representatives.
    Cohomology {
        #[arg(long, value_parser = parse_kind)]
        complex: ComplexKind,
        #[arg(long)]
        q: u32,
    },
    /// Vey basis classes, optionally classified or validated against the oracle.
    Vey {
        #[arg(long)]
        q: u32,
        #[arg(long, value_parser = parse_kind)]
        complex: ComplexKind,
        #[arg(long)]
        degree: Option<u32>,
        /// Show the classification flags in table output.
        #[arg(long)]
        classify: bool,
        /// Emit the validation report instead of the class list.
        #[arg(long)]
        validate: bool,
        #[arg(long, value_parser = parse_wo)]
        wo_condition: Option<WoCondition>,
    },
    /// Minimal model of I_q through a degree cap.
    Model {
        #[arg(long)]
        q: u32,
        #[arg(long = "max-degree")]
        max_degree: u32,
        /// Also emit the Poincare series of the free algebra on the ranks shifted down by this many loops.
        #[arg(long)]
        loops: Option<u32>,
    },
    /// Characteristic-class inventory for a manifold.
    Manifold {
        /// S1, S2, T2, Sigma_g:<g>, S3, T3 or Rq:<q>.
        #[arg(long, conflicts_with_all = ["dim", "compact", "parallelizable", "cospherical", "trivialized"])]
        preset: Option<String>,
        #[arg(long, required_unless_present = "preset")]
        dim: Option<u32>,
        /// Compact and closed.
        #[arg(long)]
        compact: bool,
        #[arg(long)]
        parallelizable: bool,
        /// Tangent bundle trivialized over the co-spherical cycles.
        #[arg(long)]
        trivialized: bool,
        /// Co-spherical classes as k:count, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_cospherical)]
        cospherical: Vec<Cospherical>,
    },
    /// Cross-check the Vey enumeration against the cohomology oracle.
    Validate {
        #[arg(long)]
        q: u32,
        /// W or WO; both when omitted.
        #[arg(long, value_parser = parse_kind)]
        complex: Option<ComplexKind>,
        #[arg(long, value_parser = parse_wo)]
        wo_condition: Option<WoCondition>,
    },
    /// Largest k with 4k <= q + 1.
    Kappa {
        #[arg(long)]
        q: u32,
    },
}

struct Ctx {
    cfg: Config,
    format: OutputFormat,
    cache: Option<Cache>,
}

impl Ctx {
    /// Loads the cached document for `(command, params)` or computes and stores it.
    fn cached<T, F>(&self, command: &str, params: &str, compute: F) -> anyhow::Result<(T, String)>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> weilcx_core::Result<T>,
    {
        let key = cache_key(command, params, VERSION);
        if let Some(cache) = &self.cache {
            if let Some(text) = cache.get(&key) {
                match serde_json::from_str(&text) {
                    Ok(value) => {
                        log::info!("{command}: cache hit ({params})");
                        return Ok((value, text));
                    }
                    Err(e) => {
                        log::warn!("{command}: cached payload does not parse ({e}), recomputing")
                    }
                }
            }
        }
        log::info!("{command}: computing ({params})");
        let value = compute()?;
        let text = emit::json(&value)?;
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.put(&key, &text) {
                log::warn!(
                    "could not write cache entry in {}: {e}",
                    cache.dir().display()
                );
            }
        }
        Ok((value, text))
    }

    fn emit<T: Render + ?Sized>(&self, value: &T, json: &str) -> String {
        render(value, json, self.format)
    }
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let cfg = Config::load(cli.config.as_deref())?;
    if cli.version {
        return Ok(format!("weilcx {VERSION} (config {})\n", cfg.digest()));
    }
    let Some(command) = cli.command else {
        anyhow::bail!(ConfigError::Invalid("no subcommand given".into()));
    };
    let ctx = Ctx {
        format: cli.format.unwrap_or(cfg.output_format),
        cache: (!cli.no_cache).then(|| Cache::new(cfg.cache_dir.clone(), VERSION)),
        cfg,
    };
    let q_cap = ctx.cfg.q_cap;
    match command {
        Command::Cohomology { complex, q } => {
            let (h, json) = ctx.cached("cohomology", &format!("kind={complex};q={q}"), || {
                let cx = build_complex_capped(q, complex, q_cap)?;
                Ok(cohomology(&cx))
            })?;
            Ok(ctx.emit(&h, &json))
        }
        Command::Vey {
            q,
            complex,
            degree,
            classify,
            validate,
            wo_condition,
        } => {
            let cond = wo_condition.unwrap_or(ctx.cfg.vey_wo_condition);
            if validate {
                let (r, json) = ctx.cached(
                    "validate",
                    &format!("kind={complex};q={q};wo={cond}"),
                    || validate_vey_with(q, complex, cond, q_cap),
                )?;
                return Ok(ctx.emit(&r, &json));
            }
            let params = format!("kind={complex};q={q};wo={cond};degree={degree:?}");
            let (classes, json) = ctx.cached("vey", &params, || {
                let mut all = vey_basis_with(q, complex, cond)?;
                if let Some(d) = degree {
                    all.retain(|v| v.degree == d);
                }
                Ok(all)
            })?;
            Ok(ctx.emit(
                &VeyTable {
                    classes: &classes,
                    flags: classify,
                },
                &json,
            ))
        }
        Command::Model {
            q,
            max_degree,
            loops,
        } => {
            let budget = ModelBudget {
                max_degree: ctx.cfg.model_degree_cap,
                ..ModelBudget::default()
            };
            let params = format!("q={q};max_degree={max_degree};loops={loops:?}");
            let (out, json) = ctx.cached("model", &params, || {
                let model = build_model_with(q, max_degree, budget)?;
                let rank_table = model.rank_table();
                let loop_series = match loops {
                    Some(l) => Some(LoopSeries {
                        loops: l,
                        generators: rank_table.ranks.clone(),
                        series: loop_poincare(&rank_table.ranks, l, max_degree)?,
                    }),
                    None => None,
                };
                Ok(ModelOutput {
                    model,
                    rank_table,
                    loop_series,
                })
            })?;
            Ok(ctx.emit(&out, &json))
        }
        Command::Manifold {
            preset,
            dim,
            compact,
            parallelizable,
            trivialized,
            cospherical,
        } => {
            let descriptor = match preset {
                Some(p) => ManifoldDescriptor::preset(&p)?,
                None => ManifoldDescriptor {
                    dim: dim.context("--dim is required without --preset")?,
                    compact,
                    closed: compact,
                    orientable: true,
                    parallelizable,
                    trivialized_over_cycles: trivialized,
                    cospherical_degrees: cospherical,
                    label: None,
                },
            };
            descriptor.validate()?;
            let params = serde_json::to_string(&descriptor)?;
            let (r, json) = ctx.cached("manifold", &params, || report(&descriptor))?;
            Ok(ctx.emit(&r, &json))
        }
        Command::Validate {
            q,
            complex,
            wo_condition,
        } => {
            let cond = wo_condition.unwrap_or(ctx.cfg.vey_wo_condition);
            match complex {
                Some(kind) => {
                    let (r, json) =
                        ctx.cached("validate", &format!("kind={kind};q={q};wo={cond}"), || {
                            validate_vey_with(q, kind, cond, q_cap)
                        })?;
                    Ok(ctx.emit(&r, &json))
                }
                None => {
                    let (r, json): (Vec<ValidationReport>, String) =
                        ctx.cached("validate-both", &format!("q={q};wo={cond}"), || {
                            [ComplexKind::W, ComplexKind::WO]
                                .into_iter()
                                .map(|kind| validate_vey_with(q, kind, cond, q_cap))
                                .collect()
                        })?;
                    Ok(ctx.emit(&r, &json))
                }
            }
        }
        Command::Kappa { q } => {
            if q == 0 {
                return Err(weilcx_core::Error::InvalidInput("q must be at least 1".into()).into());
            }
            let out = KappaOutput { q, kappa: kappa(q) };
            let json = emit::json(&out)?;
            Ok(ctx.emit(&out, &json))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(core) = e.downcast_ref::<weilcx_core::Error>() {
        return match core {
            weilcx_core::Error::ResourceBudget { .. } => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
    }
    if e.downcast_ref::<ConfigError>().is_some() {
        return EXIT_INVALID;
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let level = if cli.quiet {
        log::LevelFilter::Warn
    } else {
        log::LevelFilter::Info
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
