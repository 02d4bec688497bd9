use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oofa::construct::{construct, SearchBudget};
use oofa::design::{read_csv, AnyDesign, DesignFile};
use oofa::indicator::IndicatorSpectrum;
use oofa::latin::CandidateSet;
use oofa::simulate::{
    argmax_sequences, case_study_responses, component_order, format_sequence, rank_sequences, simulate, SimConfig,
    CASE_STUDY_BATCH, CASE_STUDY_MODEL,
};
use oofa::stats::{correlation_matrix, forward_select, model_matrix, ModelOrder, OlsFit};
use oofa::{fixtures, wlp, Error, WordLengthPattern, DEFAULT_SEED};

const FORMAT_VERSION: &str = "1";

#[derive(Parser)]
#[command(
    name = "oofa",
    version = concat!(env!("CARGO_PKG_VERSION"), " (design csv format 1)"),
    about = "Blocked order-of-addition designs",
    after_help = "Randomized commands default to seed 20240501."
)]
struct Cli {
    /// Print a single JSON document instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default 1).
    #[arg(long, global = true, env = "OOFA_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DesignArg {
    /// Design CSV (header Run,Z1..Zm[,B][,y]).
    #[arg(long)]
    design: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    First,
    Quadratic,
    Second,
}

impl From<Order> for ModelOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::First => ModelOrder::First,
            Order::Quadratic => ModelOrder::Quadratic,
            Order::Second => ModelOrder::SecondOrder,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the candidate Latin squares of order m.
    Mols {
        #[arg(long)]
        m: usize,
    },
    /// Build a blocked design by COA stacking and exchange search.
    Construct {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        block_size: usize,
        /// Random restarts.
        #[arg(long, default_value_t = 500)]
        i1: usize,
        /// Latin-square exchanges per restart.
        #[arg(long, default_value_t = 50)]
        i2: usize,
        /// Row exchanges per restart.
        #[arg(long, default_value_t = 50)]
        i3: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the design here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a JSON report (pattern, provenance, restarts) here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Word length pattern of a design.
    Wlp {
        #[command(flatten)]
        design: DesignArg,
    },
    /// Nonzero indicator-function coefficients.
    Indicator {
        #[command(flatten)]
        design: DesignArg,
    },
    /// Correlations between model columns.
    Correlate {
        #[command(flatten)]
        design: DesignArg,
        #[arg(long, value_enum, default_value = "second")]
        order: Order,
    },
    /// Forward selection on a design with a response column.
    Fit {
        #[command(flatten)]
        design: DesignArg,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "second")]
        order: Order,
    },
    /// Power and type I error of forward selection.
    Simulate {
        #[command(flatten)]
        design: DesignArg,
        /// Active position effects.
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also write per-rep results here.
        #[arg(long)]
        per_rep: Option<PathBuf>,
    },
    /// Fit the five-drug data and rank sequences.
    CaseStudy {
        /// Draw fresh responses from the true model instead of using the
        /// bundled ones.
        #[arg(long)]
        regenerate: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Check a design file.
    Validate {
        #[command(flatten)]
        design: DesignArg,
    },
}

enum Outcome {
    Ok(String),
    Invalid(String, String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let threads = cli.threads.unwrap_or(1).max(1);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(Outcome::Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Invalid(out, msg)) => {
            print!("{out}");
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<Error>(),
                    Some(
                        Error::UnsupportedOrder(_)
                            | Error::OrderTooSmall(_)
                            | Error::InfeasibleSize { .. }
                            | Error::ConfigInvalid(_)
                            | Error::SizeLimit(_)
                    )
                )
            });
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn load(arg: &DesignArg) -> Result<DesignFile> {
    read_csv(&arg.design).with_context(|| format!("reading {}", arg.design.display()))
}

fn render(json_mode: bool, csv: String, doc: Value) -> String {
    if json_mode {
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json values serialize"))
    } else {
        csv
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn wlp_csv(w: &WordLengthPattern) -> String {
    let mut out = String::from(if w.is_blocked() { "l,wP,wB\n" } else { "l,wP\n" });
    for l in 1..=w.pure().len() {
        match w.mixed() {
            Some(b) => writeln!(out, "{l},{},{}", w.p(l), b[l - 1]),
            None => writeln!(out, "{l},{}", w.p(l)),
        }
        .unwrap();
    }
    out
}

fn fit_rows(fit: &OlsFit) -> Vec<Value> {
    (0..fit.labels.len())
        .map(|i| {
            json!({
                "term": fit.labels[i],
                "estimate": fit.estimates[i],
                "std_error": fit.std_errors[i],
                "t": fit.t_values[i],
                "p": fit.p_values[i],
            })
        })
        .collect()
}

fn fit_csv(prefix: &str, fit: &OlsFit, out: &mut String) {
    for i in 0..fit.labels.len() {
        writeln!(
            out,
            "{prefix}{},{},{},{},{}",
            fit.labels[i], fit.estimates[i], fit.std_errors[i], fit.t_values[i], fit.p_values[i]
        )
        .unwrap();
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let json_mode = cli.json;
    let text = match &cli.command {
        Command::Mols { m } => {
            let set = CandidateSet::new(*m)?;
            let mut csv = String::from("L,row");
            for j in 1..=*m {
                write!(csv, ",C{j}").unwrap();
            }
            csv.push('\n');
            for sq in &set.squares {
                for (r, row) in sq.rows().enumerate() {
                    writeln!(csv, "{},{},{}", sq.index(), r + 1, format_sequence(row)).unwrap();
                }
            }
            let doc = json!({
                "m": m,
                "squares": set.squares.iter().map(|sq| json!({
                    "index": sq.index(),
                    "rows": sq.rows().map(<[u8]>::to_vec).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            render(json_mode, csv, doc)
        }
        Command::Construct { m, k, block_size, i1, i2, i3, seed, out, report } => {
            let budget = SearchBudget { restarts: *i1, ls_swaps: *i2, row_swaps: *i3, seed: *seed };
            let result = construct(*m, *k, *block_size, &budget)?;
            let csv = DesignFile::blocked(result.design.clone()).to_csv();
            let doc = json!({
                "format": FORMAT_VERSION,
                "shape": result.shape,
                "wlp": result.wlp,
                "interleaved": result.wlp.interleaved(),
                "provenance": result.provenance,
                "restarts": result.restarts,
                "best_restart": result.best_restart,
                "seed": result.seed,
            });
            if let Some(path) = report {
                write_file(path, &serde_json::to_string_pretty(&doc)?)?;
            }
            let printed = if json_mode {
                let mut d = doc;
                d["design"] = json!(result.design);
                render(true, String::new(), d)
            } else {
                csv.clone()
            };
            match out {
                Some(path) => {
                    write_file(path, &csv)?;
                    if json_mode {
                        printed
                    } else {
                        String::new()
                    }
                }
                None => printed,
            }
        }
        Command::Wlp { design } => {
            let file = load(design)?;
            let w = wlp::wlp_any(&file.design)?;
            let doc = json!({ "pure": w.pure(), "mixed": w.mixed(), "interleaved": w.interleaved() });
            render(json_mode, wlp_csv(&w), doc)
        }
        Command::Indicator { design } => {
            let file = load(design)?;
            let spec = match &file.design {
                AnyDesign::Unblocked(d) => IndicatorSpectrum::of_unblocked(d)?,
                AnyDesign::Blocked(d) => IndicatorSpectrum::of_design(d)?,
            };
            let words = spec.words();
            let m = spec.m();
            let mut csv = String::new();
            for j in 1..=m {
                write!(csv, "t{j},").unwrap();
            }
            csv.push_str("s,coefficient,ratio_sq\n");
            for w in &words {
                for t in &w.t {
                    write!(csv, "{t},").unwrap();
                }
                writeln!(csv, "{},{},{}", w.s, w.coefficient, w.ratio_sq).unwrap();
            }
            render(json_mode, csv, json!({ "a0": spec.a0(), "words": words }))
        }
        Command::Correlate { design, order } => {
            let file = load(design)?;
            let x = model_matrix(&file.design.to_blocked(), (*order).into())?;
            let c = correlation_matrix(&x)?;
            let doc = json!(c);
            render(json_mode, c.to_csv(), doc)
        }
        Command::Fit { design, alpha, order } => {
            let file = load(design)?;
            let Some(y) = &file.response else {
                return Ok(Outcome::Invalid(String::new(), "error: design file has no y column".into()));
            };
            let x = model_matrix(&file.design.to_blocked(), (*order).into())?;
            let fit = forward_select(&x, y, *alpha)?;
            let mut csv = String::from("term,estimate,std_error,t,p\n");
            fit_csv("", &fit.fit, &mut csv);
            let doc = json!({
                "selected": fit.selected,
                "entry_p_values": fit.entry_p_values,
                "df": fit.fit.df,
                "sigma2": fit.fit.sigma2,
                "terms": fit_rows(&fit.fit),
            });
            render(json_mode, csv, doc)
        }
        Command::Simulate { design, p, reps, alpha, sigma, seed, per_rep } => {
            let file = load(design)?;
            let cfg = SimConfig {
                design: file.design.to_blocked(),
                p: *p,
                reps: *reps,
                alpha: *alpha,
                sigma: *sigma,
                seed: *seed,
            };
            let report = simulate(&cfg)?;
            if let Some(path) = per_rep {
                write_file(path, &report.per_rep_csv())?;
            }
            render(json_mode, report.to_csv(), json!(report))
        }
        Command::CaseStudy { regenerate, seed, sigma, alpha } => {
            case_study(json_mode, *regenerate, *seed, *sigma, *alpha)?
        }
        Command::Validate { design } => {
            let text = std::fs::read_to_string(&design.design)
                .with_context(|| format!("reading {}", design.design.display()))?;
            return Ok(match DesignFile::parse(&text) {
                Ok(file) => {
                    let d = &file.design;
                    let blocks = match d {
                        AnyDesign::Blocked(b) => b.k(),
                        AnyDesign::Unblocked(_) => 1,
                    };
                    let doc = json!({ "valid": true, "m": d.m(), "k": blocks, "runs": d.n_runs() });
                    let csv = format!("valid,m,k,runs\ntrue,{},{},{}\n", d.m(), blocks, d.n_runs());
                    Outcome::Ok(render(json_mode, csv, doc))
                }
                Err(e @ (Error::Validation(_) | Error::Parse { .. })) => {
                    let msg = e.to_string();
                    let doc = json!({ "valid": false, "error": msg });
                    let csv = format!("valid,error\nfalse,\"{}\"\n", msg.replace('"', "'"));
                    Outcome::Invalid(render(json_mode, csv, doc), format!("invalid design: {msg}"))
                }
                Err(e) => return Err(e.into()),
            });
        }
    };
    Ok(Outcome::Ok(text))
}

fn case_study(json_mode: bool, regenerate: bool, seed: u64, sigma: f64, alpha: f64) -> Result<String> {
    if regenerate && (sigma.is_nan() || sigma <= 0.0) {
        bail!(Error::ConfigInvalid(format!("sigma = {sigma} must be positive")));
    }
    let mut fits = Vec::new();
    let mut csv = String::from("data,term,estimate,std_error,t,p\n");
    let mut fitted = Vec::new();
    for (offset, name) in [(0u64, "tb_unblocked"), (1, "tb12")] {
        let file = fixtures::load(name)?;
        let design = file.design.to_blocked();
        let y = if regenerate {
            case_study_responses(&design, &CASE_STUDY_MODEL, &CASE_STUDY_BATCH, sigma, seed ^ offset)?
        } else {
            file.response.clone().expect("case-study fixtures carry responses")
        };
        let x = model_matrix(&design, ModelOrder::SecondOrder)?;
        let fit = forward_select(&x, &y, alpha)?;
        fit_csv(&format!("{name},"), &fit.fit, &mut csv);
        fits.push(json!({ "data": name, "selected": fit.selected, "terms": fit_rows(&fit.fit) }));
        fitted.push((name, fit.effects()));
    }

    csv.push_str("\nmodel,sequence,component_order,predicted\n");
    let mut best = Vec::new();
    let mut emit = |model: &str, effects: &[(String, f64)]| -> Result<()> {
        let ranked = rank_sequences(effects, 5)?;
        let winners = argmax_sequences(effects, 5)?;
        let mut rows = Vec::new();
        for z in &winners {
            let v = ranked.iter().find(|(r, _)| r == z).map(|(_, v)| *v).unwrap();
            let order = component_order(z).iter().map(|c| format!("Z{c}")).collect::<Vec<_>>().join("->");
            writeln!(csv, "{model},\"{}\",{order},{v}", format_sequence(z)).unwrap();
            rows.push(json!({ "sequence": z, "component_order": component_order(z), "predicted": v }));
        }
        best.push(json!({ "model": model, "maximizers": rows }));
        Ok(())
    };
    let truth: Vec<(String, f64)> = CASE_STUDY_MODEL.iter().map(|(l, b)| (l.to_string(), *b)).collect();
    emit("true", &truth)?;
    for (name, effects) in &fitted {
        emit(&format!("fit:{name}"), effects)?;
    }
    let doc = json!({ "regenerated": regenerate, "seed": seed, "fits": fits, "maximizers": best });
    Ok(render(json_mode, csv, doc))
}
