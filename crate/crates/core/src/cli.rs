//! Command-line front end. `run` is what the binary calls; it writes the
//! report to `out`, diagnostics to `err`, and returns the exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotic::{asymptotic_set, AsymptoticSet};
use crate::error::{Error, Result};
use crate::facon::FaconSearch;
use crate::groebner::{Ideal, MonomialOrder};
use crate::parser::parse_map;
use crate::poly::{Polynomial, PolynomialMap};
use crate::stratify::{check_frontier, partition_by_facons, render_dot, star_stratify, FrontierReport, Stratification};
use crate::tube::{coverage_check, verify_thom_mather, Grid, SkippedPair, TubeReport};

pub const SCHEMA: &str = "facons-kit/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "facons", version, about = "Asymptotic sets and façon stratifications of polynomial maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Lex,
    Grevlex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full pipeline: asymptotic set, façons, star strata, frontier check.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
        weight_box: i64,
        /// Monomial order of the printed stratum equations.
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Components of the asymptotic set.
    AsymptoticSet {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Façons of every cell of the asymptotic set.
    Facons {
        file: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
        weight_box: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tube checks on every frontier edge plus a coverage check.
    TubeVerify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
        weight_box: i64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

fn load(path: &PathBuf) -> Result<PolynomialMap> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_map(&text)?.1)
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(ToString::to_string).collect()
}

fn sf_json(sf: &AsymptoticSet) -> Value {
    json!(sf
        .components
        .iter()
        .map(|c| json!({
            "polynomial": c.polynomial.to_string(),
            "coordinates": c.coordinates.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "possibly_reducible": c.possibly_reducible,
        }))
        .collect::<Vec<_>>())
}

fn map_json(f: &PolynomialMap) -> Value {
    json!({
        "source": f.source().names(),
        "target": f.target().names(),
        "components": strings(f.components()),
    })
}

fn equations_in(ideal: &Ideal, order: OrderArg) -> Result<Vec<String>> {
    let order = match order {
        OrderArg::Lex => MonomialOrder::Lex,
        OrderArg::Grevlex => MonomialOrder::GrevLex,
    };
    let gb = ideal.clone().with_order(order)?.groebner()?;
    Ok(gb.polynomials().iter().map(|p| p.primitive().to_string()).collect())
}

/// Everything `analyze` computes.
pub struct Analysis {
    pub map: PolynomialMap,
    pub sf: AsymptoticSet,
    pub strata: Stratification,
    pub frontier: FrontierReport,
}

pub fn analyze(f: PolynomialMap, weight_box: i64) -> Result<Analysis> {
    let sf = asymptotic_set(&f)?;
    let search = FaconSearch::new(&f, weight_box)?;
    let strata = star_stratify(&sf, &search)?;
    let frontier = check_frontier(&strata)?;
    Ok(Analysis {
        map: f,
        sf,
        strata,
        frontier,
    })
}

impl Analysis {
    pub fn ok(&self) -> bool {
        self.frontier.is_clean() && self.strata.strata.iter().all(|s| !s.incomplete)
    }

    pub fn to_json(&self, weight_box: i64, order: OrderArg, seed: u64) -> Result<Value> {
        let st = &self.strata.strata;
        let mut strata = Vec::new();
        for s in st {
            strata.push(json!({
                "label": s.label,
                "dimension": s.dimension,
                "equations": equations_in(&s.equations, order)?,
                "non_equations": strings(&s.non_equations),
                "facons": s.facon_set.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "order": s.order(),
                "witness_weights": s.witnesses.iter().map(|w| w.weights.clone()).collect::<Vec<_>>(),
                "cell": s.cell,
                "incomplete": s.incomplete,
            }));
        }
        let edges: Vec<Value> = self
            .strata
            .frontier_edges
            .iter()
            .map(|&(lo, up)| json!({"lower": st[lo].label, "upper": st[up].label}))
            .collect();
        Ok(json!({
            "schema": SCHEMA,
            "command": "analyze",
            "settings": {
                "weight_box": weight_box,
                "order": match order { OrderArg::Lex => "lex", OrderArg::Grevlex => "grevlex" },
                "seed": seed,
            },
            "map": map_json(&self.map),
            "asymptotic_set": sf_json(&self.sf),
            "strata": strata,
            "frontier_edges": edges,
            "frontier_check": self.frontier,
            "ok": self.ok(),
        }))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("asymptotic set:\n");
        for c in &self.sf.components {
            out.push_str(&format!("  {} = 0\n", c.polynomial));
        }
        out.push_str("strata:\n");
        for s in &self.strata.strata {
            out.push_str(&format!(
                "  {}  dim {}  {}  {{{}}}{}{}\n",
                s.label,
                s.dimension,
                s.facon_text(),
                strings(s.equations.generators()).join(", "),
                if s.non_equations.is_empty() {
                    String::new()
                } else {
                    format!(" minus {{{}}}", strings(&s.non_equations).join(", "))
                },
                if s.incomplete { "  (incomplete)" } else { "" }
            ));
        }
        out.push_str("frontier:\n");
        for &(lo, up) in &self.strata.frontier_edges {
            out.push_str(&format!("  {} < {}\n", self.strata.strata[lo].label, self.strata.strata[up].label));
        }
        out.push_str(&format!(
            "{} pairs checked, {} violations\n",
            self.frontier.pairs_checked,
            self.frontier.violations.len()
        ));
        for v in &self.frontier.violations {
            out.push_str(&format!("  {}\n", serde_json::to_string(v).unwrap_or_default()));
        }
        out
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn cmd_analyze(file: &PathBuf, weight_box: i64, order: OrderArg, format: Format, seed: u64) -> Result<(String, i32)> {
    let a = analyze(load(file)?, weight_box)?;
    let code = if a.ok() { EXIT_OK } else { EXIT_VIOLATIONS };
    let text = match format {
        Format::Json => pretty(&a.to_json(weight_box, order, seed)?),
        Format::Dot => render_dot(&a.strata),
        Format::Text => a.to_text(),
    };
    Ok((text, code))
}

fn cmd_asymptotic_set(file: &PathBuf, format: Format) -> Result<(String, i32)> {
    let f = load(file)?;
    let sf = asymptotic_set(&f)?;
    let text = match format {
        Format::Text | Format::Dot => sf.components.iter().map(|c| format!("{} = 0\n", c.polynomial)).collect(),
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "command": "asymptotic-set",
            "map": map_json(&f),
            "asymptotic_set": sf_json(&sf),
        })),
    };
    Ok((text, EXIT_OK))
}

fn cmd_facons(file: &PathBuf, weight_box: i64, format: Format) -> Result<(String, i32)> {
    let f = load(file)?;
    let sf = asymptotic_set(&f)?;
    let search = FaconSearch::new(&f, weight_box)?;
    let parts = partition_by_facons(&sf, &search)?;
    let text = match format {
        Format::Text | Format::Dot => parts
            .iter()
            .enumerate()
            .map(|(k, p)| {
                format!(
                    "cell {k}  dim {}  {{{}}}  {}\n",
                    p.cell.dim,
                    strings(p.cell.closure.generators()).join(", "),
                    p.labels().join(" ")
                )
            })
            .collect(),
        Format::Json => {
            let cells: Vec<Value> = parts
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    json!({
                        "index": k,
                        "dimension": p.cell.dim,
                        "equations": strings(p.cell.closure.generators()),
                        "non_equations": strings(&p.cell.opens),
                        "facons": p.facons.iter().map(|w| json!({
                            "facon": w.facon.to_string(),
                            "weights": w.weights,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({
                "schema": SCHEMA,
                "command": "facons",
                "settings": {"weight_box": weight_box},
                "map": map_json(&f),
                "cells": cells,
            }))
        }
    };
    Ok((text, EXIT_OK))
}

/// Pairwise checks on all frontier edges; pairs that cannot be set up are
/// skipped with a warning.
pub fn tube_report(a: &Analysis, tol: f64, trials: usize, seed: u64, warn: &mut dyn Write) -> Result<TubeReport> {
    let grid = Grid { tol, ..Grid::default() };
    let st = &a.strata.strata;
    let mut report = TubeReport::default();
    for &(lo, up) in &a.strata.frontier_edges {
        match verify_thom_mather(&a.map, &a.sf, &st[lo], &st[up], &grid) {
            Ok(p) => report.pairs.push(p),
            Err(e @ Error::ResourceLimit(_)) => return Err(e),
            Err(e) => {
                let _ = writeln!(warn, "warning: skipped {} < {}: {e}", st[lo].label, st[up].label);
                report.skipped.push(SkippedPair {
                    lower: st[lo].label.clone(),
                    upper: st[up].label.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    report.coverage = Some(coverage_check(&a.map, &a.sf, trials, seed)?);
    Ok(report)
}

fn cmd_tube_verify(
    file: &PathBuf,
    tol: f64,
    weight_box: i64,
    trials: usize,
    seed: u64,
    format: Format,
    err: &mut dyn Write,
) -> Result<(String, i32)> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let a = analyze(load(file)?, weight_box)?;
    let report = tube_report(&a, tol, trials, seed, err)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS };
    let text = match format {
        Format::Json | Format::Dot => {
            let mut v = serde_json::to_value(&report).map_err(|e| Error::Precondition(e.to_string()))?;
            v["schema"] = json!(SCHEMA);
            v["command"] = json!("tube-verify");
            v["settings"] = json!({"tol": tol, "weight_box": weight_box, "trials": trials, "seed": seed});
            pretty(&v)
        }
        Format::Text => {
            let mut s = String::new();
            for p in &report.pairs {
                s.push_str(&format!(
                    "{} < {}  {} < {}  pi {:.3e}  rho {:.3e}  rank {}/{}  samples {}  {}\n",
                    p.lower,
                    p.upper,
                    p.lower_facon,
                    p.upper_facon,
                    p.max_pi_residual,
                    p.max_rho_residual,
                    p.min_rank,
                    p.expected_rank,
                    p.samples,
                    if p.passed() { "ok" } else { "FAIL" }
                ));
            }
            for k in &report.skipped {
                s.push_str(&format!("{} < {}  skipped: {}\n", k.lower, k.upper, k.reason));
            }
            if let Some(c) = &report.coverage {
                s.push_str(&format!("coverage {}/{}\n", c.covered, c.trials));
            }
            s
        }
    };
    Ok((text, code))
}

/// Parse arguments and run one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Analyze {
            file,
            weight_box,
            order,
            format,
            seed,
        } => cmd_analyze(file, *weight_box, *order, *format, *seed),
        Command::AsymptoticSet { file, format } => cmd_asymptotic_set(file, *format),
        Command::Facons {
            file,
            weight_box,
            format,
        } => cmd_facons(file, *weight_box, *format),
        Command::TubeVerify {
            file,
            tol,
            weight_box,
            trials,
            seed,
            format,
        } => cmd_tube_verify(file, *tol, *weight_box, *trials, *seed, *format, err),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
