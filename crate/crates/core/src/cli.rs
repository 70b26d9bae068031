//! Command implementations behind the `multiapolar` binary. Every command
//! returns a [`CaseReport`]; the process exits with 0 iff all checks pass.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::apolarity::{apolarity_lemma_check, degrees_below, generation_check, is_apolar, orthogonal_dimension};
use crate::error::Result;
use crate::io::{parse_pair, ParsedForm, ParsedScheme};
use crate::multigraded::{random_form, Degree, Side, Surface};
use crate::report::{CaseReport, Tolerances};
use crate::rng::derive_seed;
use crate::secant::certify_rank;
use crate::{case22, case33, casef1};

#[derive(Debug, Parser)]
#[command(name = "multiapolar", version, about = "Multigraded apolarity on P1xP1 and F1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Relative singular-value threshold for numeric ranks.
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub tol_rank: f64,
    /// Residual threshold for decompositions.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol_res: f64,
    #[arg(long, default_value_t = 64, global = true)]
    pub restarts: usize,
    /// Number of sampled schemes (per-command default when omitted).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            tol_rank: self.tol_rank,
            tol_res: self.tol_res,
            restarts: self.restarts,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions of `T_B` and `S_{A-B}` for every effective `B <= A`.
    Dims { surface: Surface, degree: Degree },
    /// Orthogonal-ideal dimensions and generation checks for a random form.
    Profile { surface: Surface, degree: Degree },
    /// Generic rank from Terracini's lemma, against the closed formula.
    Rank {
        surface: Surface,
        degree: Degree,
        /// Number of point streams per secant dimension.
        #[arg(long, default_value_t = 3)]
        streams: usize,
    },
    /// Bidegree (2,2) pipeline.
    Case22,
    /// Bidegree (3,3) pipeline.
    Case33,
    /// Cubic forms on F1.
    Casef1,
    /// Apolarity of a point scheme to a form, both read from JSON files.
    Check { form: PathBuf, scheme: PathBuf },
}

pub fn cmd_dims(surface: Surface, a: Degree, tol: &Tolerances) -> CaseReport {
    let mut report = CaseReport::new("dims", Some(surface), Some(a), 0, tol.clone());
    let rows: Vec<_> = degrees_below(surface, a)
        .into_iter()
        .map(|b| json!({ "b": b.to_string(), "dim_t": surface.dim(b), "dim_s_complement": surface.dim(a - b) }))
        .collect();
    report.check("table", true, json!({ "dim_s": surface.dim(a), "rows": rows }));
    report
}

fn dims_table(f: &crate::multigraded::MultiForm<crate::linalg::Rational>) -> Vec<serde_json::Value> {
    let (s, a) = (f.surface(), f.degree());
    degrees_below(s, a)
        .into_iter()
        .map(|b| {
            json!({
                "b": b.to_string(),
                "dim_t": s.dim(b),
                "dim_s_complement": s.dim(a - b),
                "dim_i": orthogonal_dimension(f, b),
            })
        })
        .collect()
}

pub fn cmd_profile(surface: Surface, a: Degree, seed: u64, tol: &Tolerances) -> CaseReport {
    let mut report = CaseReport::new("profile", Some(surface), Some(a), seed, tol.clone());
    let t = Instant::now();
    match (surface, a) {
        (Surface::P1xP1, Degree(2, 2)) => match case22::general_form(seed) {
            Ok((f, ctx, s, rejections)) => {
                report.form_seed = Some(s);
                report.rejections = rejections;
                report.check("profile", true, json!({ "dims": ctx.dims, "table": dims_table(&f) }));
                let g = generation_check(&f, &[Degree(2, 1)], Some(&[Degree(2, 2)]));
                let ok = g.all_ok() && g.entry(Degree(2, 2)).is_some_and(|e| e.generated_dim == 8);
                report.check("generation", ok, json!(g));
            }
            Err(e) => report.reject("profile", json!({ "error": e.to_string() })),
        },
        (Surface::P1xP1, Degree(3, 3)) => match case33::general_form(seed) {
            Ok((f, s, rejections)) => {
                report.form_seed = Some(s);
                report.rejections = rejections;
                report.check("profile", true, json!({ "table": dims_table(&f) }));
                let g = generation_check(
                    &f,
                    &[Degree(2, 2), Degree(3, 1), Degree(1, 3)],
                    Some(&[Degree(2, 3), Degree(3, 2), Degree(3, 3)]),
                );
                report.check("generation", g.all_ok(), json!(g));
            }
            Err(e) => report.reject("profile", json!({ "error": e.to_string() })),
        },
        (Surface::F1, Degree(3, 6)) => match casef1::general_form(seed) {
            Ok((ctx, s, rejections)) => {
                report.form_seed = Some(s);
                report.rejections = rejections;
                report.check("profile", ctx.dims.ok(), json!({ "dims": ctx.dims, "table": dims_table(&ctx.f) }));
                report.check(
                    "pencil",
                    ctx.pencil.len() == 2,
                    json!({ "dim": ctx.dims.i_2e_3f, "basis": ctx.pencil.iter().map(|g| g.display()).collect::<Vec<_>>() }),
                );
            }
            Err(e) => report.reject("profile", json!({ "error": e.to_string() })),
        },
        _ => {
            let f = random_form(surface, Side::S, a, seed);
            report.form_seed = Some(seed);
            report.check("table", true, json!({ "table": dims_table(&f) }));
        }
    }
    report.time("profile", t);
    report
}

pub fn cmd_rank(surface: Surface, a: Degree, seed: u64, streams: usize, tol: &Tolerances) -> CaseReport {
    let mut report = CaseReport::new("rank", Some(surface), Some(a), seed, tol.clone());
    let t = Instant::now();
    let seeds: Vec<u64> = (0..streams.max(1) as u64).map(|i| derive_seed(seed, i)).collect();
    let cert = certify_rank(surface, a, &seeds);
    report.check("rank", cert.agrees(), json!(cert));
    report.time("rank", t);
    report
}

/// Apolarity verdicts for a form and a scheme given as JSON text. Exact
/// pairs also run the apolarity lemma in every degree.
pub fn cmd_check(form_text: &str, scheme_text: &str, tol: &Tolerances) -> Result<CaseReport> {
    let (f, gamma) = parse_pair(form_text, scheme_text)?;
    let mut report = CaseReport::new("check", Some(f.surface()), None, 0, tol.clone());
    match (&f, &gamma) {
        (ParsedForm::Exact(f), ParsedScheme::Exact(g)) => {
            report.degree = Some(f.degree());
            let v = is_apolar(g, f, crate::apolarity::APOLARITY_TOL)?;
            let lemma = apolarity_lemma_check(g, f);
            report.check("apolar", v.apolar, json!(v));
            report.check("lemma", lemma.equivalent() && lemma.top_degree == v.apolar, json!(lemma));
        }
        _ => {
            let fc = f.to_complex();
            report.degree = Some(fc.degree());
            let v = is_apolar(&gamma.to_complex(), &fc, crate::apolarity::APOLARITY_TOL)?;
            report.check("apolar", v.apolar, json!(v));
        }
    }
    Ok(report)
}

pub fn execute(cli: &Cli) -> Result<CaseReport> {
    let c = &cli.common;
    let tol = c.tolerances();
    Ok(match &cli.command {
        Command::Dims { surface, degree } => cmd_dims(*surface, *degree, &tol),
        Command::Profile { surface, degree } => cmd_profile(*surface, *degree, c.seed, &tol),
        Command::Rank {
            surface,
            degree,
            streams,
        } => cmd_rank(*surface, *degree, c.seed, *streams, &tol),
        Command::Case22 => case22::run(c.seed, c.samples.unwrap_or(12), &tol),
        Command::Case33 => case33::run(c.seed, c.samples.unwrap_or(10), &tol),
        Command::Casef1 => casef1::run(c.seed, c.samples.unwrap_or(10), &tol),
        Command::Check { form, scheme } => {
            let read = |p: &PathBuf| {
                std::fs::read_to_string(p)
                    .map_err(|e| crate::Error::Invalid(format!("cannot read {}: {e}", p.display())))
            };
            cmd_check(&read(form)?, &read(scheme)?, &tol)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from(["multiapolar", "profile", "f1", "3,6", "--seed", "7"]).unwrap();
        assert_eq!(cli.common.seed, 7);
        assert!(matches!(
            cli.command,
            Command::Profile {
                surface: Surface::F1,
                degree: Degree(3, 6)
            }
        ));
        let cli = Cli::try_parse_from(["multiapolar", "--samples", "3", "case22", "--tol-res", "1e-10"]).unwrap();
        assert_eq!(cli.common.samples, Some(3));
        assert_eq!(cli.common.tol_res, 1e-10);
    }

    #[test]
    fn dims_table_22() {
        let r = cmd_dims(Surface::P1xP1, Degree(2, 2), &Tolerances::default());
        let rows = r.checks[0].payload["rows"].as_array().unwrap().clone();
        let row = rows.iter().find(|x| x["b"] == "(2,1)").unwrap();
        assert_eq!(row["dim_t"], 6);
    }

    #[test]
    fn profile_f1_pencil() {
        let r = cmd_profile(Surface::F1, Degree(3, 6), 7, &Tolerances::default());
        assert!(r.all_pass());
        assert_eq!(r.get("pencil").unwrap().payload["dim"], 2);
    }
}
