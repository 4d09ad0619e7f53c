//! `deephole`: deep-hole lattices, sequences, isogenies and counts from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use deephole::corpus;
use deephole::counting::{arc_point_from_slope, counting_report, enumerate_pq, ArcPoint, Slope};
use deephole::isogeny::{isogeny_chain, j_invariant, IsogenyStep, JValue};
use deephole::sequence::{deep_hole_sequence, DeepHoleSequence};
use deephole::{ClassLabel, Error, ExactReal, Lattice2, Tau};
use serde::Serialize;

mod output;
mod svg;

use output::{csv, fmt_float, json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Figure {
    /// Strip with the well-rounded arc and the semi-stable band.
    Domain,
    /// Arc of classes with a prescribed deep hole.
    Arc,
}

#[derive(Parser)]
#[command(name = "deephole", version, about = "Exact deep-hole lattices of planar lattices")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// q-expansion terms for j-invariants.
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(u16).range(8..=200))]
    terms: u16,
    /// Seed for `--random` inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce and classify `tau` or a basis `x1,y1;x2,y2`.
    Classify {
        input: Option<String>,
        #[arg(long)]
        random: Option<usize>,
    },
    /// Fundamental deep hole, deep-hole lattice and strip representatives.
    Hole {
        input: Option<String>,
        #[arg(long)]
        random: Option<usize>,
    },
    /// Deep-hole sequence from `tau_0` to a well-rounded class.
    Sequence {
        tau: Option<String>,
        /// Plot the sequence in the strip.
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        random: Option<usize>,
    },
    /// Isogeny degrees along an arithmetic sequence, with j-invariants.
    Isogeny {
        tau: Option<String>,
        #[arg(long)]
        random: Option<usize>,
    },
    /// Count classes with deep hole `1/2 + t i` up to height T.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long = "T")]
        t_max: Option<u64>,
        /// Comma-separated list of heights.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<u64>,
        /// Include the primitive pairs; switches the output to JSON.
        #[arg(long)]
        emit_points: bool,
    },
    /// Points of the prescribed-hole arc for given slopes (`inf` for vertical).
    Arc {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, value_delimiter = ',', required = true)]
        slopes: Vec<String>,
    },
    /// Draw a figure as SVG.
    Plot {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        t: String,
        #[arg(long, value_delimiter = ',')]
        slopes: Vec<String>,
    },
}

enum Failure {
    Usage(String),
    Domain(Box<Error>),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(Box::new(e)),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T> {
    s.parse::<T>().map_err(Failure::from)
}

fn parse_vec(s: &str) -> Result<[ExactReal; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::Usage(format!("vector `{s}` needs two comma-separated coordinates")));
    }
    Ok([parse(parts[0])?, parse(parts[1])?])
}

/// Lattice of `tau`, or of a basis written `x1,y1;x2,y2`.
fn parse_lattice(s: &str) -> Result<Lattice2> {
    match s.split_once(';') {
        Some((v1, v2)) => Ok(Lattice2::new(parse_vec(v1)?, parse_vec(v2)?)?),
        None => Ok(parse::<Tau>(s)?.lattice()),
    }
}

/// Inputs from the positional argument or from the seeded corpus.
fn inputs<T>(
    given: Option<String>,
    random: Option<usize>,
    parse_one: impl Fn(&str) -> Result<T>,
    generate: impl Fn(usize) -> Vec<(String, T)>,
) -> Result<(Vec<(String, T)>, bool)> {
    match (given, random) {
        (Some(s), None) => Ok((vec![(s.clone(), parse_one(&s)?)], false)),
        (None, Some(n)) => Ok((generate(n), true)),
        (Some(_), Some(_)) => Err(Failure::Usage("give an input or --random, not both".into())),
        (None, None) => Err(Failure::Usage("missing input (or use --random N)".into())),
    }
}

fn one_or_many<T: Serialize>(items: &[T], many: bool) -> String {
    if many {
        json(&items)
    } else {
        json(&items[0])
    }
}

fn require(format: Format, allowed: &[Format]) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("format {format:?} is not available for this command")))
    }
}

#[derive(Serialize)]
struct Classified {
    input: String,
    #[serde(flatten)]
    label: ClassLabel,
}

fn classify(cli: &Cli, input: Option<String>, random: Option<usize>) -> Result<String> {
    let format = cli.format.unwrap_or(Format::Json);
    require(format, &[Format::Json, Format::Csv])?;
    let seed = cli.seed;
    let (items, many) = inputs(input, random, parse_lattice, |n| {
        corpus::arithmetic_corpus(seed, n)
            .into_iter()
            .map(|(_, l)| (serde_json::to_string(&l).expect("serializable"), l))
            .collect()
    })?;
    let mut out = Vec::new();
    for (name, l) in items {
        let label = l.reduce()?.classify()?;
        out.push(Classified { input: name, label });
    }
    Ok(match format {
        Format::Csv => csv(
            &["input", "well_rounded", "semi_stable", "arithmetic", "satisfies_wr_criterion"],
            &out.iter()
                .map(|c| {
                    vec![
                        c.input.clone(),
                        c.label.well_rounded.to_string(),
                        c.label.semi_stable.to_string(),
                        c.label.arithmetic.to_string(),
                        c.label.satisfies_wr_criterion.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        _ => one_or_many(&out, many),
    })
}

#[derive(Serialize)]
struct HoleReport {
    input: String,
    reduced: Lattice2,
    label: ClassLabel,
    deep_hole: [ExactReal; 2],
    covering_radius_sq: ExactReal,
    deep_hole_lattice: Lattice2,
    /// `None` when the class needs two different radicands.
    f_representative: Option<Tau>,
    deep_hole_class: Option<Tau>,
}

fn representative(l: &Lattice2) -> Result<Option<Tau>> {
    match l.f_representative() {
        Ok(t) => Ok(Some(t)),
        Err(Error::UnsupportedField(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn hole(cli: &Cli, input: Option<String>, random: Option<usize>) -> Result<String> {
    let format = cli.format.unwrap_or(Format::Json);
    require(format, &[Format::Json, Format::Csv])?;
    let seed = cli.seed;
    let (items, many) = inputs(input, random, parse_lattice, |n| {
        corpus::arithmetic_corpus(seed, n)
            .into_iter()
            .map(|(_, l)| (serde_json::to_string(&l).expect("serializable"), l))
            .collect()
    })?;
    let mut out = Vec::new();
    for (name, l) in items {
        let reduced = l.reduce()?;
        let h = reduced.deep_hole_lattice()?;
        out.push(HoleReport {
            input: name,
            label: reduced.classify()?,
            deep_hole: reduced.fundamental_deep_hole()?,
            covering_radius_sq: reduced.covering_radius_sq()?,
            f_representative: representative(&reduced)?,
            deep_hole_class: representative(&h)?,
            deep_hole_lattice: h,
            reduced,
        });
    }
    let opt = |t: &Option<Tau>| t.as_ref().map(|t| t.to_string()).unwrap_or_default();
    Ok(match format {
        Format::Csv => csv(
            &["input", "deep_hole_x", "deep_hole_y", "covering_radius_sq", "f_representative", "deep_hole_class"],
            &out.iter()
                .map(|h| {
                    vec![
                        h.input.clone(),
                        h.deep_hole[0].to_string(),
                        h.deep_hole[1].to_string(),
                        h.covering_radius_sq.to_string(),
                        opt(&h.f_representative),
                        opt(&h.deep_hole_class),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        _ => one_or_many(&out, many),
    })
}

fn random_taus(seed: u64, n: usize, b_max: f64) -> Vec<(String, Tau)> {
    corpus::tau_corpus(seed, n, b_max)
        .into_iter()
        .map(|t| (t.to_string(), t))
        .collect()
}

fn sequence(cli: &Cli, tau: Option<String>, svg_flag: bool, random: Option<usize>) -> Result<String> {
    let format = if svg_flag { Format::Svg } else { cli.format.unwrap_or(Format::Json) };
    if svg_flag && cli.format.is_some_and(|f| f != Format::Svg) {
        return Err(Failure::Usage("--svg conflicts with --format".into()));
    }
    let seed = cli.seed;
    let (items, many) = inputs(tau, random, parse::<Tau>, |n| random_taus(seed, n, 1e4))?;
    let seqs = items
        .iter()
        .map(|(_, t)| deep_hole_sequence(t))
        .collect::<std::result::Result<Vec<DeepHoleSequence>, Error>>()?;
    Ok(match format {
        Format::Json => one_or_many(&seqs, many),
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, s) in seqs.iter().enumerate() {
                for (k, t) in s.taus.iter().enumerate() {
                    rows.push(vec![
                        i.to_string(),
                        k.to_string(),
                        t.a().to_string(),
                        t.b().to_string(),
                        fmt_float(t.b().to_f64()),
                    ]);
                }
            }
            csv(&["index", "k", "a", "b", "b_approx"], &rows)
        }
        Format::Svg => {
            let points: Vec<(f64, f64, String)> = seqs
                .iter()
                .flat_map(|s| s.taus.iter())
                .map(|t| {
                    let (a, b) = t.to_f64();
                    (a, b, t.to_string())
                })
                .collect();
            svg::domain(&points)
        }
    })
}

#[derive(Serialize)]
struct StepReport {
    #[serde(flatten)]
    step: IsogenyStep,
    /// `j(tau_k)`.
    j: JValue,
    /// `j` at the strip representative of the well-rounded end, on the last step.
    #[serde(skip_serializing_if = "Option::is_none")]
    terminal: Option<Terminal>,
}

#[derive(Serialize)]
struct Terminal {
    representative: Tau,
    j: JValue,
    j_over_1728: f64,
}

fn isogeny(cli: &Cli, tau: Option<String>, random: Option<usize>) -> Result<String> {
    let format = cli.format.unwrap_or(Format::Json);
    require(format, &[Format::Json, Format::Csv])?;
    let terms = cli.terms as usize;
    let seed = cli.seed;
    let (items, many) = inputs(tau, random, parse::<Tau>, |n| random_taus(seed, n, 100.0))?;
    let mut all = Vec::new();
    for (_, t) in &items {
        let seq = deep_hole_sequence(t)?;
        let steps = isogeny_chain(&seq)?;
        let last = steps.len() - 1;
        let mut reports = Vec::new();
        for (k, step) in steps.into_iter().enumerate() {
            let terminal = if k == last {
                let rep = seq.terminal().lattice().f_representative()?;
                let j = j_invariant(&rep, terms)?;
                Some(Terminal {
                    j_over_1728: j.normalized().re,
                    representative: rep,
                    j,
                })
            } else {
                None
            };
            reports.push(StepReport {
                j: j_invariant(&seq.taus[k], terms)?,
                step,
                terminal,
            });
        }
        all.push(reports);
    }
    Ok(match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, reports) in all.iter().enumerate() {
                for r in reports {
                    rows.push(vec![
                        i.to_string(),
                        r.step.k.to_string(),
                        r.step.d_k.to_string(),
                        r.step.ell.to_string(),
                        r.step.delta.to_string(),
                        fmt_float(r.step.bound),
                        r.step.within_bound.to_string(),
                        fmt_float(r.j.re),
                        fmt_float(r.j.im),
                    ]);
                }
            }
            csv(
                &["index", "k", "d_k", "ell", "delta", "bound", "within_bound", "j_re", "j_im"],
                &rows,
            )
        }
        _ => one_or_many(&all, many),
    })
}

#[derive(Serialize)]
struct CountOut {
    #[serde(flatten)]
    report: deephole::counting::CountingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<(u64, u64)>>,
}

fn count(cli: &Cli, t: &str, t_max: Option<u64>, sweep: Vec<u64>, emit_points: bool) -> Result<String> {
    let format = match (cli.format, emit_points) {
        (None, true) | (Some(Format::Json), _) => Format::Json,
        (None, false) | (Some(Format::Csv), false) => Format::Csv,
        (Some(Format::Csv), true) => return Err(Failure::Usage("--emit-points needs JSON output".into())),
        (Some(f), _) => return Err(Failure::Usage(format!("format {f:?} is not available for count"))),
    };
    let t: ExactReal = parse(t)?;
    let heights: Vec<u64> = match (t_max, sweep.is_empty()) {
        (Some(x), true) => vec![x],
        (None, false) => sweep,
        _ => return Err(Failure::Usage("give exactly one of --T and --sweep".into())),
    };
    let mut out = Vec::new();
    for h in heights {
        let report = counting_report(&t, h)?;
        let points = if emit_points {
            enumerate_pq(&t, h, true)?.points
        } else {
            None
        };
        out.push(CountOut { report, points });
    }
    Ok(match format {
        Format::Csv => csv(
            &["T", "count", "bound", "ratio"],
            &out.iter()
                .map(|c| {
                    vec![
                        c.report.t_max.to_string(),
                        c.report.count.to_string(),
                        fmt_float(c.report.bound),
                        fmt_float(c.report.ratio),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        _ => json(&out),
    })
}

fn arc_points(t: &ExactReal, slopes: &[String]) -> Result<Vec<ArcPoint>> {
    slopes
        .iter()
        .map(|s| Ok(arc_point_from_slope(&parse::<Slope>(s)?, t)?))
        .collect()
}

fn arc(cli: &Cli, t: &str, slopes: &[String]) -> Result<String> {
    let format = cli.format.unwrap_or(Format::Json);
    require(format, &[Format::Json, Format::Csv])?;
    let t: ExactReal = parse(t)?;
    let points = arc_points(&t, slopes)?;
    Ok(match format {
        Format::Csv => csv(
            &["slope", "a", "b", "a_approx", "b_approx"],
            &points
                .iter()
                .map(|p| {
                    vec![
                        p.slope.to_string(),
                        p.a.to_string(),
                        p.b.to_string(),
                        fmt_float(p.a.to_f64()),
                        fmt_float(p.b.to_f64()),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        _ => json(&points),
    })
}

fn plot(cli: &Cli, figure: Figure, t: &str, slopes: &[String]) -> Result<String> {
    require(cli.format.unwrap_or(Format::Svg), &[Format::Svg])?;
    match figure {
        Figure::Domain => Ok(svg::domain(&[])),
        Figure::Arc => {
            let t: ExactReal = parse(t)?;
            if !t.is_positive() {
                return Err(Error::InvalidParameter(format!("t = {t} must be positive")).into());
            }
            // default slopes below the minimum are skipped; explicit ones must be valid
            let points: Vec<ArcPoint> = if slopes.is_empty() {
                ["inf", "4", "3", "5/2"]
                    .iter()
                    .filter_map(|s| arc_points(&t, &[s.to_string()]).ok())
                    .flatten()
                    .collect()
            } else {
                arc_points(&t, slopes)?
            };
            let samples: Vec<(f64, f64, String)> = points
                .iter()
                .map(|p| (p.a.to_f64(), p.b.to_f64(), format!("slope {}", p.slope)))
                .collect();
            Ok(svg::arc(t.to_f64(), &samples))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let text = match &cli.command {
        Command::Classify { input, random } => classify(&cli, input.clone(), *random)?,
        Command::Hole { input, random } => hole(&cli, input.clone(), *random)?,
        Command::Sequence { tau, svg, random } => sequence(&cli, tau.clone(), *svg, *random)?,
        Command::Isogeny { tau, random } => isogeny(&cli, tau.clone(), *random)?,
        Command::Count { t, t_max, sweep, emit_points } => {
            count(&cli, t, *t_max, sweep.clone(), *emit_points)?
        }
        Command::Arc { t, slopes } => arc(&cli, t, slopes)?,
        Command::Plot { figure, t, slopes } => plot(&cli, *figure, t, slopes)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Failure::Io),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
