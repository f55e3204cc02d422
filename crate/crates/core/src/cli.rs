//! Command-line front end. Exit codes: 0 success, 1 domain error, 2 failed
//! verification (or a failing report), 64 malformed invocation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::constructions::{
    nonconvex_chain, nonconvex_n_self_affine, trapezoid_a, trapezoid_b, trapezoid_c, NonconvexParams,
    TrapezoidParam,
};
use crate::dissection::{verify, Dissection};
use crate::error::Error;
use crate::families::{is_member, sample_curve, table1_csv, table1_solutions, Family, FamilyCurve, MEMBER_TOL};
use crate::geometry::{Point2, Quadrangle, DEFAULT_TOL};
use crate::params::{classify_shape, normalize_to_p};
use crate::render::{render_dissection, render_parameter_chart, LabelMode, RenderOptions};
use crate::report::{report_reproduction, ReportInput};
use crate::solver::{realize, special_quadrangle_realizations, sweep_all, Catalogue, PermTriple, SolverConfig, TemplateGroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "selfaffine", version, about = "Affine types of quadrangles and their 3-self-affine dissections")]
pub struct Cli {
    /// Geometric tolerance, in (0, 1e-3].
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Multistart count per system.
    #[arg(long, global = true, default_value_t = 2000)]
    starts: usize,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Xy {
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shape class of Q[x,y], or convexity of four vertices.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        /// Four vertices, e.g. "0,0 1,0 1,1 0,1".
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["x", "y"])]
        vertices: Option<String>,
    },
    /// The representative of Q[x,y] in the canonical region.
    Normalize(Xy),
    /// Families and singular types containing Q[x,y].
    Member(Xy),
    /// Points on a family curve.
    Sample {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// The thirteen isolated type-C solutions.
    Table1,
    /// Solve all 512 systems of a template group.
    Sweep {
        #[arg(long, value_parser = parse_group)]
        template: TemplateGroup,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Explicit dissections.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Check a dissection JSON file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// SVG of a dissection, or of the parameter chart with --chart.
    Render {
        #[arg(long = "in", required_unless_present = "chart")]
        input: Option<PathBuf>,
        /// Number piece corners by the parent vertex they correspond to.
        #[arg(long)]
        labels: bool,
        /// Draw the parameter chart from the given catalogues.
        #[arg(long, conflicts_with = "input")]
        chart: bool,
        #[arg(long = "catalogue")]
        catalogues: Vec<PathBuf>,
        #[arg(long, default_value_t = 600)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
    },
    /// Type-C realizations: the eight of the special type, or one triple at Q[x,y].
    Realizations {
        #[arg(long, conflicts_with_all = ["x", "y", "triple"])]
        special: bool,
        #[arg(long, requires_all = ["y", "triple"])]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        triple: Option<PermTriple>,
    },
    /// Pass/fail per acceptance criterion from sweep catalogues.
    Report {
        /// Template-C catalogue.
        #[arg(long)]
        catalogue: Option<PathBuf>,
        #[arg(long = "catalogue-a")]
        catalogue_a: Option<PathBuf>,
        #[arg(long = "catalogue-b")]
        catalogue_b: Option<PathBuf>,
        /// Samples per randomized invariant check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
enum Construction {
    TrapezoidA {
        #[arg(long)]
        z: f64,
        /// Three positive weights summing to 1.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])]
        weights: Vec<f64>,
    },
    TrapezoidB {
        #[arg(long)]
        z: f64,
    },
    TrapezoidC {
        #[arg(long)]
        z: f64,
    },
    Nonconvex {
        #[arg(long)]
        n: u32,
    },
    /// k affine images of the non-convex Q[x,y] forming a larger one.
    Chain {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        k: usize,
    },
}

fn parse_group(s: &str) -> Result<TemplateGroup, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnverifiedDissection | Error::VerificationFailure(_) => EXIT_VERIFY,
            _ => EXIT_DOMAIN,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn io_fail(path: &Path, e: std::io::Error) -> Fail {
    Fail(EXIT_DOMAIN, format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| io_fail(path, e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("value serializes")
}

/// Runs the CLI on `argv` (program name first), writing results to `out`
/// (or `--out`) and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let text = if text.ends_with('\n') { text } else { text + "\n" };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        let _ = writeln!(err, "error: {}: {e}", path.display());
                        return EXIT_DOMAIN;
                    }
                }
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            code
        }
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32), Fail> {
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t <= 1e-3) {
            return Err(usage(format!("--tolerance must lie in (0, 1e-3], got {t}")));
        }
    }
    if cli.starts == 0 {
        return Err(usage("--starts must be at least 1"));
    }
    let tol = cli.tolerance.unwrap_or(DEFAULT_TOL);
    let format = cli.format;
    let want = |allowed: &[Format], default: Format| -> Result<Format, Fail> {
        let f = format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(usage(format!("--format {f:?} is not available for this command").to_lowercase()))
        }
    };
    let ok = |s: String| Ok((s, EXIT_OK));

    match &cli.command {
        Command::Classify { x, y, vertices } => {
            want(&[Format::Json], Format::Json)?;
            if let Some(v) = vertices {
                let pts = parse_vertices(v)?;
                let q = match Quadrangle::classify(pts, tol) {
                    Ok(q) => q,
                    Err(Error::DegenerateQuadrangle(why)) => {
                        return ok(json!({"kind": "degenerate", "reason": why}).to_string());
                    }
                    Err(e) => return Err(e.into()),
                };
                let kind = match q.kind {
                    crate::geometry::QuadKind::Convex => json!({"kind": "convex"}),
                    crate::geometry::QuadKind::NonConvex { reflex } => json!({"kind": "non-convex", "reflex": reflex + 1}),
                    crate::geometry::QuadKind::Degenerate => json!({"kind": "degenerate"}),
                };
                return ok(kind.to_string());
            }
            let (Some(x), Some(y)) = (x, y) else {
                return Err(usage("classify needs --x and --y, or --vertices"));
            };
            let shape = classify_shape(*x, *y)?;
            ok(json!({"shape": shape}).to_string())
        }
        Command::Normalize(p) => {
            want(&[Format::Json], Format::Json)?;
            let n = normalize_to_p(p.x, p.y)?;
            ok(json!({"x": n.params.x, "y": n.params.y, "region": n.input_region}).to_string())
        }
        Command::Member(p) => {
            want(&[Format::Json], Format::Json)?;
            let m = is_member(p.x, p.y, cli.tolerance.unwrap_or(MEMBER_TOL))?;
            ok(to_json(&m))
        }
        Command::Sample { family, n } => {
            let pts = sample_curve(&FamilyCurve::new(*family), *n);
            match want(&[Format::Json, Format::Csv], Format::Json)? {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let _ = w.write_record(["x", "y"]);
                    for (x, y) in pts {
                        let _ = w.write_record([x.to_string(), y.to_string()]);
                    }
                    ok(String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default())
                }
                _ => ok(json!({"family": family, "points": pts}).to_string()),
            }
        }
        Command::Table1 => match want(&[Format::Json, Format::Csv], Format::Csv)? {
            Format::Json => {
                let rows: Vec<_> = table1_solutions()?
                    .iter()
                    .map(|s| {
                        json!({
                            "id": s.id,
                            "eq1": s.eq1.to_string(),
                            "eq2": s.eq2.to_string(),
                            "x": s.value.0,
                            "y": s.value.1,
                            "closed_form": s.closed_form.map(|c| c.text),
                        })
                    })
                    .collect();
                ok(serde_json::to_string_pretty(&rows).expect("rows serialize"))
            }
            _ => ok(table1_csv()?),
        },
        Command::Sweep { template, jobs } => {
            want(&[Format::Json], Format::Json)?;
            if *jobs == Some(0) {
                return Err(usage("--jobs must be at least 1"));
            }
            let cfg = SolverConfig {
                seed: cli.seed,
                starts: cli.starts,
                ..SolverConfig::default()
            };
            let cat = sweep_all(*template, &cfg, *jobs)?;
            ok(cat.to_json())
        }
        Command::Construct { which } => {
            want(&[Format::Json], Format::Json)?;
            let d = match which {
                Construction::TrapezoidA { z, weights } => {
                    let w: [f64; 3] = weights
                        .as_slice()
                        .try_into()
                        .map_err(|_| usage(format!("--weights takes three values, got {}", weights.len())))?;
                    trapezoid_a(TrapezoidParam::new(*z)?, w)?
                }
                Construction::TrapezoidB { z } => trapezoid_b(TrapezoidParam::new(*z)?)?,
                Construction::TrapezoidC { z } => trapezoid_c(*z)?,
                Construction::Nonconvex { n } => nonconvex_n_self_affine(*n)?,
                Construction::Chain { x, y, k } => nonconvex_chain(NonconvexParams::new(*x, *y)?, *k)?,
            };
            if !verify(&d, tol).passed {
                return Err(Fail(EXIT_VERIFY, "constructed dissection failed verification".into()));
            }
            ok(d.to_json())
        }
        Command::Verify { input } => {
            want(&[Format::Json], Format::Json)?;
            let d = Dissection::from_json(&read(input)?)?;
            let report = verify(&d, tol);
            let code = if report.passed { EXIT_OK } else { EXIT_VERIFY };
            Ok((serde_json::to_string_pretty(&report).expect("report serializes"), code))
        }
        Command::Render {
            input,
            labels,
            chart,
            catalogues,
            width,
            height,
        } => {
            want(&[Format::Svg], Format::Svg)?;
            let opts = RenderOptions {
                width: *width,
                height: *height,
                labels: if *labels { LabelMode::VertexNumbers } else { LabelMode::None },
                ..RenderOptions::default()
            };
            let bytes = if *chart {
                let cats = catalogues
                    .iter()
                    .map(|p| Catalogue::from_json(&read(p)?).map_err(Fail::from))
                    .collect::<Result<Vec<_>, Fail>>()?;
                render_parameter_chart(&cats, &opts)?
            } else {
                let path = input.as_ref().ok_or_else(|| usage("render needs --in or --chart"))?;
                render_dissection(&Dissection::from_json(&read(path)?)?, &opts)?
            };
            ok(String::from_utf8(bytes).expect("SVG is UTF-8"))
        }
        Command::Realizations { special, x, y, triple } => {
            want(&[Format::Json], Format::Json)?;
            if *special {
                let rs = special_quadrangle_realizations()?;
                return ok(serde_json::to_string_pretty(&rs).expect("realizations serialize"));
            }
            let (Some(x), Some(y), Some(t)) = (x, y, triple) else {
                return Err(usage("realizations needs --special, or --x, --y and --triple"));
            };
            let d = realize(*t, *x, *y)?;
            ok(d.to_json())
        }
        Command::Report {
            catalogue,
            catalogue_a,
            catalogue_b,
            samples,
        } => {
            let f = want(&[Format::Json, Format::Text], Format::Text)?;
            let load = |p: &Option<PathBuf>| -> Result<Option<Catalogue>, Fail> {
                p.as_ref()
                    .map(|p| Catalogue::from_json(&read(p)?).map_err(Fail::from))
                    .transpose()
            };
            let (c, a, b) = (load(catalogue)?, load(catalogue_a)?, load(catalogue_b)?);
            let report = report_reproduction(&ReportInput {
                c: c.as_ref(),
                a: a.as_ref(),
                b: b.as_ref(),
                tolerance: cli.tolerance.unwrap_or(1e-12),
                seed: cli.seed,
                samples: *samples,
            })?;
            let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
            let text = if f == Format::Json { report.to_json() } else { report.to_string() };
            Ok((text, code))
        }
    }
}

fn parse_vertices(s: &str) -> Result<[Point2; 4], Fail> {
    let pts = s
        .split_whitespace()
        .map(|pair| {
            let (a, b) = pair.split_once(',').ok_or_else(|| usage(format!("bad vertex {pair:?}")))?;
            let a: f64 = a.trim().parse().map_err(|_| usage(format!("bad number {a:?}")))?;
            let b: f64 = b.trim().parse().map_err(|_| usage(format!("bad number {b:?}")))?;
            Ok(Point2::new(a, b))
        })
        .collect::<Result<Vec<_>, Fail>>()?;
    pts.try_into().map_err(|_| usage("--vertices needs exactly four points"))
}
