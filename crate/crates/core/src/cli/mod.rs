//! The `srr` command-line front end.
//!
//! Exit codes: 0 success, 1 infeasible rates or a bound that fails to contain
//! the exact region, 2 usage errors, 3 resource limits, 4 invalid input or
//! violated invariants.

pub mod matfile;
pub mod report;
pub mod svg;
pub mod sysfile;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num::{One, Zero};

use crate::bounds::{compare, BoundKind, BoundSpec};
use crate::error::{Error, Result};
use crate::gfmatrix::GenMatrix;
use crate::lincode::{dual_code, min_distance, object_profiles};
use crate::ratpoly::{format_rational, parse_rational, vertices, Polytope, Rational};
use crate::recovery::{RecoverySystem, SystemKind};
use crate::region::{exact_region, exact_section, membership, Membership, RateVector};
use report::{BoundJson, BoundsJson, FamilyJson, InfoJson, RecoveryJson, RegionJson};
use svg::{Layer, LayerKind, PlotSpec};

#[derive(Debug, Parser)]
#[command(
    name = "srr",
    version,
    about = "Service rate regions and dual-distance bounds of linear coded storage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Use every recovery set instead of the inclusion-minimal ones.
    #[arg(long, conflicts_with_all = ["minimal", "system"])]
    all: bool,
    /// Use the inclusion-minimal recovery sets (the default).
    #[arg(long, conflicts_with = "system")]
    minimal: bool,
    /// Read a custom recovery system, one `object server...` line per set.
    #[arg(long, value_name = "FILE")]
    system: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field, distances, and per-object dual profiles as JSON.
    Info { file: PathBuf },
    /// List the recovery sets of every object.
    Recovery {
        file: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a rate vector can be served and print an allocation.
    Check {
        file: PathBuf,
        /// Comma-separated rates, e.g. `2,1` or `5/2,0`.
        #[arg(long, allow_hyphen_values = true)]
        rates: String,
        /// Server capacity.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        mu: String,
        #[command(flatten)]
        system: SystemArgs,
    },
    /// The exact service rate region as halfspaces and vertices.
    Region {
        file: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        /// Fixed rates, e.g. `l2=0,l3=0`.
        #[arg(long)]
        section: Option<String>,
        /// Print vertices as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Outer bound regions, optionally compared against the exact region.
    Bounds {
        file: PathBuf,
        /// `all`, `tcb`, `ddb1` or `ddb2`.
        #[arg(long, default_value = "all")]
        bound: String,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        section: Option<String>,
    },
    /// Draw a two-dimensional section of the regions as SVG.
    Plot {
        file: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        /// Fixed rates leaving exactly two free coordinates, e.g. `l2=0,l3=0`.
        #[arg(long)]
        fix: Option<String>,
        /// Comma-separated subset of `exact,tcb,ddb1,ddb2`; defaults to the
        /// exact region and every bound that applies.
        #[arg(long)]
        layers: Option<String>,
        /// Output path; standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Canvas size in pixels.
        #[arg(long, default_value_t = 600)]
        size: u32,
        /// Plotted box `[0, x] × [0, y]`, given as `x,y`.
        #[arg(long)]
        clip: Option<String>,
    },
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::invalid(format!("write failed: {e}"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GenMatrix> {
    matfile::load(&read(path)?)
}

fn system(args: &SystemArgs, g: &GenMatrix) -> Result<RecoverySystem> {
    if let Some(path) = &args.system {
        sysfile::parse(&read(path)?, g)
    } else if args.all {
        RecoverySystem::all(g)
    } else {
        RecoverySystem::minimal(g)
    }
}

fn axis_name(i: usize) -> String {
    format!("l{}", i + 1)
}

/// Parses `l2=0,l3=1/2` into 0-based coordinates.
fn parse_fixes(text: Option<&str>, k: usize) -> Result<BTreeMap<usize, Rational>> {
    let mut fixed = BTreeMap::new();
    let Some(text) = text else {
        return Ok(fixed);
    };
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("`{part}` is not of the form l<i>=<value>")))?;
        let idx: usize = name
            .trim()
            .strip_prefix('l')
            .and_then(|s| s.parse().ok())
            .filter(|&i| (1..=k).contains(&i))
            .ok_or_else(|| Error::invalid(format!("`{name}` is not one of l1..l{k}")))?;
        let value = parse_rational(value)?;
        if fixed.insert(idx - 1, value).is_some() {
            return Err(Error::invalid(format!("`{name}` is fixed twice")));
        }
    }
    Ok(fixed)
}

fn free_axes(k: usize, fixed: &BTreeMap<usize, Rational>) -> Vec<String> {
    (0..k)
        .filter(|i| !fixed.contains_key(i))
        .map(axis_name)
        .collect()
}

fn exact(sys: &RecoverySystem, fixed: &BTreeMap<usize, Rational>) -> Result<Polytope> {
    if fixed.is_empty() {
        exact_region(sys)
    } else {
        exact_section(sys, fixed)
    }
}

fn vertices_if_small(p: &Polytope) -> Result<Option<Vec<Vec<Rational>>>> {
    if p.dim() <= 3 {
        vertices(p).map(Some)
    } else {
        Ok(None)
    }
}

fn json_line(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invariant(format!("serialization failed: {e}")))?;
    writeln!(out, "{text}").map_err(io)
}

/// The bound of the given kind for `g`, or the reason it does not apply.
fn bound_spec(kind: BoundKind, g: &GenMatrix, sys: &RecoverySystem) -> Result<BoundSpec> {
    Ok(match kind {
        BoundKind::Tcb => BoundSpec::Tcb {
            k: g.k(),
            n: g.n(),
            min_set_size: sys.min_set_size(),
        },
        BoundKind::Ddb1 => {
            if !g.is_systematic() {
                return Err(Error::precondition(
                    "the first dual distance bound requires a systematic generator matrix; use ddb2",
                ));
            }
            BoundSpec::Ddb1 {
                k: g.k(),
                n: g.n(),
                d_perp: dual_code(g)?.d_perp,
            }
        }
        BoundKind::Ddb2 => BoundSpec::Ddb2 {
            n: g.n(),
            profiles: object_profiles(g)?,
        },
    })
}

fn parse_kinds(text: &str) -> Result<(Vec<BoundKind>, bool)> {
    if text == "all" {
        return Ok((BoundKind::ALL.to_vec(), true));
    }
    let mut kinds = text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<BoundKind>>>()?;
    kinds.sort();
    kinds.dedup();
    Ok((kinds, false))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Info { file } => {
            let g = load(&file)?;
            let info = InfoJson::new(
                &g,
                min_distance(&g)?,
                dual_code(&g)?.d_perp,
                &object_profiles(&g)?,
            );
            json_line(out, &info)?;
            Ok(0)
        }
        Command::Recovery {
            file,
            system: s,
            json,
        } => {
            let g = load(&file)?;
            let sys = system(&s, &g)?;
            if json {
                let report = RecoveryJson {
                    system: match sys.kind() {
                        SystemKind::All => "all",
                        SystemKind::Minimal => "minimal",
                        SystemKind::Custom => "custom",
                    },
                    families: sys
                        .families()
                        .iter()
                        .enumerate()
                        .map(|(i, fam)| FamilyJson {
                            object: i + 1,
                            sets: fam.iter().map(|s| s.labels()).collect(),
                        })
                        .collect(),
                };
                json_line(out, &report)?;
            } else {
                for (i, fam) in sys.families().iter().enumerate() {
                    let sets: Vec<String> = fam.iter().map(ToString::to_string).collect();
                    writeln!(out, "object {}: {}", i + 1, sets.join(" ")).map_err(io)?;
                }
            }
            Ok(0)
        }
        Command::Check {
            file,
            rates,
            mu,
            system: s,
        } => {
            let g = load(&file)?;
            let sys = system(&s, &g)?;
            let lambdas = rates
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            if lambdas.len() != g.k() {
                return Err(Error::invalid(format!(
                    "--rates has {} entries but k = {}",
                    lambdas.len(),
                    g.k()
                )));
            }
            let lam = RateVector::new(lambdas)?;
            let mu = parse_rational(&mu)?;
            if mu < Rational::one() {
                let _ = writeln!(
                    err,
                    "warning: server capacity mu = {} is below 1",
                    format_rational(&mu)
                );
            }
            match membership(&sys, &lam, &mu)? {
                Membership::Infeasible => {
                    writeln!(out, "INFEASIBLE").map_err(io)?;
                    Ok(1)
                }
                Membership::Feasible(alloc) => {
                    writeln!(out, "FEASIBLE mu={}", format_rational(&mu)).map_err(io)?;
                    writeln!(out, "object\tset\tweight").map_err(io)?;
                    for ((i, set), w) in &alloc.weights {
                        if !w.is_zero() {
                            writeln!(out, "{}\t{set}\t{}", i + 1, format_rational(w))
                                .map_err(io)?;
                        }
                    }
                    writeln!(out, "server\tload").map_err(io)?;
                    for (j, load) in alloc.loads(g.n()).iter().enumerate() {
                        writeln!(out, "{}\t{}", j + 1, format_rational(load)).map_err(io)?;
                    }
                    Ok(0)
                }
            }
        }
        Command::Region {
            file,
            system: s,
            section,
            csv,
        } => {
            let g = load(&file)?;
            let sys = system(&s, &g)?;
            let fixed = parse_fixes(section.as_deref(), g.k())?;
            let p = exact(&sys, &fixed)?;
            if csv {
                if p.dim() > 3 {
                    return Err(Error::UnsupportedDimension(p.dim()));
                }
                for v in vertices(&p)? {
                    writeln!(out, "{}", report::rats(&v).join(",")).map_err(io)?;
                }
            } else {
                let vs = vertices_if_small(&p)?;
                json_line(
                    out,
                    &RegionJson::new(free_axes(g.k(), &fixed), &p, vs.as_deref()),
                )?;
            }
            Ok(0)
        }
        Command::Bounds {
            file,
            bound,
            compare: cmp,
            system: s,
            section,
        } => {
            let g = load(&file)?;
            let sys = system(&s, &g)?;
            let fixed = parse_fixes(section.as_deref(), g.k())?;
            let (kinds, lenient) = parse_kinds(&bound)?;
            let exact_p = if cmp {
                Some(exact(&sys, &fixed)?)
            } else {
                None
            };
            let mut code = 0;
            let mut bounds = Vec::new();
            for kind in kinds {
                let spec = match bound_spec(kind, &g, &sys) {
                    Ok(spec) => spec,
                    Err(Error::Precondition(msg)) if lenient => {
                        bounds.push(BoundJson::skipped(kind, msg));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let sep = spec.separable()?;
                let region = sep.region()?.section(&fixed)?;
                let vs = vertices_if_small(&region)?;
                let comparison = match &exact_p {
                    Some(e) => Some(compare(e, &region)?),
                    None => None,
                };
                if comparison.as_ref().is_some_and(|c| !c.contains_exact) {
                    code = 1;
                }
                bounds.push(BoundJson::new(
                    kind,
                    &sep,
                    &region,
                    vs.as_deref(),
                    comparison.as_ref(),
                ));
            }
            json_line(
                out,
                &BoundsJson {
                    axes: free_axes(g.k(), &fixed),
                    bounds,
                },
            )?;
            Ok(code)
        }
        Command::Plot {
            file,
            system: s,
            fix,
            layers,
            output,
            size,
            clip,
        } => {
            let g = load(&file)?;
            let sys = system(&s, &g)?;
            let fixed = parse_fixes(fix.as_deref(), g.k())?;
            let axes = free_axes(g.k(), &fixed);
            if axes.len() != 2 {
                return Err(Error::invalid(format!(
                    "plot needs exactly 2 free coordinates, found {} ({}); fix the others with --fix",
                    axes.len(),
                    axes.join(", ")
                )));
            }
            let clip = clip.as_deref().map(parse_clip).transpose()?;
            let (want_exact, kinds, lenient) = match layers.as_deref() {
                None => (true, BoundKind::ALL.to_vec(), true),
                Some(text) => {
                    let mut want_exact = false;
                    let mut kinds = Vec::new();
                    for part in text.split(',').map(str::trim) {
                        if part == "exact" {
                            want_exact = true;
                        } else {
                            kinds.push(part.parse::<BoundKind>()?);
                        }
                    }
                    kinds.sort();
                    kinds.dedup();
                    (want_exact, kinds, false)
                }
            };
            let mut drawn = Vec::new();
            if want_exact {
                drawn.push(Layer {
                    kind: LayerKind::Exact,
                    vertices: vertices(&exact(&sys, &fixed)?)?,
                });
            }
            for kind in kinds {
                let spec = match bound_spec(kind, &g, &sys) {
                    Ok(spec) => spec,
                    Err(Error::Precondition(_)) if lenient => continue,
                    Err(e) => return Err(e),
                };
                drawn.push(Layer {
                    kind: LayerKind::Bound(kind),
                    vertices: vertices(&spec.region()?.section(&fixed)?)?,
                });
            }
            let plot = PlotSpec {
                axes: [axes[0].clone(), axes[1].clone()],
                fixes: fixed
                    .iter()
                    .map(|(&i, v)| (axis_name(i), v.clone()))
                    .collect(),
                size,
                clip,
            };
            let doc = svg::render(&plot, &drawn)?;
            match output {
                Some(path) => std::fs::write(&path, doc)
                    .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?,
                None => out.write_all(doc.as_bytes()).map_err(io)?,
            }
            Ok(0)
        }
    }
}

fn parse_clip(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    let [x, y] = parts.as_slice() else {
        return Err(Error::invalid(format!(
            "--clip `{text}` is not of the form x,y"
        )));
    };
    let value = |s: &str| -> Result<f64> {
        let r = parse_rational(s)?;
        if r <= Rational::zero() {
            return Err(Error::invalid("clip box must be positive"));
        }
        Ok(num::ToPrimitive::to_f64(&r).unwrap_or(0.0))
    };
    Ok((value(x)?, value(y)?))
}

/// Entry point of the `srr` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
