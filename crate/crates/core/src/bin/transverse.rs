use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use transverse_core::cube::{compose, CubeMap};
use transverse_core::dpath::{is_dpath, transport, Leg, PLDPath};
use transverse_core::error::{Error, Result};
use transverse_core::geo::{
    chain_distance_sample, vertex_distance, ChainBudget, PointPresentation,
};
use transverse_core::homset::{count_homset, enumerate_homset, factorize, Budget};
use transverse_core::point::{d1_point, d1_sym, RPoint};
use transverse_core::reedy::{
    boundary_hom, boundary_hom_closed_form, compare_latching, test_battery,
};
use transverse_core::sts::{
    certify_cellular, free_sts, parse_build_script, FreeCell, Precubical, Sts,
};
use transverse_core::suite::{run_suite_with, SuiteConfig};
use transverse_core::topo::t_eval;

#[derive(Parser)]
#[command(
    name = "transverse",
    version,
    about = "Cotransverse maps, symmetric transverse sets and directed paths"
)]
struct Cli {
    /// Output format; `literal` is an alias of `text`.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Literal,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List or count the cotransverse maps [dom] → [cod].
    Enumerate {
        #[arg(long)]
        dom: usize,
        #[arg(long)]
        cod: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Split a map into an endo followed by a cocubical map.
    Factor {
        #[arg(long)]
        map: CubeMap,
    },
    /// Print OUTER ∘ INNER.
    Compose { outer: CubeMap, inner: CubeMap },
    /// Evaluate the topological extension of a map at a rational point.
    Eval {
        #[arg(long)]
        map: CubeMap,
        #[arg(long, allow_hyphen_values = true)]
        point: RPoint,
    },
    /// Directed distances.
    Dist(DistArgs),
    /// Check, naturalize or transport piecewise-linear d-paths.
    Dpath {
        #[arg(value_enum)]
        action: DpathAction,
        #[arg(long)]
        input: PathBuf,
        /// Map applied by `transport`.
        #[arg(long)]
        map: Option<CubeMap>,
        /// Precubical set the legs live in; cube ids are its external ids.
        #[arg(long)]
        sts: Option<PathBuf>,
    },
    /// Freely generate a symmetric transverse set from a precubical set.
    Free {
        #[arg(long)]
        input: PathBuf,
        /// Truncate the input above this dimension first.
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Run a cellular build script and certify the result.
    Cells {
        #[arg(long)]
        script: PathBuf,
        /// Dimension bound of the result; defaults to the largest cell.
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Verify hom-coend cardinalities or latching identifications.
    Reedy {
        #[arg(long, value_enum)]
        check: ReedyCheck,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Run a named property suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per unit of work.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(clap::Args)]
struct DistArgs {
    /// Two points of one cube: print d₁ and its symmetrization.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    points: Option<Vec<RPoint>>,
    /// Precubical set for vertex and chain distances.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Source vertex id for the vertex distance.
    #[arg(long)]
    from: Option<u64>,
    /// Target vertex id for the vertex distance.
    #[arg(long)]
    to: Option<u64>,
    /// Bound the distance between `--p` and `--q` by chains through grids.
    #[arg(long)]
    chain: bool,
    /// Node budget for `--chain`.
    #[arg(long)]
    budget: Option<usize>,
    /// Deepest grid subdivision level tried by `--chain`.
    #[arg(long)]
    max_level: Option<u32>,
    /// Chain source as `cube,x1,...,xn`.
    #[arg(long)]
    p: Option<String>,
    /// Chain target as `cube,x1,...,xn`.
    #[arg(long)]
    q: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DpathAction {
    Verify,
    Naturalize,
    Transport,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReedyCheck {
    BoundaryHom,
    Latching,
}

/// Output of a command and whether its check passed.
struct Output {
    text: String,
    json: serde_json::Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Output {
            text,
            json,
            ok: true,
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_precubical(path: &PathBuf) -> Result<Precubical> {
    Precubical::from_json(&read(path)?)
}

/// The cube of `free_sts(k)` generated by the cube with external id `id`.
fn free_cube(k: &Precubical, id: u64) -> Result<(usize, usize)> {
    let (n, base) = k.locate(id).ok_or(Error::UnknownCube {
        dim: 0,
        id: id as usize,
    })?;
    let cell = FreeCell {
        psi: CubeMap::identity(n),
        base,
    };
    Ok((n, cell.encode(k)?))
}

fn free_vertex(k: &Precubical, id: u64) -> Result<usize> {
    match free_cube(k, id)? {
        (0, v) => Ok(v),
        (n, _) => Err(usage(format!("cube {id} has dimension {n}, not a vertex"))),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Enumerate {
            dom,
            cod,
            count_only,
        } => {
            let budget = Budget::from_env();
            if *count_only {
                let count = count_homset(*dom, *cod, budget)?;
                return Ok(Output::ok(
                    count.to_string(),
                    json!({"dom": dom, "cod": cod, "count": count.to_string()}),
                ));
            }
            let maps = enumerate_homset(*dom, *cod, budget)?;
            let lits: Vec<String> = maps.iter().map(CubeMap::to_literal).collect();
            Ok(Output::ok(
                lits.join("\n"),
                json!({"dom": dom, "cod": cod, "count": maps.len().to_string(), "maps": lits}),
            ))
        }
        Command::Factor { map } => {
            let fac = factorize(map)?;
            let (psi, phi) = (fac.psi.to_literal(), fac.phi.to_literal());
            Ok(Output::ok(
                format!("psi {psi}\nphi {phi}"),
                json!({"map": map.to_literal(), "psi": psi, "phi": phi}),
            ))
        }
        Command::Compose { outer, inner } => {
            let lit = compose(outer, inner)?.to_literal();
            Ok(Output::ok(lit.clone(), json!({"composite": lit})))
        }
        Command::Eval { map, point } => {
            let image = t_eval(map, point)?.to_string();
            Ok(Output::ok(
                image.clone(),
                json!({"map": map.to_literal(), "point": point.to_string(), "image": image}),
            ))
        }
        Command::Dist(args) => dist(args),
        Command::Dpath {
            action,
            input,
            map,
            sts,
        } => dpath(*action, input, map.as_ref(), sts.as_ref()),
        Command::Free { input, max_dim } => {
            let mut k = load_precubical(input)?;
            if let Some(n) = max_dim {
                k = k.truncate(*n);
            }
            let free = free_sts(&k)?;
            let counts = free.counts().to_vec();
            let functorial = free.check_functoriality(free.max_dim().min(3))?;
            let mut text = String::new();
            for (m, c) in counts.iter().enumerate() {
                writeln!(text, "dim {m}: {c} cubes from {} generators", k.count(m))
                    .expect("string write");
            }
            text.push_str(match &functorial {
                Ok(_) => "action: functorial",
                Err(_) => "action: NOT functorial",
            });
            Ok(Output {
                text,
                json: json!({"generators": k.counts(), "counts": counts, "functorial": functorial.is_ok()}),
                ok: functorial.is_ok(),
            })
        }
        Command::Cells { script, max_dim } => {
            let steps = parse_build_script(&read(script)?)?;
            match certify_cellular(&steps, *max_dim) {
                Ok((x, cert)) => Ok(Output::ok(
                    format!(
                        "cellular: {} cells {:?}\ncounts {:?}",
                        cert.generators.len(),
                        cert.cells,
                        x.counts()
                    ),
                    json!({"cellular": true, "cells": cert.cells, "generators": cert.generators, "counts": x.counts()}),
                )),
                Err(
                    e @ (Error::Attach(_) | Error::NotEquivariant(_) | Error::UnknownCube { .. }),
                ) => Ok(Output {
                    text: format!("not cellular: {e}"),
                    json: json!({"cellular": false, "reason": e.to_string()}),
                    ok: false,
                }),
                Err(e) => Err(e),
            }
        }
        Command::Reedy { check, max_dim } => reedy(*check, *max_dim),
        Command::Check {
            suite,
            max_dim,
            seed,
            samples,
        } => {
            let mut cfg = SuiteConfig::new(*max_dim, *seed, Budget::from_env());
            if let Some(s) = samples {
                cfg.samples = *s;
            }
            let report = run_suite_with(suite, &cfg)?;
            Ok(Output {
                text: report.to_string(),
                json: serde_json::to_value(&report).expect("report serializes"),
                ok: report.passed(),
            })
        }
    }
}

fn dist(args: &DistArgs) -> Result<Output> {
    if let Some(pts) = &args.points {
        let (a, b) = (&pts[0], &pts[1]);
        let d = d1_point(a, b)?;
        let sym = d1_sym(a, b)?;
        return Ok(Output::ok(
            format!("d1 {d}\nd1_sym {} witness {}", sym.value, sym.witness),
            json!({"d1": d.to_string(), "d1_sym": sym.value.to_string(), "witness": sym.witness.to_string()}),
        ));
    }
    let input = args
        .input
        .as_ref()
        .ok_or_else(|| usage("dist needs --points or --input"))?;
    let k = load_precubical(input)?;
    let x = free_sts(&k)?;
    if args.chain {
        let parse = |s: &Option<String>, flag: &str| -> Result<PointPresentation> {
            let raw: PointPresentation = s
                .as_deref()
                .ok_or_else(|| usage(format!("--chain needs {flag}")))?
                .parse()?;
            let (n, cube) = free_cube(&k, raw.cube as u64)?;
            if n != raw.dim() {
                return Err(usage(format!(
                    "cube {} has dimension {n}, got {} coordinates",
                    raw.cube,
                    raw.dim()
                )));
            }
            Ok(PointPresentation {
                cube,
                local: raw.local,
            })
        };
        let (p, q) = (parse(&args.p, "--p")?, parse(&args.q, "--q")?);
        let mut budget = ChainBudget::default();
        if let Some(b) = args.budget {
            budget.max_nodes = b;
        }
        if let Some(l) = args.max_level {
            budget.max_level = l;
        }
        let bound = chain_distance_sample(&x, &p, &q, budget)?;
        return Ok(Output::ok(
            format!(
                "chain bound {} (level {}{})",
                bound.bound,
                bound.level,
                if bound.exhausted {
                    ", node budget reached"
                } else {
                    ""
                }
            ),
            json!({"bound": bound.bound.to_string(), "level": bound.level, "exhausted": bound.exhausted}),
        ));
    }
    let (from, to) = match (args.from, args.to) {
        (Some(f), Some(t)) => (f, t),
        _ => return Err(usage("dist --input needs --from and --to, or --chain")),
    };
    let d = vertex_distance(&x, free_vertex(&k, from)?, free_vertex(&k, to)?)?;
    Ok(Output::ok(
        d.to_string(),
        json!({"from": from, "to": to, "distance": d.to_string()}),
    ))
}

fn dpath(
    action: DpathAction,
    input: &PathBuf,
    map: Option<&CubeMap>,
    sts: Option<&PathBuf>,
) -> Result<Output> {
    let mut path = PLDPath::from_json(&read(input)?)?;
    let ambient = match sts {
        Some(file) => {
            let k = load_precubical(file)?;
            let legs = path
                .legs()
                .iter()
                .map(|l| {
                    let (n, cube) = free_cube(&k, l.cube as u64)?;
                    if n != l.path.dim() {
                        return Err(usage(format!(
                            "cube {} has dimension {n}, leg has {}",
                            l.cube,
                            l.path.dim()
                        )));
                    }
                    Ok(Leg {
                        cube,
                        path: l.path.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            path = PLDPath::new(legs)?;
            Some(free_sts(&k)?)
        }
        None => None,
    };
    match action {
        DpathAction::Verify => verify(&path, ambient.as_ref()),
        DpathAction::Naturalize => {
            let nat = path.naturalize()?;
            let text = nat.to_json();
            Ok(Output::ok(text.clone(), serde_json::from_str(&text)?))
        }
        DpathAction::Transport => {
            let f = map.ok_or_else(|| usage("transport needs --map"))?;
            let legs = path
                .legs()
                .iter()
                .map(|l| {
                    Ok(Leg {
                        cube: l.cube,
                        path: transport(f, &l.path)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let text = PLDPath::new(legs)?.to_json();
            Ok(Output::ok(text.clone(), serde_json::from_str(&text)?))
        }
    }
}

fn verify(path: &PLDPath, ambient: Option<&Sts>) -> Result<Output> {
    let mut problems: Vec<String> = path
        .legs()
        .iter()
        .enumerate()
        .filter_map(|(k, l)| is_dpath(&l.path).defect.map(|d| format!("leg {k}: {d}")))
        .collect();
    if problems.is_empty() {
        if let Some(x) = ambient {
            if let Err(e) = path.check_in(x) {
                problems.push(e.to_string());
            }
        }
    }
    let cert = path.naturality();
    let mut text = String::new();
    if problems.is_empty() {
        text.push_str("d-path: ok\n");
    } else {
        for p in &problems {
            writeln!(text, "d-path: {p}").expect("string write");
        }
    }
    writeln!(text, "natural: {}", cert.is_natural()).expect("string write");
    write!(text, "length: {}", cert.total_length).expect("string write");
    Ok(Output {
        text,
        json: json!({
            "dpath": problems.is_empty(),
            "problems": problems,
            "natural": cert.is_natural(),
            "length": cert.total_length.to_string(),
            "legs": cert.legs,
        }),
        ok: problems.is_empty(),
    })
}

fn reedy(check: ReedyCheck, max_dim: usize) -> Result<Output> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    match check {
        ReedyCheck::BoundaryHom => {
            writeln!(
                text,
                "{:>2} {:>2} {:>2} {:>8} {:>8} {:>6}",
                "p", "q", "n", "classes", "formula", "normal"
            )
            .expect("string write");
            for n in 0..=max_dim {
                for p in 0..=max_dim {
                    for q in 0..=max_dim {
                        let b = boundary_hom(p, q, n)?;
                        let formula = boundary_hom_closed_form(p, q, n)?;
                        let row_ok = b.class_count() as u128 == formula && b.normal_forms_unique();
                        ok &= row_ok;
                        writeln!(
                            text,
                            "{p:>2} {q:>2} {n:>2} {:>8} {formula:>8} {:>6}",
                            b.class_count(),
                            if b.normal_forms_unique() {
                                "unique"
                            } else {
                                "NO"
                            }
                        )
                        .expect("string write");
                        rows.push(json!({"p": p, "q": q, "n": n, "classes": b.class_count(), "formula": formula.to_string(), "ok": row_ok}));
                    }
                }
            }
        }
        ReedyCheck::Latching => {
            writeln!(
                text,
                "{:<12} {:>2} {:>9} {:>9} {:>9}",
                "object", "n", "latching", "boundary", "bijective"
            )
            .expect("string write");
            for a in test_battery(max_dim)? {
                for n in 0..=max_dim {
                    let c = compare_latching(&a, n)?;
                    ok &= c.bijective;
                    writeln!(
                        text,
                        "{:<12} {n:>2} {:>9} {:>9} {:>9}",
                        a.name(),
                        c.latching,
                        c.boundary_eval,
                        c.bijective
                    )
                    .expect("string write");
                    rows.push(json!({"object": a.name(), "n": n, "latching": c.latching, "boundary": c.boundary_eval, "bijective": c.bijective}));
                }
            }
        }
    }
    text.push_str(if ok { "all rows verified" } else { "MISMATCH" });
    Ok(Output {
        text,
        json: json!({"rows": rows, "ok": ok}),
        ok,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text | Format::Literal => println!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget { .. } => 3,
                _ => 2,
            })
        }
    }
}
