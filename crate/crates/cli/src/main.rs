use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hexsquish::algebra::{Assignment, LeadVar, Poly};
use hexsquish::checks::{run_check, CheckName, CheckParams, CheckReport};
use hexsquish::diagrams::{box_count, matching_of, z_poly, z_poly_enumerate, PlanePartition, WeightScheme};
use hexsquish::mesh::{BoxDims, HexMesh, PropellerMap};
use hexsquish::overlay::overlay;
use hexsquish::render::{render_matching, render_squish, render_two_factor};
use hexsquish::Error;

const ENUMERATE_LIMIT: u128 = 10_000_000;
const PROFILE_LIMIT: u128 = 2_000_000;

#[derive(Parser)]
#[command(name = "hexsquish", version, about = "Exact dimer computations on hexagonal meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weights {
    Z2z2,
    Mono,
    Count,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Dp,
    Enumerate,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Matching,
    Twofactor,
    Squish,
}

#[derive(Subcommand)]
enum Command {
    /// Boxed partition function.
    Zfun {
        #[arg(short, long)]
        dims: BoxDims,
        #[arg(short, long, value_enum, default_value = "z2z2")]
        weights: Weights,
        /// Specialization such as `q=-1,r=-1,s=-1,p=-p`.
        #[arg(long)]
        set: Option<String>,
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
        /// Drop terms of total degree above this.
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a named check, or `all`.
    Check {
        name: String,
        /// Box (base box for checks on doubled meshes).
        #[arg(short, long)]
        dims: Option<BoxDims>,
        /// Series order or comparison degree.
        #[arg(long)]
        order: Option<usize>,
        /// Largest box used by `all`.
        #[arg(long, default_value = "2,2,2")]
        max_dims: BoxDims,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write an SVG drawing.
    Render {
        /// Diagram file `{"dims":[a,b,c],"heights":[[...]]}`.
        #[arg(long, conflicts_with = "dims")]
        diagram: Option<PathBuf>,
        /// Use the empty diagram in this box.
        #[arg(short, long)]
        dims: Option<BoxDims>,
        /// Second diagram for `twofactor` (default: the full box).
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "matching")]
        what: What,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Dump a mesh (and its propellers, for even boxes) as JSON.
    Mesh {
        #[arg(short, long)]
        dims: BoxDims,
        #[arg(long)]
        propellers: bool,
    },
}

enum Failure {
    Math,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Zfun { dims, weights, set, method, cap, format } => zfun(dims, weights, set, method, cap, format),
        Command::Check { name, dims, order, max_dims, format } => check(&name, dims, order, max_dims, format),
        Command::Render { diagram, dims, other, what, out } => render(diagram, dims, other, what, out),
        Command::Mesh { dims, propellers } => mesh(dims, propellers),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn zfun(
    dims: BoxDims,
    weights: Weights,
    set: Option<String>,
    method: Method,
    cap: Option<u32>,
    format: Format,
) -> Result<(), Failure> {
    let scheme = match weights {
        Weights::Z2z2 => WeightScheme::Z2Z2,
        Weights::Mono | Weights::Count => WeightScheme::Monochromatic,
    };
    if method != Method::Dp {
        let count = box_count(dims);
        if count > ENUMERATE_LIMIT.into() {
            return Err(Error::TooLarge {
                what: "diagrams to enumerate".into(),
                count: u128::try_from(count).unwrap_or(u128::MAX),
                limit: ENUMERATE_LIMIT,
            }
            .into());
        }
    }
    if method != Method::Enumerate {
        let states = binomial((dims.a + dims.c) as u128, dims.a as u128);
        if states > PROFILE_LIMIT {
            return Err(Error::TooLarge { what: "column profiles".into(), count: states, limit: PROFILE_LIMIT }.into());
        }
    }
    let poly = match method {
        Method::Dp => z_poly(dims, scheme, cap),
        Method::Enumerate => z_poly_enumerate(dims, scheme, cap),
        Method::Both => {
            let dp = z_poly(dims, scheme, cap);
            let en = z_poly_enumerate(dims, scheme, cap);
            if dp != en {
                eprintln!("dp and enumeration disagree:\n  dp: {dp}\n  enumerate: {en}");
                return Err(Failure::Math);
            }
            dp
        }
    };
    let mut poly = match set {
        Some(spec) => poly.specialize(&Assignment::parse(&spec, LeadVar::P)?),
        None => poly,
    };
    if weights == Weights::Count {
        poly = poly.specialize(&Assignment::all_ones());
    }
    print_poly(&poly, format);
    Ok(())
}

fn print_poly(poly: &Poly, format: Format) {
    match format {
        Format::Text => println!("{poly}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&poly.to_json()).expect("json")),
    }
}

fn default_order(name: CheckName, dims: BoxDims) -> usize {
    match name {
        CheckName::Eq3 => 10,
        _ => dims.min_side() as usize,
    }
}

fn check(
    name: &str,
    dims: Option<BoxDims>,
    order: Option<usize>,
    max_dims: BoxDims,
    format: Format,
) -> Result<(), Failure> {
    let one = BoxDims::new(1, 1, 1).expect("valid");
    let reports: Vec<CheckReport> = if name == "all" {
        let order = order.unwrap_or(8);
        let series_side = order as u32;
        let coloured_side = series_side.min(4);
        let mut out = Vec::new();
        for c in CheckName::ALL {
            let params = match c {
                CheckName::Eq1 => CheckParams::new(BoxDims::new(series_side.max(1), series_side.max(1), series_side.max(1))?, order),
                CheckName::Eq2 => CheckParams::new(
                    BoxDims::new(coloured_side.max(1), coloured_side.max(1), coloured_side.max(1))?,
                    coloured_side as usize,
                ),
                _ => CheckParams::new(max_dims, order),
            };
            let r = run_check(c, &params)?;
            if format == Format::Text {
                println!("{}", r.to_text());
            }
            out.push(r);
        }
        out
    } else {
        let c: CheckName = name.parse()?;
        let d = dims.unwrap_or(one);
        let r = run_check(c, &CheckParams::new(d, order.unwrap_or_else(|| default_order(c, d))))?;
        if format == Format::Text {
            println!("{}", r.to_text());
            println!("{}", serde_json::to_string(&r.details).expect("json"));
        }
        vec![r]
    };
    if format == Format::Json {
        let v = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Math)
    }
}

fn read_diagram(path: &PathBuf) -> Result<PlanePartition, Failure> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(PlanePartition::from_json(&value)?)
}

fn render(
    diagram: Option<PathBuf>,
    dims: Option<BoxDims>,
    other: Option<PathBuf>,
    what: What,
    out: PathBuf,
) -> Result<(), Failure> {
    let pp = match (diagram, dims) {
        (Some(path), _) => read_diagram(&path)?,
        (None, Some(d)) => PlanePartition::empty(d),
        (None, None) => return Err(Failure::Usage("give --diagram or --dims".into())),
    };
    let svg = match what {
        What::Matching => {
            let mesh = HexMesh::new(pp.dims);
            render_matching(&mesh, &matching_of(&mesh, &pp)?)
        }
        What::Twofactor => {
            let mesh = HexMesh::new(pp.dims);
            let second = match other {
                Some(path) => read_diagram(&path)?,
                None => PlanePartition::full(pp.dims),
            };
            let lambda = overlay(&mesh, &matching_of(&mesh, &pp)?, &matching_of(&mesh, &second)?)?;
            render_two_factor(&mesh, &lambda)
        }
        What::Squish => {
            let pm = PropellerMap::new(HexMesh::new(pp.dims))?;
            let m = matching_of(pm.even(), &pp)?;
            render_squish(&pm, &m)?
        }
    };
    fs::write(&out, svg).map_err(Error::from)?;
    Ok(())
}

fn mesh(dims: BoxDims, propellers: bool) -> Result<(), Failure> {
    let mesh = HexMesh::new(dims);
    let v = if propellers {
        let pm = PropellerMap::new(mesh)?;
        pm.even().to_json(Some(&pm))
    } else {
        mesh.to_json(None)
    };
    let mut out = std::io::stdout().lock();
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(())
}
