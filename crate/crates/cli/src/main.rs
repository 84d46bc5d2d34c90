use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scatpoles::asymconst::{a_boundary, constant_report, tau};
use scatpoles::counting::{theorem2_gap, CountingFunction};
use scatpoles::io::{dimension_of, read_csv, write_csv};
use scatpoles::olvermap::eye_boundary;
use scatpoles::specfun::HalfIntOrder;
use scatpoles::sphere::{self, olver_approx_resonances, sphere_table, Family, ResonanceRecord};
use scatpoles::transparent::{self, transparent_table};

const THREADS_VAR: &str = "SCATPOLES_THREADS";

#[derive(Parser, Debug)]
#[command(name = "scatpoles", version, about = "Scattering poles of the sphere and the transparent obstacle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The constants τ_n and A_{S^{n−1}} by both quadrature routes.
    Constant {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Count the Dirichlet sphere resonances below a modulus.
    SphereCount {
        #[command(flatten)]
        geometry: Geometry,
        #[command(flatten)]
        common: Common,
    },
    /// Count the transparent-obstacle resonances below a modulus.
    TransparentCount {
        #[command(flatten)]
        geometry: Geometry,
        /// Wave speed inside the obstacle.
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Olver's approximations to the sphere resonances of one order.
    ApproxResonances {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// N, M and the reference count at several radii from CSV point clouds.
    CountingCompare {
        /// CSV files written with --emit-zeros.
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Radius R > R0 of the reference ball; defaults to 1.01·R0.
        #[arg(long)]
        big_r: Option<f64>,
        #[arg(long = "r", required = true)]
        radii: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Samples of the eye boundary ∂K₊ as (t, re, im).
    EyeBoundary {
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Geometry {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long)]
    rmax: f64,
    /// Write the resonances to this CSV file.
    #[arg(long)]
    emit_zeros: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
}

impl From<scatpoles::Error> for Failure {
    fn from(e: scatpoles::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn check_dimension(n: u32) -> Outcome<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Failure::Config(format!("--n must be odd and at least 3, got {n}")));
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Outcome<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Failure::Config(format!("--{name} must be positive, got {x}")));
    }
    Ok(())
}

impl Common {
    fn validate(&self, allowed: &[Format]) -> Outcome<Format> {
        if !(1e-12..=1e-3).contains(&self.tol) {
            return Err(Failure::Config(format!("--tol must lie in [1e-12, 1e-3], got {}", self.tol)));
        }
        let f = self.format.unwrap_or(allowed[0]);
        if !allowed.contains(&f) {
            let name = match f {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            return Err(Failure::Config(format!("--format {name} is not available for this command")));
        }
        Ok(f)
    }

    fn sink(&self) -> Outcome<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

impl Geometry {
    fn validate(&self) -> Outcome<()> {
        check_dimension(self.n)?;
        check_positive("radius", self.radius)?;
        check_positive("rmax", self.rmax)
    }
}

fn report(command: &str, config: Value, requested: f64, achieved: Value, result: Value) -> Value {
    json!({
        "tool": "scatpoles",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "tolerance": { "requested": requested, "achieved": achieved },
        "result": result,
    })
}

fn write_json(common: &Common, v: &Value) -> Outcome<()> {
    let mut w = common.sink()?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Failure::Config(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_zeros(path: &Path, records: &[ResonanceRecord], with_family: bool) -> Outcome<()> {
    write_csv(BufWriter::new(File::create(path)?), records, with_family)?;
    Ok(())
}

fn total_of(records: &[ResonanceRecord]) -> u64 {
    records.iter().map(|r| r.multiplicity).sum()
}

fn check_achieved(what: &str, achieved: f64, tol: f64) -> Outcome<()> {
    if achieved > tol {
        return Err(Failure::Numerical(format!(
            "{what}: achieved {achieved:e} exceeds the requested tolerance {tol:e}"
        )));
    }
    Ok(())
}

fn max_of(it: impl Iterator<Item = scatpoles::Result<f64>>) -> Outcome<f64> {
    let mut m = 0.0f64;
    for x in it {
        m = m.max(x?);
    }
    Ok(m)
}

fn constant(n: u32, common: &Common) -> Outcome<()> {
    common.validate(&[Format::Json])?;
    check_dimension(n)?;
    let rep = constant_report(n, common.tol)?;
    let achieved = rep.a_area_error.max(rep.a_boundary_error);
    let v = report(
        "constant",
        json!({ "n": n, "tol": common.tol }),
        common.tol,
        json!({ "a_area": rep.a_area_error, "a_boundary": rep.a_boundary_error }),
        serde_json::to_value(&rep).map_err(|e| Failure::Config(e.to_string()))?,
    );
    // estimates are relative to A, which is O(1)
    check_achieved("quadrature error", achieved / rep.a_boundary.abs().max(1e-300), common.tol)?;
    write_json(common, &v)
}

fn sphere_count(g: &Geometry, common: &Common) -> Outcome<()> {
    common.validate(&[Format::Json])?;
    g.validate()?;
    let records = sphere_table(g.n, g.radius, g.rmax)?;
    let residual = max_of(records.iter().map(|r| sphere::relative_residual(r, g.radius)))?;
    check_achieved("sphere zero residual", residual, common.tol)?;
    if let Some(p) = &g.emit_zeros {
        emit_zeros(p, &records, false)?;
    }
    let total = total_of(&records);
    let nn = g.n as i32;
    let v = report(
        "sphere-count",
        json!({ "n": g.n, "radius": g.radius, "rmax": g.rmax, "tol": common.tol }),
        common.tol,
        json!({ "max_relative_residual": residual }),
        json!({
            "total": total,
            "distinct": records.len(),
            "orders": records.iter().map(|r| r.l + 1).max().unwrap_or(0),
            "density": total as f64 / g.rmax.powi(nn),
            "a_boundary": a_boundary(g.n)? * g.radius.powi(nn),
        }),
    );
    write_json(common, &v)
}

fn transparent_count(g: &Geometry, c: f64, common: &Common) -> Outcome<()> {
    common.validate(&[Format::Json])?;
    g.validate()?;
    check_positive("c", c)?;
    if c == 1.0 {
        return Err(Failure::Config("--c must differ from 1".into()));
    }
    let records = transparent_table(g.n, c, g.radius, g.rmax)?;
    let residual = max_of(
        records
            .iter()
            .map(|r| transparent::relative_residual(r.l, g.n, c, r.lambda * g.radius)),
    )?;
    check_achieved("transmission residual", residual, common.tol)?;
    if let Some(p) = &g.emit_zeros {
        emit_zeros(p, &records, true)?;
    }
    let family_total = |f: Family| total_of(&records.iter().copied().filter(|r| r.family == f).collect::<Vec<_>>());
    let total = total_of(&records);
    let nn = g.n as i32;
    let target = (2.0 * tau(g.n)? / c.powi(nn) + a_boundary(g.n)?) * g.radius.powi(nn);
    let v = report(
        "transparent-count",
        json!({ "n": g.n, "radius": g.radius, "c": c, "rmax": g.rmax, "tol": common.tol }),
        common.tol,
        json!({ "max_relative_residual": residual }),
        json!({
            "total": total,
            "boundary": family_total(Family::TransparentBoundary),
            "interior": family_total(Family::TransparentInterior),
            "distinct": records.len(),
            "density": total as f64 / g.rmax.powi(nn),
            "target_density": target,
        }),
    );
    write_json(common, &v)
}

fn approx_resonances(n: u32, l: u32, radius: f64, common: &Common) -> Outcome<()> {
    let format = common.validate(&[Format::Csv, Format::Json])?;
    check_dimension(n)?;
    check_positive("radius", radius)?;
    let nu = HalfIntOrder::new(l, n)?;
    let records: Vec<ResonanceRecord> = olver_approx_resonances(nu)?
        .into_iter()
        .map(|z| ResonanceRecord {
            l,
            nu,
            lambda: z / radius,
            multiplicity: 1,
            family: Family::SphereOlver,
        })
        .collect();
    match format {
        Format::Csv => {
            let mut w = common.sink()?;
            write_csv(&mut w, &records, true)?;
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let points: Vec<[f64; 2]> = records.iter().map(|r| [r.lambda.re, r.lambda.im]).collect();
            let v = report(
                "approx-resonances",
                json!({ "n": n, "l": l, "radius": radius, "tol": common.tol }),
                common.tol,
                Value::Null,
                json!({ "twice_nu": nu.twice_nu(), "points": points }),
            );
            write_json(common, &v)
        }
    }
}

fn counting_compare(inputs: &[PathBuf], radius: f64, big_r: Option<f64>, radii: &[f64], common: &Common) -> Outcome<()> {
    common.validate(&[Format::Json])?;
    check_positive("radius", radius)?;
    let big_r = big_r.unwrap_or(1.01 * radius);
    if !(big_r > radius) {
        return Err(Failure::Config(format!("--big-r must exceed --radius, got {big_r}")));
    }
    for &r in radii {
        check_positive("r", r)?;
    }
    let mut records = Vec::new();
    for p in inputs {
        records.extend(read_csv(File::open(p)?)?);
    }
    let n = dimension_of(&records)?.ok_or_else(|| Failure::Config("the input files hold no records".into()))?;
    let cf = CountingFunction::from_records(n, &records)?;
    let mut rows = Vec::new();
    for &r in radii {
        let gap = theorem2_gap(&cf, n, radius, big_r, r)?;
        rows.push(json!({
            "r": r,
            "N": cf.count_n(r),
            "M": gap.m,
            "weyl": gap.weyl,
            "lhs": gap.lhs,
            "rhs": gap.rhs,
        }));
    }
    let names: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
    let v = report(
        "counting-compare",
        json!({ "inputs": names, "n": n, "radius": radius, "big_r": big_r, "r": radii, "tol": common.tol }),
        common.tol,
        Value::Null,
        Value::Array(rows),
    );
    write_json(common, &v)
}

fn eye(samples: usize, common: &Common) -> Outcome<()> {
    let format = common.validate(&[Format::Csv, Format::Json])?;
    if samples < 2 {
        return Err(Failure::Config(format!("--samples must be at least 2, got {samples}")));
    }
    let b = eye_boundary(samples)?;
    match format {
        Format::Csv => {
            let mut w = common.sink()?;
            writeln!(w, "t,re,im")?;
            for p in &b.samples {
                writeln!(w, "{},{},{}", p.t, p.z.re, p.z.im)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let pts: Vec<[f64; 3]> = b.samples.iter().map(|p| [p.t, p.z.re, p.z.im]).collect();
            let v = report(
                "eye-boundary",
                json!({ "samples": samples, "tol": common.tol }),
                common.tol,
                Value::Null,
                json!({ "t0": b.t0, "points": pts }),
            );
            write_json(common, &v)
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let k: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| Failure::Config(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Outcome<()> {
    configure_threads()?;
    match &cli.command {
        Command::Constant { n, common } => constant(*n, common),
        Command::SphereCount { geometry, common } => sphere_count(geometry, common),
        Command::TransparentCount { geometry, c, common } => transparent_count(geometry, *c, common),
        Command::ApproxResonances { n, l, radius, common } => approx_resonances(*n, *l, *radius, common),
        Command::CountingCompare {
            inputs,
            radius,
            big_r,
            radii,
            common,
        } => counting_compare(inputs, *radius, *big_r, radii, common),
        Command::EyeBoundary { samples, common } => eye(*samples, common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
