use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ladderlab::diffusion::{self, Termination};
use ladderlab::fractal::{self, FractalLadderSpec};
use ladderlab::report::{self, fmt_real};
use ladderlab::{admittance, dsl, Error};

/// Admittance of recursive R-L ladders and series-parallel circuits.
#[derive(Parser)]
#[command(name = "ladderlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a circuit and print its canonical form.
    Parse { circuit: String },
    /// Admittance of a circuit at one frequency or over a log sweep.
    Admittance {
        circuit: String,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Admittance of a circuit as a rational function of s = jω.
    Rational { circuit: String },
    /// Fit the low-frequency exponent of an infinite Oustaloup ladder.
    Exponent {
        #[command(flatten)]
        ladder: Ladder,
        #[command(flatten)]
        sweep: Sweep,
        /// Relative change that stops depth doubling.
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        /// Depth cap for the infinite ladder.
        #[arg(long, default_value_t = 1 << 16)]
        depth: usize,
    },
    /// Residual of the finite-depth scaling identity over a sweep.
    ScalingCheck {
        #[command(flatten)]
        ladder: Ladder,
        #[command(flatten)]
        sweep: Sweep,
        /// Number of ladder stages.
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Grid ladder, discrete diffusion line and continuum line side by side.
    DiffusionCompare {
        #[arg(long, default_value_t = 1.0)]
        z1: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 120)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        #[arg(long, default_value_t = 1.0)]
        l0: f64,
        #[arg(long, default_value = "short", value_parser = ["short", "open"])]
        termination: String,
        #[command(flatten)]
        sweep: Sweep,
    },
}

#[derive(Args)]
struct Ladder {
    /// Inertance growth factor; resistances shrink by the same factor.
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    a1: f64,
    #[arg(long, default_value_t = 1.0)]
    b1: f64,
}

#[derive(Args)]
struct Sweep {
    /// Single frequency; overrides the sweep flags.
    #[arg(long, conflicts_with_all = ["omega_min", "omega_max", "points"])]
    omega: Option<f64>,
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

impl Sweep {
    /// Frequencies to visit, using `defaults` for unset flags.
    fn omegas(&self, defaults: (f64, f64, usize)) -> Result<Vec<f64>, Failure> {
        if let Some(w) = self.omega {
            if !(w.is_finite() && w != 0.0) {
                return Err(Failure::Usage("--omega must be finite and nonzero".into()));
            }
            return Ok(vec![w]);
        }
        let lo = self.omega_min.unwrap_or(defaults.0);
        let hi = self.omega_max.unwrap_or(defaults.1);
        let n = self.points.unwrap_or(defaults.2);
        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
            return Err(Failure::Usage("need 0 < --omega-min < --omega-max".into()));
        }
        if n < 2 {
            return Err(Failure::Usage("--points must be at least 2".into()));
        }
        fractal::log_space(lo, hi, n).map_err(Failure::from)
    }
}

enum Failure {
    /// Exit 2: bad flags, bad circuit text, bad parameter values.
    Usage(String),
    /// Exit 1: numeric breakdown or too little data.
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter { .. } | Error::NonPositiveValue(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn parse_circuit(text: &str) -> Result<ladderlab::Circuit, Failure> {
    dsl::parse(text).map_err(|e| {
        Failure::Usage(format!(
            "parse error at offset {}: {}",
            e.position, e.message
        ))
    })
}

fn oustaloup(l: &Ladder) -> Result<FractalLadderSpec, Failure> {
    Ok(FractalLadderSpec::oustaloup(l.a1, l.b1, l.sigma)?)
}

fn warn(msg: &str) {
    eprintln!("ladderlab: warning: {msg}");
}

fn run(command: &Command) -> Result<String, Failure> {
    let mut out = String::new();
    match command {
        Command::Parse { circuit } => {
            let c = parse_circuit(circuit)?;
            writeln!(out, "{}", dsl::format(&c)).unwrap();
        }
        Command::Admittance { circuit, sweep } => {
            let c = parse_circuit(circuit)?;
            let omegas = sweep.omegas((1e-3, 1e3, 25))?;
            writeln!(out, "{}", report::ADMITTANCE_HEADER).unwrap();
            for s in admittance::sweep(&c, &omegas)? {
                writeln!(out, "{}", report::admittance_row(s.omega, s.y)).unwrap();
            }
        }
        Command::Rational { circuit } => {
            let c = parse_circuit(circuit)?;
            writeln!(out, "{}", admittance::circuit_to_rational(&c)?).unwrap();
        }
        Command::Exponent {
            ladder,
            sweep,
            rel_tol,
            depth,
        } => {
            let spec = oustaloup(ladder)?;
            let omegas = sweep.omegas((
                fractal::DEFAULT_WINDOW.0,
                fractal::DEFAULT_WINDOW.1,
                fractal::DEFAULT_POINTS,
            ))?;
            let window = (omegas[0], omegas[omegas.len() - 1]);
            let scan = fractal::exponent_scan(&spec, window, omegas.len(), *rel_tol, *depth)?;
            if !scan.unconverged.is_empty() {
                warn(&format!(
                    "{} of {} frequencies did not converge within depth {depth}",
                    scan.unconverged.len(),
                    omegas.len()
                ));
            }
            let f = scan.fit;
            writeln!(out, "{}", report::EXPONENT_HEADER).unwrap();
            writeln!(
                out,
                "{},{}",
                report::csv_row(&[
                    spec.sigma(),
                    spec.a1(),
                    spec.b1(),
                    f.gamma,
                    f.k,
                    f.r2,
                    f.window.0,
                    f.window.1
                ]),
                f.points
            )
            .unwrap();
        }
        Command::ScalingCheck {
            ladder,
            sweep,
            depth,
        } => {
            let spec = oustaloup(ladder)?;
            let omegas = sweep.omegas((1e-4, 1e2, 25))?;
            writeln!(out, "omega,depth,residual").unwrap();
            for w in omegas {
                let r = fractal::scaling_residual(&spec, *depth, w)?;
                writeln!(out, "{},{depth},{}", fmt_real(w), fmt_real(r)).unwrap();
            }
        }
        Command::DiffusionCompare {
            z1,
            delta,
            n,
            r0,
            l0,
            termination,
            sweep,
        } => {
            let termination: Termination = termination.parse()?;
            let grid = diffusion::geometric_grid(*z1, *delta, *n)?;
            if !(*r0 > 0.0 && *l0 > 0.0) {
                return Err(Failure::Usage("--r0 and --l0 must be positive".into()));
            }
            let omegas = sweep.omegas((1e-5, 1e-3, 21))?;
            let lowest = omegas
                .iter()
                .copied()
                .map(f64::abs)
                .fold(f64::INFINITY, f64::min);
            if !diffusion::grid_adequate(&grid, *r0, *l0, lowest) {
                warn(&format!(
                    "grid ends at z = {} but the decay length at omega = {} is {}; need at least three decay lengths",
                    fmt_real(grid.last()),
                    fmt_real(lowest),
                    fmt_real(diffusion::decay_length(*r0, *l0, lowest))
                ));
                return Err(Failure::Numeric(
                    "grid too short for the requested frequencies".into(),
                ));
            }
            let cmp = diffusion::compare(&grid, *r0, *l0, termination, &omegas)?;
            writeln!(out, "{}", report::COMPARE_HEADER).unwrap();
            for r in &cmp.rows {
                writeln!(
                    out,
                    "{}",
                    report::csv_row(&[
                        r.omega,
                        r.ladder.re,
                        r.ladder.im,
                        r.line.re,
                        r.line.im,
                        r.continuum.re,
                        r.continuum.im
                    ])
                )
                .unwrap();
            }
            let slope = cmp.line_slope.map_or_else(|| "nan".to_string(), fmt_real);
            writeln!(
                out,
                "summary,max_discrepancy,{},slope,{slope},max_residual,{}",
                fmt_real(cmp.max_discrepancy),
                fmt_real(cmp.max_interior_residual)
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|text| {
        match &cli.output {
            Some(path) => std::fs::write(path, text),
            None => {
                use std::io::Write;
                std::io::stdout().lock().write_all(text.as_bytes())
            }
        }
        .map_err(|e| Failure::Numeric(format!("cannot write output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("ladderlab: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("ladderlab: {msg}");
            ExitCode::from(1)
        }
    }
}
