use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sonc_core::certify::{certify_hypercube_with_cap, CertifyError};
use sonc_core::hypercube::{CubeError, DEFAULT_VERTEX_CAP, MAX_VERTEX_CAP};
use sonc_core::paperchecks::{putinar_bound, run_all};
use sonc_core::rational::{format_rational, parse_rational};
use sonc_core::shorten::shorten_certificate;
use sonc_core::text::{parse_poly, render_poly, PolySource};
use sonc_core::verify::{verify_certificate_with, VerifyOptions};
use sonc_core::{Certificate, ConstraintSet, Cube, Poly, Rational};

#[derive(Parser)]
#[command(name = "sonc", version, about = "Exact SONC certificates on constrained hypercubes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Problem {
    /// `pm1:n`, `01:n`, or a JSON file `{"roots": [["a","b"], ...]}`
    #[arg(long)]
    cube: String,
    /// JSON file `{"polys": [...], "N": "2"}`
    #[arg(long)]
    constraints: Option<PathBuf>,
    /// Polynomial file (JSON or text) or an inline expression such as `1 - x1*x2`
    #[arg(long)]
    poly: String,
    /// Largest dimension whose vertices may be enumerated
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Multilinear normal form of a polynomial modulo the cube ideal
    Reduce {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a certificate of nonnegativity on the feasible vertices
    Certify {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recorded in the certificate
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a certificate; exit code 0 iff it is valid
    Verify {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Prune a certificate to the Carathéodory bound per product group
    Shorten {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of variables, when the certificate has no terms to infer it from
        #[arg(long)]
        n: Option<usize>,
    },
    /// Structural regressions on the {±1} cube
    Paperchecks {
        #[command(subcommand)]
        action: PaperAction,
    },
    /// Evaluate a polynomial at a point, or at every vertex
    Eval {
        #[command(flatten)]
        problem: Problem,
        /// Comma-separated rationals, e.g. `1,-1/2`
        #[arg(long)]
        point: Option<String>,
    },
}

#[derive(Subcommand)]
enum PaperAction {
    Run,
    Bound {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Rejected(String),
    Usage(String),
    Capacity(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Rejected(m) | Failure::Usage(m) | Failure::Capacity(m) => m,
        }
    }
}

impl From<CubeError> for Failure {
    fn from(e: CubeError) -> Self {
        match e {
            CubeError::DimensionTooLarge { .. } => Failure::Capacity(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Cube(c) => c.into(),
            CertifyError::NegativeOnFeasibleVertex(_) | CertifyError::NoViolatedConstraint(_) => {
                Failure::Rejected(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_cube(spec: &str) -> Result<Cube, Failure> {
    if spec.starts_with("pm1:") || spec.starts_with("01:") {
        return Ok(Cube::from_shorthand(spec)?);
    }
    Ok(Cube::from_json(&read(Path::new(spec))?)?)
}

fn load_poly(arg: &str, n: usize) -> Result<Poly, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    let parsed = match serde_json::from_str::<PolySource>(&text) {
        Ok(src) => src.into_poly(n),
        Err(_) => parse_poly(&text, Some(n)),
    };
    parsed.map_err(|e| Failure::Usage(e.to_string()))
}

struct Loaded {
    cube: Cube,
    cs: ConstraintSet<Rational>,
    f: Poly,
    cap: usize,
}

fn load(p: &Problem) -> Result<Loaded, Failure> {
    if p.cap > MAX_VERTEX_CAP {
        return Err(Failure::Usage(format!("--cap must be at most {MAX_VERTEX_CAP}")));
    }
    let cube = load_cube(&p.cube)?;
    let cs = match &p.constraints {
        Some(path) => ConstraintSet::from_json(&cube, &read(path)?)?,
        None => ConstraintSet::empty(&cube),
    };
    let f = load_poly(&p.poly, cube.dim())?;
    Ok(Loaded { cube, cs, f, cap: p.cap })
}

#[derive(Serialize)]
struct Reduced<'a> {
    n: usize,
    remainder: &'a Poly,
    quotients: &'a [Poly],
}

fn cmd_reduce(p: &Problem, out: Option<&Path>) -> Outcome {
    let Loaded { cube, f, .. } = load(p)?;
    let nf = cube.normal_form(&f)?;
    let json = serde_json::to_string_pretty(&Reduced { n: cube.dim(), remainder: &nf.remainder, quotients: &nf.quotients })
        .expect("plain data");
    if out.is_some() {
        eprintln!("remainder: {}", render_poly(&nf.remainder));
    }
    write_or_print(out, &json)
}

fn cmd_certify(p: &Problem, out: Option<&Path>, seed: Option<u64>) -> Outcome {
    let Loaded { cube, cs, f, cap } = load(p)?;
    let mut cert = certify_hypercube_with_cap(&f, &cube, &cs, cap)?;
    cert.seed = seed;
    if out.is_some() {
        eprintln!("terms: {}, degree: {}", cert.len(), cert.degree);
    }
    write_or_print(out, &cert.to_json())
}

fn cmd_verify(p: &Problem, cert: &Path) -> Outcome {
    let Loaded { cube, cs, f, cap } = load(p)?;
    let cert = Certificate::from_json(&read(cert)?).map_err(|e| Failure::Usage(format!("certificate: {e}")))?;
    let opts = VerifyOptions { vertex_cap: cap, ..VerifyOptions::default() };
    let report = verify_certificate_with(&f, &cert, &cube, &cs, opts);
    println!("{}", report.to_json());
    if report.overall {
        Ok(())
    } else {
        Err(Failure::Rejected("certificate rejected".into()))
    }
}

fn cmd_shorten(input: &Path, out: Option<&Path>, n: Option<usize>) -> Outcome {
    let cert = Certificate::from_json(&read(input)?).map_err(|e| Failure::Usage(format!("certificate: {e}")))?;
    let n = n.or_else(|| cert.terms.first().map(|t| t.circuit.dim())).unwrap_or(0);
    let short = shorten_certificate(&cert, n);
    eprintln!("terms: {} → {}", cert.len(), short.len());
    write_or_print(out, &short.to_json())
}

fn cmd_paperchecks(action: &PaperAction) -> Outcome {
    match action {
        PaperAction::Run => {
            let rows = run_all();
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                println!("{:<width$}  {}", r.name, if r.passed { "pass" } else { "FAIL" });
            }
            let failed = rows.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(Failure::Rejected(format!("{failed} checks failed")));
            }
            Ok(())
        }
        PaperAction::Bound { n } => {
            let b = putinar_bound(*n).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{}", format_rational(&b));
            Ok(())
        }
    }
}

fn cmd_eval(p: &Problem, point: Option<&str>) -> Outcome {
    let Loaded { cube, cs, f, cap } = load(p)?;
    if let Some(point) = point {
        let x = point
            .split(',')
            .map(|s| parse_rational(s.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        if x.len() != cube.dim() {
            return Err(Failure::Usage(format!("point has {} coordinates, expected {}", x.len(), cube.dim())));
        }
        println!("{}", format_rational(&f.evaluate(&x)));
        return Ok(());
    }
    for v in cube.vertices_with_cap(cap)? {
        let coords: Vec<String> = v.iter().map(format_rational).collect();
        let tag = if cs.is_feasible(&v) { "feasible" } else { "infeasible" };
        println!("({})  {}  {tag}", coords.join(", "), format_rational(&f.evaluate(&v)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Reduce { problem, out } => cmd_reduce(problem, out.as_deref()),
        Command::Certify { problem, out, seed } => cmd_certify(problem, out.as_deref(), *seed),
        Command::Verify { problem, cert } => cmd_verify(problem, cert),
        Command::Shorten { input, out, n } => cmd_shorten(input, out.as_deref(), *n),
        Command::Paperchecks { action } => cmd_paperchecks(action),
        Command::Eval { problem, point } => cmd_eval(problem, point.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
