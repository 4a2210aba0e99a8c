//! `ptr-forge`: build planes, coordinatise them and analyse the resulting
//! planar ternary rings.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const FORMATS: &str = "\
File formats:
  plane      JSON {\"order\": n, \"points\": n*n+n+1, \"lines\": [[sorted point indices], ...]},
             lines sorted lexicographically
  ptr table  header `ptr q=<q> p=<p> e=<e>`, then q^3 values T(m,x,y) in (m,x,y) order
  poly       header `poly q=<q> p=<p> e=<e> n=<arity>`, then `<i1> ... <in> <coeff>` per monomial
  quasifield header `q=<q>`, then q^2 lines `x y x∘y`
  map        q whitespace-separated values f(0), ..., f(q-1) (for `analyze kappa`)
Field elements are integers whose base-p digits are polynomial coefficients,
least significant first, over the lexicographically least monic irreducible.
`--in catalog:<id>` reads a bundled catalog entry instead of a file.

Exit codes: 0 ok, 1 a check failed (report still printed), 2 usage or input error.";

#[derive(Parser, Debug)]
#[command(name = "ptr-forge", version, about = "Coordinatise finite projective planes and analyse planar ternary rings", after_long_help = FORMATS)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Field as `p,e`; must match the input's order when both are given.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<(u64, u64)>,
    /// Input file, or `catalog:<id>`.
    #[arg(long = "in", global = true)]
    pub input: Option<String>,
    /// Output file for the command's artifact (plane, table, polynomial);
    /// commands without one write their report there.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Test every flag / case instead of the default sample.
    #[arg(long, global = true)]
    pub exhaustive: bool,
    /// Worker threads; never changes a report.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for the order in which sampled cases are visited.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

fn parse_field(s: &str) -> Result<(u64, u64), String> {
    let (p, e) = s.split_once(',').ok_or("expected p,e")?;
    Ok((
        p.trim().parse().map_err(|_| format!("bad prime `{p}`"))?,
        e.trim().parse().map_err(|_| format!("bad degree `{e}`"))?,
    ))
}

fn parse_quadrangle(s: &str) -> Result<[usize; 4], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad point `{t}`")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected four point indices i,j,k,l".to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, validate and test planes.
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// Coordinatise a plane (`--in` plane) and write its ternary table.
    Coordinatise(CoordinatiseArgs),
    /// Inspect a ternary table (`--in` table).
    #[command(subcommand)]
    Ptr(PtrCmd),
    /// Polynomial analyses of a ternary table (`--in` table).
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Fano configurations and involutions of the addition.
    #[command(subcommand)]
    Fano(FanoCmd),
    /// Central collineations and (point, line)-transitivity.
    #[command(subcommand)]
    Transitivity(TransitivityCmd),
    /// Bundled example inputs.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand, Debug)]
pub enum PlaneCmd {
    /// PG(2,q) from `--field`, or the plane of a table / quasifield from `--in`.
    Build,
    /// Check the projective plane axioms.
    Validate,
    /// Search for a non-Desargues configuration.
    Desargues,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Optimal {
    Add,
    Mul,
}

#[derive(Args, Debug)]
pub struct CoordinatiseArgs {
    /// Quadrangle O,X,Y,I as point indices; with `--optimal` only O,X,Y are used.
    #[arg(long, value_parser = parse_quadrangle)]
    pub quadrangle: Option<[usize; 4]>,
    /// Label so that addition (add) or multiplication (mul) is the field's.
    #[arg(long, value_enum)]
    pub optimal: Option<Optimal>,
    /// Also write the label -> point/line dump as JSON.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum PtrCmd {
    /// Properties (a)-(e), loops and linearity.
    Check,
    /// Interpolating polynomial.
    Poly,
    /// Split as Z + XYZ·M1 + M2.
    Decompose,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCmd {
    /// Permutation and fiber statements for the slices of T.
    Slices,
    /// Shape flags, degrees, coefficient sums and the linearity identity.
    Forms,
    /// S_ab(y + βz) = T(a,y,z) + β T(b,y,z) on F_{q^2}.
    Sab,
    /// Complete mappings M2(X,a) - X (requires addition = field addition).
    CompleteMappings,
    /// f(X) - f(Y) for a two-to-one map (`--in` map file, default squaring).
    Kappa,
}

#[derive(Subcommand, Debug)]
pub enum FanoCmd {
    /// Least quadrangle with collinear diagonal points.
    Find,
    /// Involutions of the addition of a coordinatisation, or with `--t` a
    /// coordinatisation built from a Fano witness so that t + t = 0.
    Involution {
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, value_parser = parse_quadrangle)]
        quadrangle: Option<[usize; 4]>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TransitivityCmd {
    /// Transitivity of every tested flag; every flag for order <= 5 or with
    /// `--exhaustive`, else incident flags plus every 8th non-incident one.
    Profile,
    /// The central collineations with one center and axis.
    Flag {
        #[arg(long)]
        point: usize,
        #[arg(long)]
        line: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    /// Entries with their manifests.
    List,
    /// Re-verify entries from scratch (all by default).
    Verify { ids: Vec<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut stdout = std::io::stdout().lock();
    let code = execute(&cli, &mut stdout);
    let _ = stdout.flush();
    ExitCode::from(code)
}

/// Runs one command, writing the report to `--out` or `stdout`, and returns
/// the exit code.
fn execute(cli: &Cli, stdout: &mut impl Write) -> u8 {
    let outcome = match commands::run(cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(raw) = outcome.raw {
        return match write!(stdout, "{raw}") {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        };
    }
    let text = if cli.global.pretty {
        serde_json::to_string_pretty(&outcome.report)
    } else {
        serde_json::to_string(&outcome.report)
    }
    .expect("reports serialize");
    let written = match (&cli.global.out, outcome.artifact_written) {
        (Some(path), false) => std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display())),
        _ => writeln!(stdout, "{text}").map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if outcome.ok {
        0
    } else {
        1
    }
}
