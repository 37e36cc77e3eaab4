use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use diffcoh::run::{dispatch, error_exit_code, Command, GaloisOp, Options, RunRequest};

#[derive(Parser)]
#[command(name = "diffcoh", version, about = "Exact difference cohomology computations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Budget for brute-force enumerations.
    #[arg(long, global = true)]
    bound: Option<u64>,

    /// Galois level N.
    #[arg(long, global = true)]
    level: Option<usize>,

    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Emit the report as JSON (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,

    /// Emit the report as plain text.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Args, Clone, Default)]
struct Input {
    /// Input document given on the command line.
    #[arg(long, conflicts_with = "file")]
    inline: Option<String>,

    /// Path of the input document.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    /// The difference operator is Frob_p^r.
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Smith normal form of an integer matrix.
    Snf(Input),
    /// Invariants, coinvariants and point cohomology of a difference module, or AS orbits of a finite group.
    Sigma(Input),
    /// Cohomology of a cochain complex.
    Complex(Input),
    /// Total cohomology and exact sequences of a two-row bicomplex.
    Bicomplex(Input),
    /// Difference Cech cohomology of cover nerves.
    Cech(Input),
    /// Difference cohomology of a simplicial complex with a self-map.
    Simplicial(Input),
    /// Finite difference fields.
    Galois {
        #[command(subcommand)]
        op: GaloisCmd,
    },
    /// Difference Picard group of an imaginary quadratic ring.
    Picard {
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[command(flatten)]
        input: Input,
    },
    /// Class group and units of a quadratic field.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[command(flatten)]
        input: Input,
    },
    /// The acceptance batch.
    Suite {
        /// Comma-separated criterion numbers; all by default.
        #[arg(long)]
        criteria: Option<String>,
    },
}

#[derive(Subcommand)]
enum GaloisCmd {
    /// Difference mu_2-torsors.
    Mu2 {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        input: Input,
    },
    /// Difference G_a^n-torsors of a linear recurrence.
    Ga {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated recurrence coefficients (field element encodings).
        #[arg(long)]
        lambdas: Option<String>,
        /// Comma-separated torsor parameters to classify.
        #[arg(long)]
        torsors: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Artin-Schreier group of the multiplicative group.
    Gm {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        input: Input,
    },
    /// Twisted conjugacy classes of GL_n.
    Gln {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Difference Galois cohomology of a cyclic extension.
    Cohomology {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
}

fn read_input(input: &Input) -> Result<Value, String> {
    let text = match (&input.inline, &input.file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => {
            std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
        }
        (None, None) => return Ok(json!({})),
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON: {e}"))
}

fn list(s: &str) -> Value {
    Value::Array(
        s.split(',')
            .map(|x| Value::String(x.trim().to_string()))
            .collect(),
    )
}

fn set(v: &mut Value, key: &str, x: Option<Value>) {
    if let Some(x) = x {
        v[key] = x;
    }
}

fn with_field(input: &Input, f: &FieldArgs) -> Result<Value, String> {
    let mut v = read_input(input)?;
    set(&mut v, "p", f.p.map(|x| x.to_string().into()));
    set(&mut v, "m", f.m.map(|x| x.to_string().into()));
    set(&mut v, "r", f.r.map(|x| x.to_string().into()));
    Ok(v)
}

fn request(cli: &Cli) -> Result<(Command, Value), String> {
    Ok(match &cli.command {
        Cmd::Snf(i) => (Command::Snf, read_input(i)?),
        Cmd::Sigma(i) => (Command::Sigma, read_input(i)?),
        Cmd::Complex(i) => (Command::Complex, read_input(i)?),
        Cmd::Bicomplex(i) => (Command::Bicomplex, read_input(i)?),
        Cmd::Cech(i) => (Command::Cech, read_input(i)?),
        Cmd::Simplicial(i) => (Command::Simplicial, read_input(i)?),
        Cmd::Picard { d, input } | Cmd::Classgroup { d, input } => {
            let mut v = read_input(input)?;
            set(&mut v, "d", d.map(|x| x.to_string().into()));
            let c = if matches!(cli.command, Cmd::Picard { .. }) {
                Command::Picard
            } else {
                Command::ClassGroup
            };
            (c, v)
        }
        Cmd::Suite { criteria } => {
            let mut v = json!({});
            set(&mut v, "criteria", criteria.as_deref().map(list));
            (Command::Suite, v)
        }
        Cmd::Galois { op } => match op {
            GaloisCmd::Mu2 { field, input } => (Command::Galois(GaloisOp::Mu2), with_field(input, field)?),
            GaloisCmd::Ga { field, lambdas, torsors, input } => {
                let mut v = with_field(input, field)?;
                set(&mut v, "lambdas", lambdas.as_deref().map(list));
                set(&mut v, "torsors", torsors.as_deref().map(list));
                (Command::Galois(GaloisOp::Ga), v)
            }
            GaloisCmd::Gm { field, input } => (Command::Galois(GaloisOp::Gm), with_field(input, field)?),
            GaloisCmd::Gln { field, n, input } => {
                let mut v = with_field(input, field)?;
                set(&mut v, "n", n.map(|x| x.to_string().into()));
                (Command::Galois(GaloisOp::Gln), v)
            }
            GaloisCmd::Cohomology { field, degree, input } => {
                let mut v = with_field(input, field)?;
                set(&mut v, "degree", degree.map(|x| x.to_string().into()));
                (Command::Galois(GaloisOp::Cohomology), v)
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, input) = match request(&cli) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let req = RunRequest {
        command,
        input,
        options: Options {
            bound: cli.bound,
            level: cli.level,
            seed: cli.seed,
        },
    };
    match dispatch(&req) {
        Ok(report) => {
            let text = if cli.table {
                report.to_table()
            } else {
                serde_json::to_string_pretty(&report.to_json()).unwrap() + "\n"
            };
            // a closed pipe (e.g. `| head`) is not an error worth panicking over
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
