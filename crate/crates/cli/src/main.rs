//! `spatial`: canonical forms, classification and equivalence of spatial
//! matrices from the command line. Results are JSON on stdout; failures are a
//! JSON object on stderr with exit status 1 (bad input) or 2 (precondition).

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use spatial_core::json::{
    orbits_to_jsonl, parse_tensor, tensor_to_value, witness_to_value, ClassDoc, KroneckerDoc, LabelDoc, TensorDoc,
};
use spatial_core::oracle::{encode, orbit_partition_with};
use spatial_core::pencil::kronecker_form_seeded;
use spatial_core::spatial::{
    canonical_witness, classify_regular_with, equivalent_with, regular_part, theorem2_catalog,
};
use spatial_core::{Config, Error, PrimeField, SpatialMatrix};

#[derive(Parser, Debug)]
#[command(name = "spatial", version, about = "Canonical forms of m x n x 2 spatial matrices over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Include transformation witnesses in the output
    #[arg(long, global = true)]
    witness: bool,

    /// Expected field modulus; inputs over any other field are rejected
    #[arg(long, global = true, value_name = "PRIME")]
    p: Option<u32>,

    /// Work limit for brute-force enumeration
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u128>,

    /// Seed for randomized polynomial factorization
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical label of a tensor with at most two slices
    Canonicalize { input: String },
    /// Class of a regular tensor with n <= 2 and q <= 2
    Classify { input: String },
    /// Decide equivalence of two tensors
    Equiv { a: String, b: String },
    /// Kronecker blocks of the slice pair of a tensor with two slices
    Kronecker { input: String },
    /// Regular part and the transform exposing it
    RegularPart { input: String },
    /// Orbit table of a shape, or the orbit of one tensor
    Orbit {
        input: Option<String>,
        /// Shape as m,n,q
        #[arg(long, value_parser = parse_shape)]
        shape: Option<(usize, usize, usize)>,
    },
    /// Every class representative over GF(p)
    ListCanonical,
}

fn parse_shape(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [m, n, q] => Ok((m, n, q)),
        _ => Err(format!("expected m,n,q, got {s:?}")),
    }
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut body = json!({ "error": e.kind(), "message": e.to_string() });
        match &e {
            Error::NotRegular { m, n, q } => body["ranks"] = json!([m, n, q]),
            Error::FieldTooSmall { blocks } => body["blocks"] = json!(blocks.iter().map(|b| format!("{b:?}")).collect::<Vec<_>>()),
            Error::BudgetExceeded { needed, budget } => {
                body["needed"] = json!(needed.to_string());
                body["budget"] = json!(budget.to_string());
            }
            _ => {}
        }
        let code = match e {
            Error::Parse(_) => 1,
            _ => 2,
        };
        Failure { code, body }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: 1,
        body: json!({ "error": "Parse", "message": message }),
    }
}

fn io_failure(message: String) -> Failure {
    Failure {
        code: 1,
        body: json!({ "error": "Io", "message": message }),
    }
}

/// Path, inline JSON (leading `{`), or `-` for stdin.
fn read_tensor(arg: &str, cli: &Cli) -> Result<SpatialMatrix, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| io_failure(format!("stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| io_failure(format!("{arg}: {e}")))?
    };
    let t = parse_tensor(&text)?;
    check_modulus(t.field(), cli)?;
    Ok(t)
}

fn check_modulus(field: PrimeField, cli: &Cli) -> Result<(), Failure> {
    match cli.p {
        Some(p) if p != field.p() => Err(Error::FieldMismatch(field.p(), p).into()),
        _ => Ok(()),
    }
}

fn asserted_field(cli: &Cli) -> Result<PrimeField, Failure> {
    let p = cli.p.ok_or_else(|| input_failure("--p is required for this command".into()))?;
    PrimeField::new(p).map_err(|e| input_failure(e.to_string()))
}

fn config(cli: &Cli) -> Config {
    let mut cfg = Config::default();
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(budget) = cli.budget {
        cfg.budget = budget;
    }
    cfg
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let cfg = config(cli);
    let out = match &cli.command {
        Command::Canonicalize { input } => {
            let a = read_tensor(input, cli)?;
            let (label, w) = canonical_witness(&a, &cfg)?;
            let mut out = json!({
                "label": serde_json::to_value(LabelDoc::from_label(&label)).unwrap(),
                "canonical": tensor_to_value(&label.synthesize(a.field(), a.dims())),
            });
            if cli.witness {
                out["witness"] = witness_to_value(&w);
            }
            out
        }
        Command::Classify { input } => {
            let a = read_tensor(input, cli)?;
            let (class, w) = classify_regular_with(&a, &cfg)?;
            let mut out = serde_json::to_value(ClassDoc::from_class(&class)).unwrap();
            if cli.witness {
                out["witness"] = witness_to_value(&w);
            }
            out
        }
        Command::Equiv { a, b } => {
            let a = read_tensor(a, cli)?;
            let b = read_tensor(b, cli)?;
            let (eq, w) = equivalent_with(&a, &b, &cfg)?;
            let mut out = json!({ "equivalent": eq });
            if let Some(w) = w {
                out["witness"] = witness_to_value(&w);
            }
            out
        }
        Command::Kronecker { input } => {
            let a = read_tensor(input, cli)?;
            if a.dims().2 != 2 {
                return Err(Error::WrongSliceCount(a.dims().2).into());
            }
            let (form, w) = kronecker_form_seeded(&a.slice(0), &a.slice(1), cfg.seed)?;
            let mut out = serde_json::to_value(KroneckerDoc::from_form(&form)).unwrap();
            if cli.witness {
                out["witness"] = json!({ "R": w.r.to_rows(), "S": w.s.to_rows() });
            }
            out
        }
        Command::RegularPart { input } => {
            let a = read_tensor(input, cli)?;
            let (part, w) = regular_part(&a);
            json!({ "part": tensor_to_value(&part), "witness": witness_to_value(&w) })
        }
        Command::Orbit { input, shape } => {
            let (field, dims, member) = match (input, shape) {
                (Some(input), None) => {
                    let a = read_tensor(input, cli)?;
                    (a.field(), a.dims(), Some(encode(&a)))
                }
                (None, Some(dims)) => (asserted_field(cli)?, *dims, None),
                _ => return Err(input_failure("orbit takes either a tensor or --shape m,n,q".into())),
            };
            let orbits = orbit_partition_with(dims, field, &cfg)?;
            match member {
                None => return Ok(orbits_to_jsonl(&orbits)),
                Some(code) => {
                    let orbit = orbits
                        .iter()
                        .find(|o| o.members.binary_search(&code).is_ok())
                        .expect("partition covers every tensor");
                    json!({ "representative": tensor_to_value(&orbit.representative), "size": orbit.size })
                }
            }
        }
        Command::ListCanonical => {
            let field = asserted_field(cli)?;
            let entries: Vec<Value> = theorem2_catalog(field)
                .iter()
                .map(|c| {
                    let mut v = serde_json::to_value(ClassDoc::from_class(c)).unwrap();
                    let rep = c.representative(field).expect("catalog classes exist over their field");
                    v["tensor"] = serde_json::to_value(TensorDoc::from_tensor(&rep)).unwrap();
                    v
                })
                .collect();
            Value::Array(entries)
        }
    };
    Ok(format!("{out}\n"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // help and version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({ "error": "Usage", "message": e.to_string().trim_end() });
            eprintln!("{body}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
