//! `mmagma`: tables, factorizations, coefficient dumps and the verification
//! suite on the command line.
//!
//! Output is JSON lines unless `--format tsv` is given. Exit codes: 0 success,
//! 1 invariant or verification failure, 2 usage error, 3 resource bound.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use mersenne_magma::exponential::coefficient_table_tsv;
use mersenne_magma::prime_orders::WIEFERICH_SEARCH_CAP;
use mersenne_magma::verify::run_suite;
use mersenne_magma::{
    a_coefficient, a_hat, coefficient_table, exp_series, factor_mersenne, mersenne,
    mersenne_order, omega, parse, pi_m, wieferich_exponent, wieferich_search, Error,
    ExpCoefficient, FactorBound, Factorization, OmegaValue, PiConvention, Rational, TreeBudget,
};

const FACTOR_BOUND_VAR: &str = "MMAGMA_FACTOR_BOUND";
const TREE_BUDGET_VAR: &str = "MMAGMA_TREE_BUDGET";

#[derive(Parser)]
#[command(name = "mmagma", version, about = "Mersenne numbers and the magma exponential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Table of omega(n) for 1 <= n <= max.
    Omega {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max: u32,
        /// Add the prime factorization of each value.
        #[arg(long)]
        factor: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Mersenne orders, Wieferich exponents, factorizations and pi_M.
    Mersenne {
        #[command(subcommand)]
        command: MersenneCommand,
    },
    /// Coefficients of the exponential series.
    Exp {
        #[command(subcommand)]
        command: ExpCommand,
    },
    /// Runs every identity check up to a degree.
    Verify {
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum MersenneCommand {
    /// Multiplicative order of 2 modulo an odd prime.
    Order { p: u64 },
    /// Wieferich exponent of an odd prime.
    Wieferich { p: u64 },
    /// Prime factorization of 2^n - 1.
    Factor { n: u32 },
    /// Odd primes counted by Mersenne order.
    Pim {
        x: u32,
        /// `definition` counts v(p) <= x - 1, `example` counts v(p) <= x.
        #[arg(long, default_value = "definition")]
        convention: PiConvention,
    },
    /// Wieferich primes up to a limit.
    Search { limit: u64 },
}

#[derive(Subcommand)]
enum ExpCommand {
    /// a and a_hat for every tree of one degree, in canonical order.
    Coeffs {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The truncated series in text form.
    Series {
        #[arg(long)]
        degree: u32,
    },
    /// a and a_hat for a single tree such as `((x*x)*x)`.
    Coefficient { tree: String },
}

struct Limits {
    bound: FactorBound,
    budget: TreeBudget,
}

fn env_override(var: &str) -> Result<Option<u64>, Error> {
    match std::env::var(var) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{var}={text} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn limits() -> Result<Limits, Error> {
    let bound = match env_override(FACTOR_BOUND_VAR)? {
        Some(b) => FactorBound(u32::try_from(b).map_err(|_| {
            Error::InvalidArgument(format!("{FACTOR_BOUND_VAR} is too large"))
        })?),
        None => FactorBound::DEFAULT,
    };
    let budget = env_override(TREE_BUDGET_VAR)?.map_or(TreeBudget::DEFAULT, TreeBudget);
    Ok(Limits { bound, budget })
}

fn factor_map(f: &Factorization) -> Value {
    let mut map = Map::new();
    for (p, e) in f.iter() {
        map.insert(p.to_string(), json!(e));
    }
    Value::Object(map)
}

fn rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn coefficient_record(row: &ExpCoefficient) -> Value {
    json!({
        "tree": row.tree.to_string(),
        "degree": row.tree.degree(),
        "a": rational(&row.a),
        "a_hat": row.a_hat.to_string(),
    })
}

fn json_lines(records: &[Value]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}

/// Rendered output and whether every check held.
type Output = (String, bool);

fn run(command: Command, limits: &Limits) -> Result<Output, Error> {
    match command {
        Command::Omega { max, factor, format } => omega_table(max, factor, format, limits),
        Command::Mersenne { command } => mersenne_command(command, limits).map(|v| (v, true)),
        Command::Exp { command } => exp_command(command, limits).map(|v| (v, true)),
        Command::Verify { degree, format } => verify(degree, format, limits),
    }
}

fn omega_table(max: u32, factor: bool, format: Format, limits: &Limits) -> Result<Output, Error> {
    let mut out = String::new();
    for n in 1..=max {
        let (value, factorization) = if factor {
            let v = OmegaValue::compute(n, limits.bound)?;
            if v.factorization.product() != omega(n)? {
                return Err(Error::Invariant(format!("factorization of omega({n}) does not reassemble")));
            }
            (v.value, Some(v.factorization))
        } else {
            (omega(n)?, None)
        };
        match format {
            Format::Json => {
                let mut record = json!({ "n": n, "omega": value.to_string() });
                if let Some(f) = &factorization {
                    record["factorization"] = factor_map(f);
                }
                out.push_str(&format!("{record}\n"));
            }
            Format::Tsv => match &factorization {
                Some(f) => out.push_str(&format!("{n}\t{value}\t{f}\n")),
                None => out.push_str(&format!("{n}\t{value}\n")),
            },
        }
    }
    Ok((out, true))
}

fn mersenne_command(command: MersenneCommand, limits: &Limits) -> Result<String, Error> {
    let record = match command {
        MersenneCommand::Order { p } => {
            json!({ "p": p.to_string(), "order": mersenne_order(p)?.to_string() })
        }
        MersenneCommand::Wieferich { p } => {
            let eps = wieferich_exponent(p)?;
            json!({
                "p": p.to_string(),
                "order": mersenne_order(p)?.to_string(),
                "wieferich_exponent": eps,
                "wieferich": eps >= 2,
            })
        }
        MersenneCommand::Factor { n } => {
            let f = factor_mersenne(n, limits.bound)?;
            json!({
                "n": n,
                "value": mersenne(n)?.to_string(),
                "factorization": factor_map(&f),
            })
        }
        MersenneCommand::Pim { x, convention } => {
            let pi = pi_m(x, convention, limits.bound)?;
            let primes: Vec<String> = pi.primes.iter().map(|p| p.to_string()).collect();
            json!({
                "x": x,
                "convention": convention.to_string(),
                "count": pi.count,
                "primes": primes,
            })
        }
        MersenneCommand::Search { limit } => {
            let primes: Vec<String> = wieferich_search(limit, WIEFERICH_SEARCH_CAP)?
                .iter()
                .map(u64::to_string)
                .collect();
            json!({ "limit": limit, "primes": primes })
        }
    };
    Ok(format!("{record}\n"))
}

fn exp_command(command: ExpCommand, limits: &Limits) -> Result<String, Error> {
    match command {
        ExpCommand::Coeffs { degree, format } => {
            let rows = coefficient_table(degree, limits.budget)?;
            Ok(match format {
                Format::Json => json_lines(&rows.iter().map(coefficient_record).collect::<Vec<_>>()),
                Format::Tsv => coefficient_table_tsv(&rows),
            })
        }
        ExpCommand::Series { degree } => Ok(exp_series(degree, limits.budget)?.to_text()),
        ExpCommand::Coefficient { tree } => {
            let tree = parse(&tree)?;
            let row = ExpCoefficient { a: a_coefficient(&tree), a_hat: a_hat(&tree)?, tree };
            Ok(format!("{}\n", coefficient_record(&row)))
        }
    }
}

fn verify(degree: u32, format: Format, limits: &Limits) -> Result<Output, Error> {
    let report = run_suite(degree, limits.bound, limits.budget)?;
    let mut out = String::new();
    for check in &report {
        match format {
            Format::Json => {
                let mut record = json!({ "check": check.name, "passed": check.passed() });
                if let Some(c) = &check.counterexample {
                    record["counterexample"] = json!(c);
                }
                out.push_str(&format!("{record}\n"));
            }
            Format::Tsv => {
                let status = if check.passed() { "pass" } else { "fail" };
                out.push_str(&format!("{}\t{status}\n", check.name));
            }
        }
    }
    let first_failure = report.iter().find(|c| !c.passed());
    if let Some(c) = first_failure {
        let record = json!({ "check": c.name, "counterexample": c.counterexample });
        eprintln!("{record}");
    }
    Ok((out, first_failure.is_none()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = limits().and_then(|l| run(cli.command, &l));
    match result {
        Ok((text, ok)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("mmagma: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
