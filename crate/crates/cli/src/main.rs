use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cmsoule::analytic::{make_lattice, PrecisionContext, DEFAULT_BITS};
use cmsoule::characters::{surjectivity_verdict, VerdictOptions, DEFAULT_Q_BOUND};
use cmsoule::identities::{run_suite, Suite};
use cmsoule::padic::{frobenius_generates_test, hensel_embed, purely_local_test, Side};
use cmsoule::quadfield::{split_in, Field, QuadInt, CLASS_NUMBER_ONE};
use cmsoule_cli::config::{load_facts, PRECISION_ENV};
use cmsoule_cli::exit::{CliError, CliResult, ExitStatus};
use cmsoule_cli::output::{emit_json, envelope, write_atomic};
use cmsoule_cli::scan::{scan, to_csv};

#[derive(Parser)]
#[command(
    name = "cmsoule",
    version,
    about = "CM elliptic units and mod-p elliptic Soulé characters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Purely-local test and Frobenius generation for every split prime up to a bound.
    Scan(ScanArgs),
    /// Numerical verification of the theta-function identities.
    Verify(VerifyArgs),
    /// Surjectivity verdict for the mod-p elliptic Soulé character κ_m.
    Soule(SouleArgs),
    /// Splitting data of p in Q(√-d).
    FieldInfo(FieldInfoArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    field: u32,
    #[arg(long = "max")]
    max_p: u64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    threads: Option<usize>,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV copy of the per-prime records.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Field to check; all nine when absent.
    #[arg(long)]
    field: Option<u32>,
    #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
    suite: String,
    #[arg(long, env = PRECISION_ENV, default_value_t = DEFAULT_BITS)]
    precision: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SouleArgs {
    #[arg(long)]
    field: u32,
    #[arg(long)]
    p: u64,
    /// Index as "m1,m2".
    #[arg(long, value_parser = parse_index)]
    m: (i64, i64),
    /// Generator of 𝔞 as "a+b*w"; chosen automatically when absent.
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, env = PRECISION_ENV, default_value_t = DEFAULT_BITS)]
    precision: u32,
    /// Largest test prime q for the p-th power test.
    #[arg(long, default_value_t = DEFAULT_Q_BOUND)]
    q_bound: u64,
    /// TOML file of class-number facts.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FieldInfoArgs {
    #[arg(long)]
    field: u32,
    #[arg(long)]
    p: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn parse_index(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected m1,m2, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn field(d: u32) -> CliResult<Field> {
    Ok(Field::new(d)?)
}

fn precision(bits: u32) -> CliResult<PrecisionContext> {
    Ok(PrecisionContext::new(bits)?)
}

fn cmd_scan(a: ScanArgs) -> CliResult<ExitStatus> {
    let f = field(a.field)?;
    let report = match a.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Failure(e.to_string()))?
            .install(|| scan(f, a.max_p))?,
        None => scan(f, a.max_p)?,
    };
    if let Some(path) = &a.csv {
        let bytes = to_csv(&report).map_err(|e| CliError::Failure(e.to_string()))?;
        write_atomic(path, &bytes)?;
    }
    eprintln!(
        "d={} p<={}: {} split primes, counter-examples {:?}",
        report.d,
        report.max_p,
        report.split_primes,
        report
            .counter_examples
            .iter()
            .map(|c| c.p)
            .collect::<Vec<_>>()
    );
    emit_json(&envelope("scan", &report), a.out.as_deref())?;
    Ok(ExitStatus::Success)
}

fn cmd_verify(a: VerifyArgs) -> CliResult<ExitStatus> {
    let prec = precision(a.precision)?;
    let suite = Suite::parse(&a.suite)?;
    let fields: Vec<Field> = match a.field {
        Some(d) => vec![field(d)?],
        None => CLASS_NUMBER_ONE
            .iter()
            .map(|&d| Field::new(d).unwrap())
            .collect(),
    };
    let mut reports = Vec::new();
    for f in fields {
        let lat = make_lattice(f, prec);
        for r in run_suite(&lat, suite)? {
            eprintln!("{}", r.summary());
            reports.push(r);
        }
    }
    let all_pass = reports.iter().all(|r| r.pass);
    let value = envelope(
        "verify",
        json!({ "precision_bits": prec.bits(), "all_pass": all_pass, "reports": reports }),
    );
    emit_json(&value, a.out.as_deref())?;
    Ok(if all_pass {
        ExitStatus::Success
    } else {
        ExitStatus::Failure
    })
}

fn cmd_soule(a: SouleArgs) -> CliResult<ExitStatus> {
    let f = field(a.field)?;
    let ideal = a
        .ideal
        .as_deref()
        .map(|s| QuadInt::parse(f, s))
        .transpose()?;
    let mut opts = VerdictOptions {
        prec: precision(a.precision)?,
        trials: a.trials,
        q_bound: a.q_bound,
        ..VerdictOptions::default()
    };
    if let Some(path) = &a.config {
        opts.facts = load_facts(path)?;
    }
    let v = surjectivity_verdict(a.field, a.p, a.m, ideal.as_ref(), &opts)?;
    eprintln!("d={} p={} m={:?}: {:?}", v.d, v.p, v.m, v.verdict);
    emit_json(&envelope("soule", &v), a.out.as_deref())?;
    Ok(ExitStatus::Success)
}

fn cmd_field_info(a: FieldInfoArgs) -> CliResult<ExitStatus> {
    let f = field(a.field)?;
    let sp = split_in(f, a.p)?;
    let emb = hensel_embed(&sp, 1)?;
    let omega = QuadInt::omega(f);
    let unit = f.unit_generator();
    let w = f.w() as u64;
    let full = (a.p - 1) * (a.p - 1) / w;
    let prime = (a.p - 1) / w;
    let frob = frobenius_generates_test(&sp)?;
    let local = [
        purely_local_test(&sp, Side::PBar),
        purely_local_test(&sp, Side::P),
    ];
    if a.json {
        let v = json!({
            "d": f.d(),
            "w": w,
            "discriminant": f.discriminant(),
            "p": a.p,
            "pi": sp.pi,
            "pi_bar": sp.pi_bar,
            "i1_omega": emb.i1(&omega),
            "i2_omega": emb.i2(&omega),
            "unit_generator": unit,
            "i1_unit": emb.i1(&unit),
            "i2_unit": emb.i2(&unit),
            "transversal_size": full,
            "prime_transversal_size": prime,
            "purely_local_p_bar": local[0],
            "purely_local_p": local[1],
            "frobenius_generates": frob,
        });
        emit_json(&envelope("field-info", v), None)?;
    } else {
        let sym = f.omega_symbol();
        println!(
            "K = Q(sqrt(-{})), w = {w}, disc = {}",
            f.d(),
            f.discriminant()
        );
        println!("p = {} = ({})({})", a.p, sp.pi, sp.pi_bar);
        println!("pi = {}", sp.pi);
        println!(
            "i1({sym}) = {}, i2({sym}) = {}",
            emb.i1(&omega),
            emb.i2(&omega)
        );
        if unit != omega {
            println!(
                "i1({unit}) = {}, i2({unit}) = {}",
                emb.i1(&unit),
                emb.i2(&unit)
            );
        }
        println!("transversal size {full} (K(p)), {prime} (K(pi))");
        println!("purely local: p_bar side {}, p side {}", local[0], local[1]);
        println!("Frobenius generates: {frob}");
    }
    Ok(ExitStatus::Success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(a) => cmd_scan(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Soule(a) => cmd_soule(a),
        Command::FieldInfo(a) => cmd_field_info(a),
    };
    let status = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.status()
    });
    ExitCode::from(status as u8)
}
