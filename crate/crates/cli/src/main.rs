//! Command-line front end for the sl2h calculator: homology of SL2 over
//! Z[1/n], congruence subgroup homology, tame symbols, brute-force finite
//! group oracles, check suites, and table generation.
//!
//! Exit codes: 0 on success, 1 on a domain error (message on stderr) or a
//! failed check suite, 2 on a usage error. `--json` switches any subcommand
//! to structured output, one object per line.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sl2h::abelian::FinGenAb;
use sl2h::homology::{self, Gamma0H1, H2Result};
use sl2h::oracle::{BorelSide, FiniteMatrixGroup, DEFAULT_MODULUS_BOUND};
use sl2h::rat::Rat;
use sl2h::tame::{self, SymbolProduct};
use sl2h::{arith, verify};

const CONJECTURAL_PREFIX: &str = "CONJECTURAL (Conjecture 7.3):";

#[derive(Parser)]
#[command(
    name = "sl2h",
    version,
    about = "Homology of SL2 over rings of S-integers Z[1/n]",
    long_about = "Computes first and second homology of SL2(Z[1/n]) and related groups: \
congruence subgroup homology, tame symbols on second K-groups, and brute-force \
finite group oracles for cross-checking the closed forms."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First homology of SL2(Z[1/n]) for square-free n > 1
    H1(H1Args),
    /// Second homology of SL2(Z[1/n]) for square-free n > 1
    H2(H2Args),
    /// First homology of the Gamma_0(p) congruence subgroup over Z[1/n]
    Gamma0(Gamma0Args),
    /// Certified bounds on the free rank of the second homology
    Rank(RankArgs),
    /// Tame symbol of a product of Steinberg symbols at an odd prime
    Tame(TameArgs),
    /// Brute-force computations in finite matrix groups
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run named check suites
    Verify(VerifyArgs),
    /// Homology table over all square-free n up to a limit
    Table(TableArgs),
}

#[derive(Args)]
struct H1Args {
    /// Inverted modulus n
    n: u64,
    /// Emit a JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct H2Args {
    /// Inverted modulus n
    n: u64,
    /// Evaluate the extrapolated closed form when no exact answer is known
    #[arg(long)]
    allow_conjecture: bool,
    /// Emit a JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Gamma0Args {
    /// Inverted modulus n
    n: u64,
    /// Congruence prime p, coprime to n
    p: u64,
    /// Emit a JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RankArgs {
    /// Inverted modulus n
    n: u64,
    /// Emit a JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TameArgs {
    /// Odd prime at which to take the symbol
    p: u64,
    /// Nonzero rationals "num/den", an even count forming symbol pairs
    #[arg(required = true, num_args = 1..)]
    entries: Vec<String>,
    /// Emit a JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Enumerate SL2(Z/m): order and abelianization
    Sl2 {
        /// Modulus m
        m: u64,
        /// Largest modulus the enumeration will accept
        #[arg(long, default_value_t = DEFAULT_MODULUS_BOUND)]
        bound: u64,
        /// Emit a JSON object instead of text
        #[arg(long)]
        json: bool,
    },
    /// Enumerate a Borel subgroup of SL2(F_p): order and abelianization
    Borel {
        /// Prime p
        p: u64,
        /// Which triangular subgroup to enumerate
        #[arg(long, value_enum, default_value_t = SideArg::Upper)]
        side: SideArg,
        /// Largest modulus the enumeration will accept
        #[arg(long, default_value_t = DEFAULT_MODULUS_BOUND)]
        bound: u64,
        /// Emit a JSON object instead of text
        #[arg(long)]
        json: bool,
    },
    /// Check whether matrices generate SL2(Z/m)
    Generates {
        /// Modulus m
        m: u64,
        /// Matrix literals "a b c d", four rationals with denominators
        /// invertible mod m
        #[arg(required = true, num_args = 1..)]
        matrices: Vec<String>,
        /// Largest modulus the enumeration will accept
        #[arg(long, default_value_t = DEFAULT_MODULUS_BOUND)]
        bound: u64,
        /// Emit a JSON object instead of text
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Upper,
    Lower,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    /// List available suites and exit
    #[arg(long)]
    list: bool,
    /// Emit one JSON object per check instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Largest n to include
    #[arg(long, default_value_t = 100)]
    max: u64,
    /// Print extrapolated groups instead of partial data where no exact
    /// answer is known
    #[arg(long)]
    allow_conjecture: bool,
    /// Emit one JSON object per row instead of text
    #[arg(long)]
    json: bool,
}

enum Failure {
    Domain(sl2h::Error),
    ChecksFailed,
    Usage(String),
}

impl From<sl2h::Error> for Failure {
    fn from(e: sl2h::Error) -> Failure {
        Failure::Domain(e)
    }
}

#[derive(Serialize)]
struct GroupJson {
    free_rank: u64,
    invariant_factors: Vec<u64>,
}

impl From<&FinGenAb> for GroupJson {
    fn from(g: &FinGenAb) -> GroupJson {
        GroupJson { free_rank: g.free_rank(), invariant_factors: g.invariant_factors() }
    }
}

#[derive(Serialize)]
struct H1Json {
    n: u64,
    free_rank: u64,
    invariant_factors: Vec<u64>,
}

#[derive(Serialize)]
struct H2Json {
    n: u64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    free_rank: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariant_factors: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_lo: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_hi: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<GroupJson>,
}

impl H2Json {
    fn of(n: u64, result: &H2Result) -> H2Json {
        match result {
            H2Result::Exact { group, .. } | H2Result::Conjectural { group, .. } => H2Json {
                n,
                status: result.status(),
                free_rank: Some(group.free_rank()),
                invariant_factors: Some(group.invariant_factors()),
                rank_lo: None,
                rank_hi: None,
                quotient: None,
            },
            H2Result::Partial { quotient, rank_lo, rank_hi, .. } => H2Json {
                n,
                status: result.status(),
                free_rank: None,
                invariant_factors: None,
                rank_lo: Some(*rank_lo),
                rank_hi: Some(*rank_hi),
                quotient: Some(quotient.into()),
            },
        }
    }
}

#[derive(Serialize)]
struct Gamma0Json {
    n: u64,
    p: u64,
    applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    free_rank: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariant_factors: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct RankJson {
    n: u64,
    rank_lo: u64,
    rank_hi: u64,
}

#[derive(Serialize)]
struct TameJson {
    p: u64,
    value: u64,
}

#[derive(Serialize)]
struct OracleGroupJson {
    modulus: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<&'static str>,
    order: u64,
    free_rank: u64,
    invariant_factors: Vec<u64>,
}

#[derive(Serialize)]
struct GeneratesJson {
    modulus: u64,
    generates: bool,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    suite: &'a str,
    check: &'a str,
    passed: bool,
    details: &'a str,
}

#[derive(Serialize)]
struct TableRowJson {
    n: u64,
    h1: GroupJson,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    h2: Option<GroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_lo: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_hi: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<GroupJson>,
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    let line = serde_json::to_string(value)
        .map_err(|e| Failure::Usage(format!("cannot serialize output: {e}")))?;
    println!("{line}");
    Ok(())
}

fn run_h1(args: H1Args) -> Result<(), Failure> {
    let group = homology::h1_sl2_zn(args.n)?;
    if args.json {
        emit(&H1Json {
            n: args.n,
            free_rank: group.free_rank(),
            invariant_factors: group.invariant_factors(),
        })
    } else {
        println!("{group}");
        Ok(())
    }
}

fn run_h2(args: H2Args) -> Result<(), Failure> {
    let result = homology::h2_sl2_zn(args.n, args.allow_conjecture)?;
    if args.json {
        return emit(&H2Json::of(args.n, &result));
    }
    match &result {
        H2Result::Exact { group, .. } => println!("{group}"),
        H2Result::Conjectural { group, .. } => println!("{CONJECTURAL_PREFIX} {group}"),
        H2Result::Partial { quotient, rank_lo, rank_hi, .. } => {
            println!("partial: quotient {quotient}, rank {rank_lo}..{rank_hi}");
        }
    }
    Ok(())
}

fn run_gamma0(args: Gamma0Args) -> Result<(), Failure> {
    let result = homology::h1_gamma0(args.n, args.p)?;
    if args.json {
        let (applicable, free_rank, invariant_factors) = match &result {
            Gamma0H1::Group(g) => (true, Some(g.free_rank()), Some(g.invariant_factors())),
            Gamma0H1::NotApplicable => (false, None, None),
        };
        emit(&Gamma0Json { n: args.n, p: args.p, applicable, free_rank, invariant_factors })
    } else {
        println!("{result}");
        Ok(())
    }
}

fn run_rank(args: RankArgs) -> Result<(), Failure> {
    let (rank_lo, rank_hi) = homology::rank_bounds(args.n)?;
    if args.json {
        emit(&RankJson { n: args.n, rank_lo, rank_hi })
    } else {
        if rank_lo == rank_hi {
            println!("{rank_lo}");
        } else {
            println!("{rank_lo}..{rank_hi}");
        }
        Ok(())
    }
}

fn run_tame(args: TameArgs) -> Result<(), Failure> {
    if !args.entries.len().is_multiple_of(2) {
        return Err(Failure::Usage(format!(
            "symbol entries must come in pairs (got {} rationals)",
            args.entries.len()
        )));
    }
    let mut pairs = Vec::new();
    for chunk in args.entries.chunks(2) {
        pairs.push((Rat::parse(&chunk[0])?, Rat::parse(&chunk[1])?));
    }
    let value = tame::tame_symbol(args.p, &SymbolProduct::new(pairs)?)?;
    if args.json {
        emit(&TameJson { p: args.p, value })
    } else {
        println!("{value}");
        Ok(())
    }
}

fn parse_mod_m(literal: &str, m: u64) -> Result<[u64; 4], sl2h::Error> {
    let parts: Vec<&str> = literal.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(sl2h::Error::BadMatrixLiteral(literal.to_string()));
    }
    let mut out = [0u64; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = Rat::parse(part)?.residue_mod(m)?;
    }
    Ok(out)
}

fn print_oracle_group(
    group: &FiniteMatrixGroup,
    side: Option<&'static str>,
    json: bool,
) -> Result<(), Failure> {
    let ab = group.abelianization()?;
    if json {
        emit(&OracleGroupJson {
            modulus: group.modulus(),
            side,
            order: group.order(),
            free_rank: ab.free_rank(),
            invariant_factors: ab.invariant_factors(),
        })
    } else {
        println!("order {}", group.order());
        println!("abelianization {ab}");
        Ok(())
    }
}

fn run_oracle(cmd: OracleCommand) -> Result<(), Failure> {
    match cmd {
        OracleCommand::Sl2 { m, bound, json } => {
            let group = FiniteMatrixGroup::sl2_bounded(m, bound)?;
            print_oracle_group(&group, None, json)
        }
        OracleCommand::Borel { p, side, bound, json } => {
            let (side_enum, label) = match side {
                SideArg::Upper => (BorelSide::Upper, "upper"),
                SideArg::Lower => (BorelSide::Lower, "lower"),
            };
            let group = FiniteMatrixGroup::borel_bounded(p, side_enum, bound)?;
            print_oracle_group(&group, Some(label), json)
        }
        OracleCommand::Generates { m, matrices, bound, json } => {
            let group = FiniteMatrixGroup::sl2_bounded(m, bound)?;
            let gens: Vec<[u64; 4]> = matrices
                .iter()
                .map(|s| parse_mod_m(s, m))
                .collect::<Result<_, _>>()?;
            let generates = group.generates(&gens)?;
            if json {
                emit(&GeneratesJson { modulus: m, generates })
            } else {
                println!("{generates}");
                Ok(())
            }
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.list {
        for name in verify::suite_names() {
            println!("{name}");
        }
        return Ok(());
    }
    let suites: Vec<(&str, Vec<sl2h::Check>)> = if args.suite == "all" {
        verify::run_all()?
    } else {
        vec![(
            verify::suite_names()
                .into_iter()
                .find(|&n| n == args.suite)
                .ok_or_else(|| sl2h::Error::UnknownSuite(args.suite.clone()))?,
            verify::run_suite(&args.suite)?,
        )]
    };
    let mut total = 0usize;
    let mut failed = 0usize;
    for (suite, checks) in &suites {
        let bad: Vec<&sl2h::Check> = checks.iter().filter(|c| !c.passed).collect();
        total += checks.len();
        failed += bad.len();
        if args.json {
            for c in checks {
                emit(&CheckJson { suite, check: &c.name, passed: c.passed, details: &c.details })?;
            }
        } else if bad.is_empty() {
            let plural = if checks.len() == 1 { "" } else { "s" };
            println!("{suite}: ok ({} check{plural})", checks.len());
        } else {
            println!("{suite}: FAILED ({} of {} checks)", bad.len(), checks.len());
            for c in bad {
                println!("  FAIL {}: {}", c.name, c.details);
            }
        }
    }
    if !args.json {
        if failed == 0 {
            let plural = if suites.len() == 1 { "" } else { "s" };
            println!("all checks passed ({total} checks in {} suite{plural})", suites.len());
        } else {
            println!("{failed} of {total} checks failed");
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn run_table(args: TableArgs) -> Result<(), Failure> {
    if !args.json {
        println!("n\th1\th2\tstatus");
    }
    for n in arith::squarefree_up_to(args.max) {
        let h1 = homology::h1_sl2_zn(n)?;
        let h2 = homology::h2_sl2_zn(n, args.allow_conjecture)?;
        if args.json {
            let row = match &h2 {
                H2Result::Exact { group, .. } | H2Result::Conjectural { group, .. } => {
                    TableRowJson {
                        n,
                        h1: (&h1).into(),
                        status: h2.status(),
                        h2: Some(group.into()),
                        rank_lo: None,
                        rank_hi: None,
                        quotient: None,
                    }
                }
                H2Result::Partial { quotient, rank_lo, rank_hi, .. } => TableRowJson {
                    n,
                    h1: (&h1).into(),
                    status: h2.status(),
                    h2: None,
                    rank_lo: Some(*rank_lo),
                    rank_hi: Some(*rank_hi),
                    quotient: Some(quotient.into()),
                },
            };
            emit(&row)?;
        } else {
            let h2_text = match &h2 {
                H2Result::Exact { group, .. } | H2Result::Conjectural { group, .. } => {
                    group.to_string()
                }
                H2Result::Partial { quotient, rank_lo, rank_hi, .. } => {
                    format!("quotient {quotient}, rank {rank_lo}..{rank_hi}")
                }
            };
            println!("{n}\t{h1}\t{h2_text}\t{}", h2.status());
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::H1(args) => run_h1(args),
        Command::H2(args) => run_h2(args),
        Command::Gamma0(args) => run_gamma0(args),
        Command::Rank(args) => run_rank(args),
        Command::Tame(args) => run_tame(args),
        Command::Oracle(cmd) => run_oracle(cmd),
        Command::Verify(args) => run_verify(args),
        Command::Table(args) => run_table(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
