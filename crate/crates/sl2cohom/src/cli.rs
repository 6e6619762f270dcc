//! Command-line front end: cohomology tables, orbit decompositions, and the
//! verification suite, in text or JSON form.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on invalid
//! input. All results go to stdout, diagnostics to stderr.

use crate::cosets::{build_coset_space, decompose_under_B, verify_decomposition};
use crate::fp::{make_prime, primes_in, Prime};
use crate::tables::{
    gamma0_table, pgamma0_table, run_checks, sl2z_table, sl2zp_table, CheckKind, CohomologyTable,
    GroupFamily,
};
use crate::{abelian::FinAbGroup, DEFAULT_ENUM_BOUND};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "sl2cohom",
    about = "Integral cohomology tables for SL2(Z), Gamma0(p), PGamma0(p) and SL2(Z[1/p]), \
             with brute-force verification over SL2(F_p)",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Sl2z,
    Gamma0,
    Pgamma0,
    Sl2zp,
}

impl GroupArg {
    fn family(self) -> GroupFamily {
        match self {
            GroupArg::Sl2z => GroupFamily::SL2Z,
            GroupArg::Gamma0 => GroupFamily::Gamma0,
            GroupArg::Pgamma0 => GroupFamily::PGamma0,
            GroupArg::Sl2zp => GroupFamily::SL2Zp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FormatArg {
    #[default]
    Text,
    Json,
}

/// Inclusive degree range, written `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRange {
    pub lo: usize,
    pub hi: usize,
}

pub fn parse_degrees(s: &str) -> Result<DegreeRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected an inclusive range like 0..5, got '{s}'"))?;
    let lo: usize = a.trim().parse().map_err(|_| format!("invalid degree '{}'", a.trim()))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("invalid degree '{}'", b.trim()))?;
    if lo > hi {
        return Err(format!("empty degree range {lo}..{hi}"));
    }
    Ok(DegreeRange { lo, hi })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the cohomology table of one group family.
    Table {
        /// Group family: sl2z, gamma0, pgamma0 or sl2zp.
        #[arg(long, value_enum)]
        group: GroupArg,
        /// The prime p (not used with --group sl2z).
        #[arg(long)]
        p: Option<u64>,
        /// Inclusive degree range, e.g. 0..5.
        #[arg(long, default_value = "0..5", value_parser = parse_degrees)]
        degrees: DegreeRange,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Decompose G/C_k into Borel orbits and check the closed form.
    Decompose {
        /// The prime p (requires 3 < p <= bound).
        #[arg(long)]
        p: u64,
        /// Cyclic subgroup order: 2, 4 or 6.
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Enumeration bound; memory grows with |SL2(F_p)| ~ p^3.
        #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
        bound: u64,
    },
    /// Run the verification suite for one prime.
    Verify {
        #[arg(long)]
        p: u64,
        /// Comma-separated check names, or the groups "all" / "closed-form".
        #[arg(long, default_value = "all")]
        checks: String,
        /// Enumeration bound; brute-force checks skip above it.
        #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
        bound: u64,
    },
    /// Run checks for every prime in an inclusive range.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Comma-separated check names, or the groups "all" / "closed-form".
        #[arg(long, default_value = "all")]
        checks: String,
        /// Enumeration bound; brute-force checks skip above it.
        #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
        bound: u64,
    },
}

/// What a command produced: stdout, stderr, and the process exit code
/// (0 success, 1 verification failure, 2 invalid input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl CmdOutput {
    fn ok(stdout: String) -> CmdOutput {
        CmdOutput { stdout, stderr: String::new(), code: 0 }
    }

    fn failed(stdout: String) -> CmdOutput {
        CmdOutput { stdout, stderr: String::new(), code: 1 }
    }

    fn usage(message: impl std::fmt::Display) -> CmdOutput {
        CmdOutput { stdout: String::new(), stderr: format!("error: {message}\n"), code: 2 }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct TableJson {
    p: Option<u64>,
    group: String,
    cohomology: Vec<EntryJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct EntryJson {
    degree: usize,
    #[serde(flatten)]
    group: FinAbGroup,
}

#[derive(Debug, Serialize)]
struct OrbitJson {
    representative: [u64; 4],
    size: u64,
    stabilizer_order: u64,
    fixed_root: Option<u64>,
    singular: bool,
}

#[derive(Debug, Serialize)]
struct DecompositionJson {
    p: u64,
    k: u64,
    pass: bool,
    orbits: Vec<OrbitJson>,
}

fn render_table(table: &CohomologyTable, range: DegreeRange, format: FormatArg) -> String {
    match format {
        FormatArg::Text => {
            let mut out = String::new();
            for d in range.lo..=range.hi {
                out.push_str(&format!("H^{d} = {}\n", table.entry(d)));
            }
            out.push_str(&format!("period: 2 above degree {}\n", table.period_above));
            out
        }
        FormatArg::Json => {
            let doc = TableJson {
                p: table.p,
                group: table.family.tag().to_string(),
                cohomology: (range.lo..=range.hi)
                    .map(|degree| EntryJson { degree, group: table.entry(degree).clone() })
                    .collect(),
            };
            let mut s = serde_json::to_string(&doc).expect("tables serialize");
            s.push('\n');
            s
        }
    }
}

fn run_table(
    group: GroupArg,
    p: Option<u64>,
    degrees: DegreeRange,
    format: FormatArg,
) -> CmdOutput {
    let family = group.family();
    let table = if family.needs_p() {
        let Some(raw) = p else {
            return CmdOutput::usage(format_args!(
                "--p is required with --group {}",
                family.tag()
            ));
        };
        let prime = match make_prime(raw) {
            Ok(prime) => prime,
            Err(e) => return CmdOutput::usage(e),
        };
        match family {
            GroupFamily::Gamma0 => gamma0_table(prime, degrees.hi),
            GroupFamily::SL2Zp => sl2zp_table(prime, degrees.hi),
            GroupFamily::PGamma0 => match pgamma0_table(prime, degrees.hi) {
                Ok(t) => t,
                Err(e) => return CmdOutput::usage(e),
            },
            GroupFamily::SL2Z => unreachable!(),
        }
    } else {
        if p.is_some() {
            return CmdOutput::usage("--p is not used with --group sl2z");
        }
        sl2z_table(degrees.hi)
    };
    CmdOutput::ok(render_table(&table, degrees, format))
}

fn run_decompose(p: u64, k: u64, format: FormatArg, bound: u64) -> CmdOutput {
    let prime = match make_prime(p) {
        Ok(prime) => prime,
        Err(e) => return CmdOutput::usage(e),
    };
    let space = match build_coset_space(prime, k, bound) {
        Ok(space) => space,
        Err(e) => return CmdOutput::usage(e),
    };
    let dec = match decompose_under_B(&space) {
        Ok(dec) => dec,
        Err(e) => return CmdOutput::usage(e),
    };
    let report = verify_decomposition(&dec);

    let stdout = match format {
        FormatArg::Text => {
            let mut out = format!(
                "p = {p}, k = {k}: {} cosets in {} orbits\n",
                space.len(),
                dec.orbits().len()
            );
            for (i, o) in dec.orbits().iter().enumerate() {
                out.push_str(&format!(
                    "{:>4}. {}  size={}  stab={}",
                    i + 1,
                    o.representative,
                    o.size,
                    o.stabilizer_order
                ));
                if let Some(r) = o.fixed_root {
                    out.push_str(&format!("  root={r}"));
                }
                if o.singular {
                    out.push_str("  singular");
                }
                out.push('\n');
            }
            out.push_str(&format!("{report}\n"));
            out
        }
        FormatArg::Json => {
            let doc = DecompositionJson {
                p,
                k,
                pass: report.pass,
                orbits: dec
                    .orbits()
                    .iter()
                    .map(|o| OrbitJson {
                        representative: o.representative.entries(),
                        size: o.size,
                        stabilizer_order: o.stabilizer_order,
                        fixed_root: o.fixed_root,
                        singular: o.singular,
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string(&doc).expect("decompositions serialize");
            s.push('\n');
            s
        }
    };
    if report.pass {
        CmdOutput::ok(stdout)
    } else {
        CmdOutput::failed(stdout)
    }
}

pub fn parse_checks(s: &str) -> Result<Vec<CheckKind>, String> {
    let mut kinds = Vec::new();
    for part in s.split(',') {
        let name = part.trim();
        match name {
            "" => return Err("empty check name".to_string()),
            "all" => kinds.extend(CheckKind::ALL),
            "closed-form" => kinds.extend(CheckKind::CLOSED_FORM),
            _ => kinds.push(CheckKind::parse(name).ok_or_else(|| {
                format!(
                    "unknown check '{name}' (expected decomposition, n-of-p, pgamma0, euler, \
                     doubling, ucoeff, mv-order, or a group: all, closed-form)"
                )
            })?),
        }
    }
    Ok(kinds)
}

fn run_verify(p: u64, checks: &str, bound: u64) -> CmdOutput {
    let prime = match make_prime(p) {
        Ok(prime) => prime,
        Err(e) => return CmdOutput::usage(e),
    };
    let kinds = match parse_checks(checks) {
        Ok(kinds) => kinds,
        Err(e) => return CmdOutput::usage(e),
    };
    let report = run_checks(prime, &kinds, bound);
    let stdout = format!("p = {p}\n{report}\n");
    if report.all_passed() {
        CmdOutput::ok(stdout)
    } else {
        CmdOutput::failed(stdout)
    }
}

fn scan_line(p: Prime, kinds: &[CheckKind], bound: u64) -> (String, (usize, usize, usize)) {
    let report = run_checks(p, kinds, bound);
    let (passed, failed, skipped) = report.counts();
    let mut line = format!("p = {p}: {passed} passed, {failed} failed, {skipped} skipped\n");
    if failed > 0 {
        // expand the failing prime so the cause is visible in the summary
        for r in &report.results {
            line.push_str(&format!("    {:<13} {:<7} {}\n", r.kind.name(), r.status, r.detail));
        }
    }
    (line, (passed, failed, skipped))
}

fn run_scan(from: u64, to: u64, checks: &str, bound: u64) -> CmdOutput {
    if from > to {
        return CmdOutput::usage(format_args!("empty prime range {from}..{to}"));
    }
    let kinds = match parse_checks(checks) {
        Ok(kinds) => kinds,
        Err(e) => return CmdOutput::usage(e),
    };
    let primes = primes_in(from, to);
    let mut out = String::new();
    let mut totals = (0usize, 0usize, 0usize);
    let mut failing_primes = 0usize;
    for &p in &primes {
        let (line, (passed, failed, skipped)) = scan_line(p, &kinds, bound);
        out.push_str(&line);
        totals.0 += passed;
        totals.1 += failed;
        totals.2 += skipped;
        if failed > 0 {
            failing_primes += 1;
        }
    }
    out.push_str(&format!(
        "scanned {} primes in {from}..={to}: {} ok, {} with failures; checks: {} passed, {} failed, {} skipped\n",
        primes.len(),
        primes.len() - failing_primes,
        failing_primes,
        totals.0,
        totals.1,
        totals.2
    ));
    if failing_primes > 0 {
        CmdOutput::failed(out)
    } else {
        CmdOutput::ok(out)
    }
}

/// Executes a parsed command; never panics on user input.
pub fn run(command: &Command) -> CmdOutput {
    match command {
        Command::Table { group, p, degrees, format } => run_table(*group, *p, *degrees, *format),
        Command::Decompose { p, k, format, bound } => run_decompose(*p, *k, *format, *bound),
        Command::Verify { p, checks, bound } => run_verify(*p, checks, *bound),
        Command::Scan { from, to, checks, bound } => run_scan(*from, *to, checks, *bound),
    }
}
