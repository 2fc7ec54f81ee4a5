//! Command-line front end: load and save representations, certificates,
//! and multiplicative specs; run the analyses; emit text and CSV reports.
//!
//! Exit codes: 0 success or PASS, 1 FAIL or refutation, 2 usage or file
//! errors, 3 budget exceeded (incomplete, not refuted).

use clap::{Parser, Subcommand};
use kreg::growth::{
    build_certificate, log_lower_bound_check, rational_to_f64, verify_certificate,
    BuildOutcome, GrowthOptions,
};
use kreg::jsonio::{
    format_rational, load_certificate, load_matrix, load_representation, load_spec,
    save_certificate, save_representation,
};
use kreg::linrep::ProbeOutcome;
use kreg::numtheory::{
    builtin_by_name, discrepancy_scan, g_recursion_check, repunit_identity_check,
    schlage_puchta_check, BUILTIN_NAMES,
};
use kreg::semigroup::{explore, ExplorationBudget, ExplorationStatus};
use kreg::spectral::classify;
use kreg::word::Word;
use kreg::Error;
use num_bigint::BigUint;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "kreg",
    version,
    about = "Exact analysis of k-regular integer sequences given as linear representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a representation at an index
    Eval {
        #[arg(long)]
        rep: PathBuf,
        /// Index, any size, in decimal
        #[arg(long)]
        n: String,
    },
    /// Evaluate a representation on a digit word (leading zeros allowed)
    EvalWord {
        #[arg(long)]
        rep: PathBuf,
        /// Digit string over '0'-'9','a'-'z'; empty string denotes 0
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Write the kernel subsequence n -> f(base^level * n + residue)
    Kernel {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        residue: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate reachable state vectors; print the automaton if the
    /// sequence takes finitely many values within the budget
    Probe {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Classify one integer matrix (finite order, linear, or expanding)
    Classify {
        /// JSON file holding a square array of rows of integers
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Explore the semigroup generated by the digit matrices
    Explore {
        #[arg(long)]
        rep: PathBuf,
        /// Maximum number of distinct elements
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Build a pumping certificate and optionally verify it
    Growth {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also verify the certificate up to this n
        #[arg(long)]
        verify_n: Option<u64>,
        #[arg(long, default_value_t = 8)]
        nmin: u64,
    },
    /// Verify a stored certificate against a representation
    Verify {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 8)]
        nmin: u64,
        /// Also write the (n, m(n)) table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exhibit the logarithmic lower bound on a geometric grid
    Loglb {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        /// Grid upper end, any size, in decimal
        #[arg(long)]
        xmax: String,
    },
    /// Write a builtin representation
    Builtin {
        /// One of: thue-morse, digit-sum, power-indicator, uk, lambda3,
        /// ones-count-ternary
        name: String,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stream partial sums of a multiplicative sign sequence
    MultScan {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        xmax: u64,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Search for the least congruence level r compatible with the values
    SpCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        rmax: u64,
        #[arg(long, default_value_t = 10_000)]
        nmax: u64,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
    },
    /// Check the alternating-numeral identity G((10)^m) = f(q) m
    Repunit {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        mmax: u32,
    },
    /// Check the recursion between full and q-coprime partial sums
    Grec {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        x: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn parse_biguint(s: &str, what: &str) -> Result<BigUint, Error> {
    BigUint::from_str(s.trim())
        .map_err(|_| Error::InvalidParameter(format!("{what} must be a decimal integer, got {s:?}")))
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Eval { rep, n } => {
            let rep = load_representation(&rep)?;
            let n = parse_biguint(&n, "--n")?;
            println!("{}", rep.evaluate(&n));
            Ok(EXIT_PASS)
        }
        Command::EvalWord { rep, word } => {
            let rep = load_representation(&rep)?;
            let word = Word::parse(&word, rep.base())?;
            println!("{}", rep.evaluate_word(&word)?);
            Ok(EXIT_PASS)
        }
        Command::Kernel {
            rep,
            level,
            residue,
            out,
        } => {
            let rep = load_representation(&rep)?;
            let sub = rep.kernel_subsequence(level, residue)?;
            save_representation(&out, &sub)?;
            println!(
                "kernel level={level} residue={residue}: base {} dim {} written to {}",
                sub.base(),
                sub.dim(),
                out.display()
            );
            Ok(EXIT_PASS)
        }
        Command::Probe { rep, budget } => {
            let rep = load_representation(&rep)?;
            match rep.automaticity_probe(budget) {
                ProbeOutcome::Automaton(auto) => {
                    println!("automaton: {} states, base {}", auto.state_count(), auto.base());
                    for s in 0..auto.state_count() {
                        let transitions: Vec<String> = (0..auto.base())
                            .map(|d| format!("{d} -> {}", auto.transition(s, d)))
                            .collect();
                        println!(
                            "state {s}{}: output {} | {}",
                            if s == auto.initial() { " (initial)" } else { "" },
                            auto.output(s),
                            transitions.join(", ")
                        );
                    }
                    Ok(EXIT_PASS)
                }
                ProbeOutcome::BudgetExceeded => {
                    println!(
                        "budget exceeded: more than {budget} distinct state vectors; \
                         the sequence may be unbounded"
                    );
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Classify { matrix } => {
            let m = load_matrix(&matrix)?;
            println!("{}", classify(&m));
            Ok(EXIT_PASS)
        }
        Command::Explore { rep, budget } => {
            let rep = load_representation(&rep)?;
            let budget = ExplorationBudget {
                max_elements: budget,
                ..ExplorationBudget::default()
            };
            let exploration = explore(rep.matrices(), &budget)?;
            println!("elements found: {}", exploration.elements.len());
            match exploration.status {
                ExplorationStatus::Closed(size) => {
                    println!("status: CLOSED({size})");
                    Ok(EXIT_PASS)
                }
                ExplorationStatus::Infinite { word, report } => {
                    let word = Word::new(rep.base(), word)?;
                    println!(
                        "status: INFINITE (witness word \"{word}\", {})",
                        report.classification
                    );
                    Ok(EXIT_PASS)
                }
                ExplorationStatus::BudgetExceeded(why) => {
                    println!("status: BUDGET_EXCEEDED ({why})");
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Growth {
            rep,
            out,
            verify_n,
            nmin,
        } => {
            let rep = load_representation(&rep)?;
            match build_certificate(&rep, &GrowthOptions::default())? {
                BuildOutcome::Certificate(cert) => {
                    save_certificate(&out, &cert)?;
                    println!(
                        "certificate: pump \"{}\", {} prefixes, {} suffixes, kind {}",
                        cert.pump(),
                        cert.prefixes().len(),
                        cert.suffixes().len(),
                        cert.kind()
                    );
                    println!(
                        "constants: c0 = {} (~{:.4}), c_log = {} (~{:.4}), M = {}, K_diag = {}",
                        format_rational(cert.c0()),
                        rational_to_f64(cert.c0()),
                        format_rational(cert.c_log()),
                        rational_to_f64(cert.c_log()),
                        cert.max_word_len(),
                        format_rational(&cert.k_diag(&rep)?),
                    );
                    println!("written to {}", out.display());
                    if let Some(n) = verify_n {
                        let report = verify_certificate(&rep, &cert, n, nmin)?;
                        if report.pass {
                            println!("verify n <= {n}: PASS");
                            Ok(EXIT_PASS)
                        } else {
                            println!(
                                "verify n <= {n}: FAIL at n = {}",
                                report.first_failure.unwrap()
                            );
                            Ok(EXIT_FAIL)
                        }
                    } else {
                        Ok(EXIT_PASS)
                    }
                }
                BuildOutcome::Bounded => {
                    println!(
                        "bounded: the digit-matrix semigroup is finite, the sequence \
                         takes finitely many values; no certificate exists"
                    );
                    Ok(EXIT_PASS)
                }
                BuildOutcome::BudgetExceeded { stage } => {
                    println!("budget exceeded during {stage}");
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Verify {
            rep,
            cert,
            n,
            nmin,
            csv,
        } => {
            let rep = load_representation(&rep)?;
            let cert = load_certificate(&cert)?;
            let report = verify_certificate(&rep, &cert, n, nmin)?;
            if let Some(path) = csv {
                std::fs::write(&path, report.to_csv()).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                println!("table written to {}", path.display());
            }
            if report.pass {
                if n < nmin {
                    println!("PASS (vacuous: n = {n} is below nmin = {nmin})");
                } else {
                    println!(
                        "PASS: m(n) >= c0 n for all n in [{nmin}, {n}], c0 = {}",
                        format_rational(&report.c0)
                    );
                }
                Ok(EXIT_PASS)
            } else {
                println!("FAIL at n = {}", report.first_failure.unwrap());
                Ok(EXIT_FAIL)
            }
        }
        Command::Loglb { rep, cert, xmax } => {
            let rep = load_representation(&rep)?;
            let cert = load_certificate(&cert)?;
            let xmax = parse_biguint(&xmax, "--xmax")?;
            let report = log_lower_bound_check(&rep, &cert, &xmax)?;
            for row in &report.rows {
                match &row.witness {
                    Some(w) => println!(
                        "x = {}: N = {} (pump count {}), |f(N)| = {} > {}",
                        row.x,
                        w.value,
                        w.n,
                        w.f_abs,
                        format_rational(&w.threshold)
                    ),
                    None => println!("x = {}: no witness", row.x),
                }
            }
            if report.pass {
                println!("PASS: every grid point carries a witness");
                Ok(EXIT_PASS)
            } else {
                println!("FAIL: some grid point has no witness");
                Ok(EXIT_FAIL)
            }
        }
        Command::Builtin { name, base, out } => {
            let rep = builtin_by_name(&name, base).map_err(|e| match e {
                Error::UnknownBuiltin(n) => Error::InvalidParameter(format!(
                    "unknown builtin `{n}`; available: {}",
                    BUILTIN_NAMES.join(", ")
                )),
                other => other,
            })?;
            save_representation(&out, &rep)?;
            println!(
                "{}: base {} dim {} written to {}",
                rep.name().unwrap_or(&name),
                rep.base(),
                rep.dim(),
                out.display()
            );
            Ok(EXIT_PASS)
        }
        Command::MultScan { spec, xmax, csv } => {
            let spec = load_spec(&spec)?;
            let report = discrepancy_scan(&spec, xmax)?;
            std::fs::write(&csv, report.to_csv()).map_err(|source| Error::Io {
                path: csv.display().to_string(),
                source,
            })?;
            println!("scan of {spec} up to {xmax}");
            println!("max |G| = {}", report.max_abs_g);
            println!("empirical C = min runmax / ln x over the grid = {:.4}", report.empirical_c);
            println!("table written to {}", csv.display());
            match report.quadratic_bound_ok {
                Some(true) => {
                    println!("quadratic bound |G(x)| <= q (1 + log_q x): ok");
                    Ok(EXIT_PASS)
                }
                Some(false) => {
                    println!(
                        "quadratic bound violated at n = {}",
                        report.quadratic_bound_violation.unwrap()
                    );
                    Ok(EXIT_FAIL)
                }
                None => Ok(EXIT_PASS),
            }
        }
        Command::SpCheck {
            spec,
            rmax,
            nmax,
            lmax,
        } => {
            let spec = load_spec(&spec)?;
            let k = spec.base()?;
            let report = schlage_puchta_check(&spec, k, rmax, nmax, lmax)?;
            for refutation in &report.refutations {
                println!(
                    "r = {} refuted: f({}) = {} but f({}) = {} (congruent mod {}^{})",
                    refutation.r,
                    refutation.n1,
                    refutation.f_n1,
                    refutation.n2,
                    refutation.f_n2,
                    k,
                    refutation.r as u32 + refutation.level
                );
            }
            match report.result {
                Some(r) => {
                    println!(
                        "r = {r} (no violation for n1, n2 <= {nmax}, level <= {lmax}; \
                         bounded search, not a proof)"
                    );
                    Ok(EXIT_PASS)
                }
                None => {
                    println!("none <= {rmax}");
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Repunit { spec, mmax } => {
            let spec = load_spec(&spec)?;
            let report = repunit_identity_check(&spec, mmax)?;
            for row in &report.rows {
                println!(
                    "m = {:2}: N = {} G(N) = {} expected {}{}",
                    row.m,
                    row.n,
                    row.g,
                    row.expected,
                    if row.g == row.expected { "" } else { "  MISMATCH" }
                );
            }
            if report.pass {
                println!("PASS");
                Ok(EXIT_PASS)
            } else {
                println!("FAIL");
                Ok(EXIT_FAIL)
            }
        }
        Command::Grec { spec, x } => {
            let spec = load_spec(&spec)?;
            let report = g_recursion_check(&spec, x)?;
            println!(
                "G({x}) by direct summation = {}, via coprime partial sums = {} ({})",
                report.g_direct,
                report.g_via_coprime_sums,
                if report.recursion_ok { "equal" } else { "MISMATCH" }
            );
            println!(
                "period step of the coprime sum = {} ({})",
                report.periodicity_constant,
                if report.periodicity_ok { "ok" } else { "MISMATCH" }
            );
            if report.pass {
                println!("PASS");
                Ok(EXIT_PASS)
            } else {
                println!("FAIL");
                Ok(EXIT_FAIL)
            }
        }
    }
}
