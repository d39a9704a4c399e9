use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyclolab::ball::round_fixed;
use cyclolab::bounds::{check_real_bounds, real_bounds_grid};
use cyclolab::nearmiss::{find_triples, perturbation_estimate, table1, table_row, TripleRecord, TABLE1_ROWS};
use cyclolab::ordering::{certify_consecutive, gap, ordered_prefix, phi_class_sorted};
use cyclolab::par::{self, Mode};
use cyclolab::poly::{cyclotomic, eval_cyclotomic_rational, parse_rational, CyclotomicTable, PolyJson, Rational};
use cyclolab::rationalcheck::{primitive_prime_divisor, verify_integer_coincidences, verify_rational_coincidences, Coincidence};
use cyclolab::roots::{certified_real_record, complex_record, scan_complex_cached, scan_real_cached};

#[derive(Parser)]
#[command(name = "cyclolab", version, about = "Exact experiments with cyclotomic polynomials and their coincidences")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Decimal digits for high-precision output.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=200))]
    digits: Option<u32>,
    /// Worker threads. CYCLOLAB_JOBS takes precedence when set.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout. For `scan` this is the
    /// JSON-lines record log.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reuse records already in the `scan` log.
    #[arg(long, global = true)]
    resume: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of Φ_n.
    Poly { n: u64 },
    /// Exact value of Φ_n at a rational point.
    #[command(allow_negative_numbers = true)]
    Eval { n: u64, x: String },
    /// The ordering by values at large x.
    Order {
        #[command(subcommand)]
        query: OrderQuery,
    },
    /// Roots of Φ_m − Φ_n.
    Roots {
        m: u64,
        n: u64,
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// All pairs m < n ≤ M: real range check or complex moduli.
    Scan {
        #[arg(long)]
        max_index: u64,
        #[arg(long)]
        complex: bool,
        #[arg(long)]
        coprime: bool,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// Prime triples pq = p + q + r and their near-miss roots.
    Nearmiss {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        qmax: u64,
    },
    /// The ten published near-miss rows.
    Table1,
    /// Size bounds for Φ_n(x) on a grid of n and real x ≥ 2.
    Bounds {
        #[arg(long)]
        n_max: u64,
        /// Comma-separated points, e.g. 2,5/2,3.
        #[arg(long, value_delimiter = ',', default_value = "2,5/2,3,4,10")]
        xs: Vec<String>,
    },
    /// Primitive prime divisor of a^n − b^n.
    Bang { a: u64, b: u64, n: u64 },
    /// Exhaustive search for Φ_m(r) = Φ_n(r) at integers and fractions.
    VerifyRational {
        #[arg(long)]
        height: u64,
        #[arg(long)]
        max_index: u64,
        /// Largest integer point checked.
        #[arg(long, default_value_t = 10)]
        a_max: u64,
    },
}

#[derive(Subcommand)]
enum OrderQuery {
    /// Indices with φ(n) = k in increasing order.
    Class { k: u64 },
    /// All indices with φ(n) ≤ K in increasing order.
    Prefix { k: u64 },
    /// Whether m and n are adjacent.
    Consecutive { m: u64, n: u64 },
    /// γ(n).
    Gap { n: u64 },
}

/// A finished command: its output and whether the checked claim held.
struct Outcome {
    text: String,
    holds: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, holds: true }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn lines<T: Serialize>(items: &[T]) -> String {
    items.iter().map(|i| json(i) + "\n").collect()
}

fn exact(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn jobs(config: &RunConfig) -> Mode {
    let env = std::env::var("CYCLOLAB_JOBS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&j| j > 0);
    match env.or(config.jobs.map(|j| j as usize)) {
        Some(j) => Mode::with_jobs(j),
        None => Mode::default(),
    }
}

fn run(cli: Cli) -> cyclolab::Result<Outcome> {
    let config = &cli.config;
    let fmt = config.format;
    let digits = config.digits.unwrap_or(15);
    let mode = jobs(config);
    Ok(match cli.command {
        Command::Poly { n } => {
            let p = cyclotomic(n)?;
            Outcome::ok(match fmt {
                Format::Json => PolyJson::from_poly(&p, Some(n)).to_json() + "\n",
                Format::Csv => {
                    let mut s = String::from("power,coefficient\n");
                    for (i, c) in p.coeffs().iter().enumerate() {
                        writeln!(s, "{i},{c}").unwrap();
                    }
                    s
                }
                Format::Text => format!("{p}\n"),
            })
        }
        Command::Eval { n, x } => {
            let x = parse_rational(&x)?;
            let v = eval_cyclotomic_rational(n, &x)?;
            let decimal = round_fixed(&v, &v, digits).expect("exact value rounds");
            Outcome::ok(match fmt {
                Format::Text => format!("{}\n", exact(&v)),
                Format::Csv => format!("n,x,value,decimal\n{n},{},{},{decimal}\n", exact(&x), exact(&v)),
                Format::Json => {
                    json(&serde_json::json!({"n": n, "x": exact(&x), "value": exact(&v), "decimal": decimal})) + "\n"
                }
            })
        }
        Command::Order { query } => Outcome::ok(order(query, fmt, mode)?),
        Command::Roots { m, n, complex, precision } => {
            let table = CyclotomicTable::for_indices([m, n])?;
            let rec = if complex {
                complex_record(&table, m, n, precision)?
            } else {
                certified_real_record(&table, m, n, digits)?
            };
            Outcome::ok(match fmt {
                Format::Json => json(&rec) + "\n",
                _ => {
                    let mut s = String::new();
                    for r in &rec.roots {
                        let kind = if r.kind == cyclolab::roots::RootKind::Real { "real" } else { "complex" };
                        writeln!(s, "{kind}\t{}\t|x| = {}\tmult {}", r.value, r.modulus, r.multiplicity).unwrap();
                    }
                    s
                }
            })
        }
        Command::Scan { max_index, complex, coprime, precision } => {
            let cache = config.out.as_deref();
            if complex {
                let mut rep = scan_complex_cached(max_index, coprime, precision, mode, cache, config.resume)?;
                let holds = rep.holds;
                rep.records.clear();
                let text = match fmt {
                    Format::Json => json(&rep) + "\n",
                    _ => {
                        let mut s = format!("pairs m < n ≤ {max_index}{}\n", if coprime { ", coprime" } else { "" });
                        writeln!(s, "min modulus {:?}", rep.min_modulus).unwrap();
                        writeln!(s, "max modulus {:?}", rep.max_modulus).unwrap();
                        writeln!(s, "modulus √2 at {:?}", rep.sqrt2_pairs).unwrap();
                        writeln!(s, "outside (1/√2, √2]: {:?}", rep.outside).unwrap();
                        writeln!(s, "undecided: {:?}", rep.undecided).unwrap();
                        writeln!(s, "{}", if holds { "holds" } else { "fails" }).unwrap();
                        s
                    }
                };
                Outcome { text, holds }
            } else {
                let mut rep = scan_real_cached(max_index, digits, mode, cache, config.resume)?;
                let holds = rep.holds;
                rep.records.clear();
                let text = match fmt {
                    Format::Json => json(&rep) + "\n",
                    _ => {
                        let mut s = format!("pairs {} with m < n ≤ {max_index}, {} certified\n", rep.pairs, rep.certified);
                        writeln!(s, "largest nonzero |x| {:?}", rep.max_abs_nonzero).unwrap();
                        writeln!(s, "smallest nonzero |x| {:?}", rep.min_abs_nonzero).unwrap();
                        writeln!(s, "violations {:?}", rep.violations).unwrap();
                        writeln!(s, "{}", if holds { "holds" } else { "fails" }).unwrap();
                        s
                    }
                };
                Outcome { text, holds }
            }
        }
        Command::Nearmiss { p, qmax } => {
            let d = config.digits.unwrap_or(14);
            let triples = find_triples(p, qmax)?;
            let rows = par::map(mode, &triples, |&(q, _)| -> cyclolab::Result<_> {
                Ok((table_row(p, q, d)?, perturbation_estimate(p, q, d)?))
            })
            .into_iter()
            .collect::<cyclolab::Result<Vec<_>>>()?;
            Outcome::ok(match fmt {
                Format::Json => rows
                    .iter()
                    .map(|(row, est)| json(&serde_json::json!({"row": row, "estimate": est})) + "\n")
                    .collect(),
                _ => {
                    let mut s = table_csv(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>());
                    s.push_str("q,first_order,crude\n");
                    for (row, est) in &rows {
                        writeln!(s, "{},{},{}", row.q, est.first_order, est.crude).unwrap();
                    }
                    s
                }
            })
        }
        Command::Table1 => {
            let rows = table1(&TABLE1_ROWS, config.digits.unwrap_or(14), mode)?;
            Outcome::ok(match fmt {
                Format::Json => lines(&rows),
                _ => table_csv(&rows),
            })
        }
        Command::Bounds { n_max, xs } => {
            let xs = xs.iter().map(|x| parse_rational(x)).collect::<cyclolab::Result<Vec<_>>>()?;
            if let Some(x) = xs.first() {
                check_real_bounds(1, x)?;
            }
            let reports = real_bounds_grid(n_max, &xs, mode)?;
            let holds = reports.iter().all(|r| r.holds);
            let text = match fmt {
                Format::Text => {
                    let bad: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
                    let eq: Vec<_> = reports.iter().filter(|r| r.equality).map(|r| format!("({}, {})", r.n, r.point)).collect();
                    format!("{} points, {} failures, equality at {}\n", reports.len(), bad.len(), eq.join(" "))
                }
                _ => lines(&reports),
            };
            Outcome { text, holds }
        }
        Command::Bang { a, b, n } => {
            let r = primitive_prime_divisor(a, b, n)?;
            Outcome::ok(match fmt {
                Format::Json => json(&r) + "\n",
                _ => match (&r.prime, r.exception) {
                    (Some(p), _) => format!("{p}\n"),
                    (None, Some(e)) => format!("{}\n", e.tag()),
                    (None, None) => unreachable!("results carry a prime or an exception"),
                },
            })
        }
        Command::VerifyRational { height, max_index, a_max } => {
            let ints = verify_integer_coincidences(a_max, max_index, mode)?;
            let fracs = verify_rational_coincidences(height, max_index, mode)?;
            let expected = vec![Coincidence { point: "2".into(), m: 2, n: 6 }];
            let holds = (ints.coincidences == expected || (a_max < 2 || max_index < 6)) && fracs.coincidences.is_empty();
            let text = match fmt {
                Format::Json => json(&serde_json::json!({"integers": ints, "fractions": fracs, "holds": holds})) + "\n",
                _ => {
                    let show = |cs: &[Coincidence]| {
                        cs.iter().map(|c| format!("Φ_{}({}) = Φ_{}({})", c.m, c.point, c.n, c.point)).collect::<Vec<_>>().join(", ")
                    };
                    format!(
                        "integers ±2..±{a_max}: {} pairs, coincidences [{}]\nfractions of height ≤ {height}: {} pairs, coincidences [{}]\n{}\n",
                        ints.pairs_checked,
                        show(&ints.coincidences),
                        fracs.pairs_checked,
                        show(&fracs.coincidences),
                        if holds { "holds" } else { "fails" }
                    )
                }
            };
            Outcome { text, holds }
        }
    })
}

fn table_csv(rows: &[TripleRecord]) -> String {
    let mut s = String::from("p,q,r,beta,alpha,inv_gap,scaled_gap\n");
    for r in rows {
        writeln!(s, "{},{},{},{},{},{},{}", r.p, r.q, r.r, r.beta, r.alpha, r.inv_gap, r.scaled_gap).unwrap();
    }
    s
}

fn order(query: OrderQuery, fmt: Format, mode: Mode) -> cyclolab::Result<String> {
    let list = |v: Vec<u64>| match fmt {
        Format::Json => json(&v) + "\n",
        _ => v.iter().map(|n| format!("{n}\n")).collect(),
    };
    Ok(match query {
        OrderQuery::Class { k } => list(phi_class_sorted(k)?),
        OrderQuery::Prefix { k } => list(ordered_prefix(k, mode)?),
        OrderQuery::Gap { n } => format!("{}\n", gap(n)?),
        OrderQuery::Consecutive { m, n } => {
            let c = certify_consecutive(m, n)?;
            match fmt {
                Format::Json => json(&c) + "\n",
                _ => format!("{}\n{} ≺ {}, between: {:?}\n", c.consecutive, c.lower, c.upper, c.between),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = if matches!(cli.command, Command::Scan { .. }) { None } else { cli.config.out.clone() };
    match run(cli) {
        Ok(outcome) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
