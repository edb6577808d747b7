use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvebound::descent::{dioph_scan, find_descent, min_excluded_genus, min_excluded_genus_by_sign, DescentSearch};
use curvebound::engine::{
    audit, best_upper_bound, emit_table, is_consistent, verify_paper, BoundOptions, BoundQuery, BoundResult, DEEP_SEARCH_DEGREE, DEFAULT_SEARCH_DEGREE,
    TableFormat,
};
use curvebound::oesterle::optimize;
use curvebound::zetatypes::{candidate_types, default_pattern_degree_cap, pattern_table};
use curvebound::{Error, FieldContext, ZetaType};

const EXIT_INVALID: u8 = 1;
const EXIT_UNRESOLVED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "curvebound", version, about = "Upper bounds for the number of points on curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Best certified upper bound for N_q(g), with its derivation.
    Bound {
        q: u64,
        g: usize,
        #[command(flatten)]
        opts: BoundFlags,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Zeta types of genus g and defect k.
    Enumerate {
        g: usize,
        k: usize,
        #[arg(long)]
        deep: bool,
    },
    /// Defect-k patterns: types with no entry equal to m.
    Patterns { k: usize },
    /// Descent certificate for q = p^e.
    Descent {
        q: u64,
        #[arg(long)]
        json: bool,
    },
    /// Fields where 4q - m^2 = 4p - x^2.
    ScanDescent {
        #[arg(long, default_value_t = 50)]
        pmax: u64,
        #[arg(long, default_value_t = 13)]
        emax: u32,
        #[arg(long)]
        json: bool,
    },
    /// Explicit-formulae bound with certified weights.
    Oesterle {
        q: u64,
        g: usize,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bound table over a grid of fields and genera.
    Table {
        /// Comma-separated list of q.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Genus range `LO..HI` (inclusive) or a single genus.
        #[arg(long, value_parser = parse_range)]
        g: RangeInclusive<usize>,
        #[command(flatten)]
        opts: BoundFlags,
        #[arg(long)]
        json: bool,
    },
    /// Golden checks against the published values.
    VerifyPaper {
        #[arg(long)]
        deep: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone, Copy)]
struct BoundFlags {
    #[arg(long, default_value_t = 8)]
    max_defect: usize,
    /// Place-count horizon (default 2g).
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    /// Allow the degree-7 coefficient search.
    #[arg(long)]
    deep: bool,
    #[arg(long)]
    no_descent: bool,
    #[arg(long)]
    no_ht: bool,
    #[arg(long)]
    no_ft: bool,
    #[arg(long)]
    no_ef: bool,
    /// Also test descended counts against bounds over subfields.
    #[arg(long)]
    subfield_recursion: bool,
}

impl BoundFlags {
    fn options(self) -> BoundOptions {
        let mut o = BoundOptions {
            max_defect: self.max_defect,
            horizon: self.horizon,
            n_max: self.nmax,
            subfield_recursion: self.subfield_recursion,
            ..BoundOptions::default()
        };
        o.rules.descent = !self.no_descent;
        o.rules.honda_tate = !self.no_ht;
        o.rules.fuhrmann_torres = !self.no_ft;
        o.rules.explicit_formulae = !self.no_ef;
        if self.deep {
            o = o.deep();
        }
        o
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok(lo..=hi)
        }
        None => parse(s).map(|g| g..=g),
    }
}

enum Failure {
    Lib(Error),
    Unresolved,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn print_types(types: &[ZetaType]) {
    for ty in types {
        println!("{}\t{}", ty.label(), ty.poly());
    }
    println!("{} types", types.len());
}

fn print_bound(r: &BoundResult) {
    let q = &r.query;
    println!("q = {}, g = {}", q.q, q.g);
    println!("start: {} ({}), Serre-Weil {}", r.start.value, r.start.source.name(), r.start.serre_weil);
    for step in &r.ladder {
        let survivors: Vec<_> = step.survivors().collect();
        println!("N = {} (k = {}): {} candidates, {} unobstructed", step.n, step.k, step.candidates.len(), survivors.len());
        for c in step.candidates.iter().filter(|c| !c.survived()) {
            let label = c.label.clone().unwrap_or_else(|| c.poly().to_string());
            let rule = c.rule.map_or("-", |r| r.name());
            println!("  {label}: {rule}");
        }
        for c in survivors {
            println!("  {}: unobstructed", c.label.clone().unwrap_or_else(|| c.poly().to_string()));
        }
    }
    if r.resolved {
        println!("N_{}({}) <= {}", q.q, q.g, r.upper_bound);
    } else {
        println!(
            "N_{}({}) <= {} (unresolved: {})",
            q.q,
            q.g,
            r.upper_bound,
            r.unresolved_reason.as_deref().unwrap_or("")
        );
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Bound { q, g, opts, json: as_json, csv } => {
            let query = BoundQuery::new(q, g).with_options(opts.options());
            let r = best_upper_bound(&query)?;
            if !is_consistent(&r) || !audit(&r) {
                return Err(Failure::Internal("a witness failed re-verification".into()));
            }
            if as_json {
                println!("{}", json(&r));
            } else if csv {
                let rules: Vec<&str> = r.rules_used().iter().map(|r| r.name()).collect();
                println!("q,g,start,source,upper_bound,resolved,rules");
                println!(
                    "{q},{g},{},{},{},{},{}",
                    r.start.value,
                    r.start.source.name(),
                    r.upper_bound,
                    r.resolved,
                    rules.join(";")
                );
            } else {
                print_bound(&r);
            }
            if !r.resolved {
                return Err(Failure::Unresolved);
            }
        }
        Command::Enumerate { g, k, deep } => {
            let degree = if deep { DEEP_SEARCH_DEGREE } else { DEFAULT_SEARCH_DEGREE };
            print_types(&candidate_types(g, k, degree)?);
        }
        Command::Patterns { k } => print_types(&pattern_table(k, default_pattern_degree_cap(k))?),
        Command::Descent { q, json: as_json } => {
            let ctx = FieldContext::new(q)?;
            let found = find_descent(&ctx);
            if as_json {
                println!("{}", json(&found));
                return Ok(());
            }
            match &found {
                DescentSearch::NotApplicable { reason } => println!("not applicable: {reason}"),
                DescentSearch::Absent => println!("no descent for q = {q}"),
                DescentSearch::Found(c) => {
                    let (a, b) = &c.sigma_in_pi_basis;
                    println!("pi = {}, d = {}", c.pi, c.d);
                    println!("sigma = {} = {a} + {b} pi", c.sigma);
                    for s in &c.subfield_counts {
                        println!("{s}");
                    }
                    let show = |g: Option<usize>| g.map_or("none found".into(), |g| format!("g >= {g}"));
                    println!("defect 0 excluded (negative count): {}", show(min_excluded_genus_by_sign(c)));
                    println!("defect 0 excluded (all counts): {}", show(min_excluded_genus(c)));
                }
            }
        }
        Command::ScanDescent { pmax, emax, json: as_json } => {
            let rows = dioph_scan(pmax, emax);
            if as_json {
                println!("{}", json(&rows));
            } else {
                println!("p\te\tq\tx\ty\td\tverified\td>3\tsquarefree");
                for r in rows {
                    println!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        r.p, r.e, r.q, r.x, r.y, r.d, r.verified, r.d_above_3, r.d_squarefree
                    );
                }
            }
        }
        Command::Oesterle { q, g, nmax, json: as_json } => {
            let ctx = FieldContext::new(q)?;
            let r = optimize(&ctx, g, nmax);
            if as_json {
                println!("{}", json(&r));
            } else {
                println!("N_{q}({g}) <= {} (value {} ~ {:.4})", r.bound, r.value, r.value.to_f64());
                println!("weights: {}", r.weights);
            }
        }
        Command::Table { q, g, opts, json: as_json } => {
            let format = if as_json { TableFormat::Json } else { TableFormat::Csv };
            print!("{}", emit_table(&q, g, opts.options(), format)?);
        }
        Command::VerifyPaper { deep, json: as_json } => {
            let rep = verify_paper(deep);
            if as_json {
                println!("{}", json(&rep));
            } else {
                for i in &rep.items {
                    let status = if i.pass { "PASS" } else { "FAIL" };
                    println!("{status} [{}] {}: expected {}, observed {} ({} ms)", i.criterion, i.name, i.expected, i.observed, i.millis);
                }
                println!("[9] randomized property suites run under `cargo test`");
            }
            if !rep.all_pass() {
                return Err(Failure::Internal("golden check failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unresolved) => ExitCode::from(EXIT_UNRESOLVED),
        Err(Failure::Lib(Error::Internal(msg))) | Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
