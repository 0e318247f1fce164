mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use chg_core::bounds::{eq2_furedi, eq3_group, thm1_main, BoundReport};
use chg_core::construct::{
    embedded_c33, freiman_embed, norm_set, sphere_set, weak_random_set, DEFAULT_CONSTRUCTION_CAP,
};
use chg_core::field::DEFAULT_FIELD_CAP;
use chg_core::search::{greedy_chg, max_table, DEFAULT_NODE_CAP};
use chg_core::setfile::{read_set_file, write_set_file};
use chg_core::verify::{
    build_zmatrix, check_kgh_free, verify_chg, verify_weak_chg, DEFAULT_SUBSET_CAP, DEFAULT_ZMATRIX_ORDER_CAP,
};
use chg_core::{Error, GSet, GroupDescriptor};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use report::{Report, VerdictSummary};

const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_PARAMETER: u8 = 4;
const EXIT_EXHAUSTED: u8 = 5;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "chg", version, about = "Construct, verify and search for C_h[g]-sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Cap on enumerated h-subsets during verification.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_CAP)]
    subset_cap: u128,

    /// Cap on search nodes per n.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,

    /// Write the resulting set to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Write the search table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a set with one of the explicit or randomized constructions.
    Construct {
        #[command(subcommand)]
        kind: Construction,
    },
    /// Check a set file for the (weak) C_h[g] property.
    Verify(VerifyArgs),
    /// Exact maximum C_h[g]-sets in [n] for n = 1..=n_max.
    Search(SearchArgs),
    /// Difference matrix of a set in a finite group and its K_{g,h} check.
    Zmatrix(ZmatrixArgs),
    /// Evaluate the closed-form bounds.
    Bounds(BoundsArgs),
}

#[derive(Subcommand)]
enum Construction {
    /// Points of a sphere in F_p^3; with --embed N, the digit image in [N].
    Sphere(SphereArgs),
    /// Norm-one elements of F_{q^h}; with --embed, the digit image in the integers.
    Norm(NormArgs),
    /// Random sample of [n] with bad elements deleted.
    Weak(WeakArgs),
}

#[derive(Args, Serialize)]
struct SphereArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    embed: Option<u64>,
}

#[derive(Args, Serialize)]
struct NormArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    embed: bool,
}

#[derive(Args, Serialize)]
struct WeakArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    g: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    max_attempts: u32,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    g: usize,
    #[arg(long)]
    weak: bool,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    n_max: u64,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    g: usize,
}

#[derive(Args, Serialize)]
struct ZmatrixArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    g: usize,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    pbm: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    h: u32,
    #[arg(long)]
    g: u32,
    #[arg(long, requires_all = ["s", "t"])]
    m: Option<u64>,
    #[arg(long, requires_all = ["m", "t"])]
    s: Option<u64>,
    #[arg(long, requires_all = ["m", "s"])]
    t: Option<u64>,
}

/// Report plus the exit status it implies.
struct Outcome {
    report: Report,
    code: u8,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, code: 0 }
    }

    fn from_verdict(report: Report) -> Self {
        let failed = report.verdict.as_ref().is_some_and(|v| !v.holds);
        Outcome {
            report,
            code: if failed { EXIT_VERIFY_FAILED } else { 0 },
        }
    }
}

fn params_of(args: &impl Serialize, cli: &Cli, caps: &[&str]) -> BTreeMap<String, Value> {
    let mut params: BTreeMap<String, Value> = match serde_json::to_value(args) {
        Ok(Value::Object(map)) => map.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => BTreeMap::new(),
    };
    for &cap in caps {
        let v = match cap {
            "subset_cap" => {
                u64::try_from(cli.subset_cap).map_or_else(|_| json!(cli.subset_cap.to_string()), |v| json!(v))
            }
            "node_cap" => json!(cli.node_cap),
            _ => continue,
        };
        params.insert(cap.to_string(), v);
    }
    params
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::Exhausted { .. } => EXIT_EXHAUSTED,
        Error::Structural(_) | Error::Parameter(_) | Error::Parse { .. } | Error::Io(_) => EXIT_PARAMETER,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

/// Group sets are bounded in their own group, interval sets through Z_2n.
fn add_set_bounds(report: &mut Report, group: GroupDescriptor, h: usize, g: usize) -> Result<(), Error> {
    if g < h || h < 2 {
        return Ok(());
    }
    let (h32, g32) = (h as u32, g as u32);
    match group {
        GroupDescriptor::IntegerInterval { n } => {
            report.bound("eq3_group(2n,h,g)", eq3_group(2.0 * n as f64, h32, g32)?);
            report.bound("thm1_main(n,h,g)", thm1_main(n as f64, h32, g32)?);
        }
        _ => report.bound("eq3_group(|G|,h,g)", eq3_group(group.order() as f64, h32, g32)?),
    }
    Ok(())
}

/// Verifies when the enumeration fits under the cap; otherwise records why not.
fn auto_verify(report: &mut Report, set: &GSet, h: usize, g: usize, cap: u128) -> Result<(), Error> {
    match verify_chg(set.group(), set, h, g, cap) {
        Ok(v) => report.verdict = Some(VerdictSummary::new(&v, set.group(), h, g, false)),
        Err(e @ Error::Resource { .. }) => report.details = Some(json!({ "verification_skipped": e.to_string() })),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn write_out(cli: &Cli, set: &GSet) -> Result<(), Error> {
    match &cli.out {
        Some(path) => write_set_file(path, set),
        None => Ok(()),
    }
}

fn construct_sphere(cli: &Cli, args: &SphereArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("construct sphere", params_of(args, cli, &["subset_cap"]));
    let set = match (args.p, args.embed) {
        (None, None) => return Err(usage("construct sphere needs --p, --embed or both")),
        (Some(p), None) => sphere_set(p, DEFAULT_CONSTRUCTION_CAP)?,
        (None, Some(n)) => {
            let (set, p) = embedded_c33(n, DEFAULT_CONSTRUCTION_CAP)?;
            report.params.insert("p_used".into(), json!(p));
            report.bound("(n/4)^(2/3)", (n as f64 / 4.0).cbrt().powi(2));
            set
        }
        (Some(p), Some(n)) => {
            if p.checked_pow(3).and_then(|c| c.checked_mul(4)).is_none_or(|c| c > n) {
                return Err(usage(format!("4p^3 = 4*{p}^3 exceeds n = {n}")));
            }
            let image = freiman_embed(2 * p, &sphere_set(p, DEFAULT_CONSTRUCTION_CAP)?)?;
            report.bound("(n/4)^(2/3)", (n as f64 / 4.0).cbrt().powi(2));
            GSet::new(GroupDescriptor::interval(n)?, image.elems().to_vec())?
        }
    };
    report.with_set(&set);
    add_set_bounds(&mut report, set.group(), 3, 3)?;
    auto_verify(&mut report, &set, 3, 3, cli.subset_cap)?;
    write_out(cli, &set)?;
    Ok(Outcome::from_verdict(report))
}

fn construct_norm(cli: &Cli, args: &NormArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("construct norm", params_of(args, cli, &["subset_cap"]));
    let (set, g) = norm_set(args.q, args.h, DEFAULT_FIELD_CAP)?;
    let set = if args.embed {
        freiman_embed(2 * args.q, &set)?
    } else {
        set
    };
    report.params.insert("g".into(), json!(g));
    report.with_set(&set);
    add_set_bounds(&mut report, set.group(), args.h, g)?;
    auto_verify(&mut report, &set, args.h, g, cli.subset_cap)?;
    write_out(cli, &set)?;
    Ok(Outcome::from_verdict(report))
}

fn construct_weak(cli: &Cli, args: &WeakArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("construct weak", params_of(args, cli, &["subset_cap"]));
    let out = weak_random_set(args.n, args.h, args.g, args.seed, args.max_attempts)?;
    report.with_set(&out.set);
    report.seed = Some(args.seed);
    report.attempts = Some(out.attempts_used);
    report.bound("np", out.density.np);
    report.bound("np/4", out.density.np / 4.0);
    report.bound("p", out.density.p);
    add_set_bounds(&mut report, out.set.group(), args.h, args.g)?;
    report.details = Some(json!({
        "attempt_seed": out.seed_used,
        "sampled": out.sampled,
        "bad": out.bad,
    }));
    let v = verify_weak_chg(out.set.group(), &out.set, args.h, args.g, cli.subset_cap)?;
    report.verdict = Some(VerdictSummary::new(&v, out.set.group(), args.h, args.g, true));
    write_out(cli, &out.set)?;
    Ok(Outcome::from_verdict(report))
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("verify", params_of(args, cli, &["subset_cap"]));
    let set = read_set_file(&args.set)?;
    report.with_set(&set);
    add_set_bounds(&mut report, set.group(), args.h, args.g)?;
    let v = if args.weak {
        verify_weak_chg(set.group(), &set, args.h, args.g, cli.subset_cap)?
    } else {
        verify_chg(set.group(), &set, args.h, args.g, cli.subset_cap)?
    };
    report.verdict = Some(VerdictSummary::new(&v, set.group(), args.h, args.g, args.weak));
    Ok(Outcome::from_verdict(report))
}

fn search(cli: &Cli, args: &SearchArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("search", params_of(args, cli, &["node_cap"]));
    let table = max_table(args.n_max, args.h, args.g, cli.node_cap)?;
    let (h32, g32) = (args.h as u32, args.g as u32);
    let mut csv = String::from("n,best_size,optimal,greedy_size,bound_eq3,thm1_main\n");
    let mut rows = Vec::new();
    for r in &table {
        let greedy = greedy_chg(r.n, args.h, args.g)?.len();
        let bound = eq3_group(2.0 * r.n as f64, h32, g32)?;
        let main = thm1_main(r.n as f64, h32, g32)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{:.6},{:.6}",
            r.n, r.best_size, r.optimal, greedy, bound, main
        );
        rows.push(json!({
            "n": r.n,
            "best_size": r.best_size,
            "optimal": r.optimal,
            "greedy_size": greedy,
            "nodes_explored": r.nodes_explored,
            "eq3_group(2n,h,g)": bound,
            "slack_eq3": bound - r.best_size as f64,
            "thm1_main(n,h,g)": main,
            "best_set": report::set_json(&r.best_set),
        }));
    }
    if let Some(path) = &cli.csv {
        fs::write(path, csv)?;
    }
    let all_optimal = table.iter().all(|r| r.optimal);
    if let Some(last) = table.last() {
        report.with_set(&last.best_set);
        add_set_bounds(&mut report, last.best_set.group(), args.h, args.g)?;
        write_out(cli, &last.best_set)?;
    }
    report.details = Some(json!({ "all_optimal": all_optimal, "table": rows }));
    Ok(Outcome {
        report,
        code: if all_optimal { 0 } else { EXIT_RESOURCE },
    })
}

fn zmatrix(cli: &Cli, args: &ZmatrixArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("zmatrix", params_of(args, cli, &["subset_cap"]));
    let set = read_set_file(&args.set)?;
    report.with_set(&set);
    let m = build_zmatrix(set.group(), &set, DEFAULT_ZMATRIX_ORDER_CAP)?;
    let v = check_kgh_free(&m, args.g, args.h, cli.subset_cap)?;
    if let Some(path) = &args.pbm {
        fs::write(path, m.to_pbm())?;
    }
    let sums = m.row_sums();
    let n = m.n() as u64;
    if n >= args.g as u64 && args.g >= args.h && args.h >= 1 {
        report.bound("eq2_furedi(n,n,g,h)", eq2_furedi(n, n, args.g as u64, args.h as u64)?);
    }
    report.details = Some(json!({
        "n": n,
        "ones": m.ones(),
        "row_sums_uniform": sums.windows(2).all(|w| w[0] == w[1]),
        "g": args.g,
        "h": args.h,
        "kgh_free": v.holds,
    }));
    let mut summary = VerdictSummary::new(&v, set.group(), args.h, args.g, false);
    summary.property = "no g x h all-ones submatrix".into();
    report.verdict = Some(summary);
    Ok(Outcome::from_verdict(report))
}

fn bounds(cli: &Cli, args: &BoundsArgs) -> Result<Outcome, Error> {
    let mut report = Report::new("bounds", params_of(args, cli, &[]));
    let b = BoundReport::new(args.n, args.h, args.g)?;
    report.bound("thm1_main(n,h,g)", b.thm1_main);
    report.bound("thm1_error_order", b.thm1_error_order);
    report.bound("eq3_group(n,h,g)", b.eq3_group);
    report.bound("eq3_group(2n,h,g)", b.eq3_interval_via_z2n);
    report.bound("thm5_lower(n,h,g)", b.thm5_lower);
    if let Some(d) = b.np_density {
        report.bound("np", d.np);
        report.bound("p", d.p);
    }
    if let (Some(m), Some(s), Some(t)) = (args.m, args.s, args.t) {
        report.bound("eq2_furedi(m,n,s,t)", eq2_furedi(m, args.n, s, t)?);
    }
    Ok(Outcome::ok(report))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Construct {
            kind: Construction::Sphere(a),
        } => construct_sphere(cli, a),
        Command::Construct {
            kind: Construction::Norm(a),
        } => construct_norm(cli, a),
        Command::Construct {
            kind: Construction::Weak(a),
        } => construct_weak(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Search(a) => search(cli, a),
        Command::Zmatrix(a) => zmatrix(cli, a),
        Command::Bounds(a) => bounds(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("chg: cannot start {k} threads: {e}");
            return ExitCode::from(EXIT_PARAMETER);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(Outcome { mut report, code }) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            match serde_json::to_string_pretty(&report) {
                Ok(text) => println!("{text}"),
                Err(e) => {
                    eprintln!("chg: cannot serialize report: {e}");
                    return ExitCode::from(EXIT_INTERNAL);
                }
            }
            if code == EXIT_VERIFY_FAILED {
                eprintln!("chg: verification failed");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("chg: {e}");
            if let Error::Exhausted { attempts } = &e {
                for a in attempts {
                    eprintln!(
                        "  attempt {}: seed {} sampled {} bad {}",
                        a.attempt, a.seed, a.sampled, a.bad
                    );
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
