//! Command-line surface: single-query bounds, table and figure data as CSV,
//! construction, verification, and the brute-force oracle.
//!
//! Exit codes: 0 success, 2 invalid parameters or method not applicable,
//! 3 verification failure, 4 I/O or parse error.

use crate::bounds::{
    aggregate, alt_construction_p, alt_u_range, exact_known, main_construction_p, main_u_range,
    mms, nlb, thm_upper, Params,
};
use crate::construct::{
    brute_force_sp, build_3k6, plan_alt, plan_main, product_build, realize, GroundSplit,
    PartitionSystem, BRUTE_DEFAULT_CAP,
};
use crate::exactmath::BigNat;
use crate::verify::{to_detecting_array, verify_detecting, verify_system, Failure};
use clap::{Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_APPLICABLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser)]
#[command(
    name = "sperner",
    about = "Exact bounds, constructions and verification for Sperner partition systems",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Main,
    Alt,
    Family3k6,
    Product,
}

#[derive(Subcommand)]
enum Command {
    /// Print all bounds for a single (n, k).
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Emit a JSON record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Best-known bound table as CSV, one row per (n, k).
    Table {
        #[arg(long, default_value_t = 4)]
        k_min: u64,
        #[arg(long, default_value_t = 7)]
        k_max: u64,
        #[arg(long, default_value_t = 33)]
        n_max: u64,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Bound-interval data for one k, suitable for log-scale plots.
    Figure {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long)]
        csv: PathBuf,
        /// Also render a simple SVG next to the CSV data.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Build a verified system and write it as JSON.
    Construct {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        method: Method,
        /// Split parameter for the halved-ground-set constructions;
        /// defaults to the best admissible value.
        #[arg(long)]
        u: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size of the first factor for the product method.
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a system file; optionally also check its detecting array.
    Verify {
        path: PathBuf,
        #[arg(long)]
        detecting: bool,
    },
    /// Exact SP(n, k) for tiny n by exhaustive search.
    Brute {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = BRUTE_DEFAULT_CAP)]
        cap: u64,
        /// Write the witness system here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn write_system(path: &Path, sys: &PartitionSystem) -> Result<(), String> {
    let json = serde_json::to_string(sys).map_err(|e| e.to_string())?;
    std::fs::write(path, json + "\n").map_err(|e| format!("writing {}: {e}", path.display()))
}

/// Parses and structurally validates a system file.
pub fn read_system(path: &Path) -> Result<PartitionSystem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {e}", path.display()))?;
    let sys: PartitionSystem = serde_json::from_str(&text)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    if sys.k == 0 || sys.n == 0 {
        return Err(format!("{}: n and k must be positive", path.display()));
    }
    for (pi, partition) in sys.partitions.iter().enumerate() {
        if partition.len() != sys.k {
            return Err(format!(
                "{}: partitions[{pi}] has {} classes, expected {}",
                path.display(),
                partition.len(),
                sys.k
            ));
        }
        for (ci, class) in partition.iter().enumerate() {
            if class.is_empty() {
                return Err(format!(
                    "{}: partitions[{pi}][{ci}] is empty",
                    path.display()
                ));
            }
            if let Some(&e) = class.iter().find(|&&e| e as usize >= sys.n) {
                return Err(format!(
                    "{}: partitions[{pi}][{ci}] mentions element {e} >= n = {}",
                    path.display(),
                    sys.n
                ));
            }
        }
    }
    Ok(sys)
}

pub const TABLE_HEADER: &str = "n,k,lower,lower_source,upper,upper_gap_vs_mms_floor,nlb,mms_floor";
pub const FIGURE_HEADER: &str = "n,nlb,best_lower,best_upper,mms_floor";

/// CSV for `k` in `[k_min, k_max]`, `n` in `[2k+2, n_max]`, ordered by (k, n).
pub fn table_csv(k_min: u64, k_max: u64, n_max: u64) -> Result<String, String> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for k in k_min..=k_max {
        if n_max < 2 * k + 2 {
            continue;
        }
        let rows = aggregate(k, n_max).map_err(|e| e.to_string())?;
        for row in &rows {
            let n = row.params.n;
            if n < 2 * k + 2 {
                continue;
            }
            let (_, mms_floor) = mms(row.params);
            let gap = &mms_floor - &row.upper.value;
            writeln!(
                out,
                "{n},{k},{},{},{},{},{},{}",
                row.lower.value,
                row.lower.source,
                row.upper.value,
                gap,
                nlb(row.params),
                mms_floor
            )
            .unwrap();
        }
    }
    Ok(out)
}

pub fn figure_csv(k: u64, n_max: u64) -> Result<String, String> {
    if k < 2 {
        return Err("figure data needs k >= 2".into());
    }
    if n_max < 2 * k + 2 {
        return Err(format!("n_max must be at least 2k + 2 = {}", 2 * k + 2));
    }
    let rows = aggregate(k, n_max).map_err(|e| e.to_string())?;
    let mut out = String::from(FIGURE_HEADER);
    out.push('\n');
    for row in &rows {
        let n = row.params.n;
        if n < 2 * k + 2 {
            continue;
        }
        let (_, mms_floor) = mms(row.params);
        writeln!(
            out,
            "{n},{},{},{},{}",
            nlb(row.params),
            row.lower.value,
            row.upper.value,
            mms_floor
        )
        .unwrap();
    }
    Ok(out)
}

/// Minimal SVG with one grey interval (naive bounds) and one black interval
/// (best known bounds) per n, log-scaled vertically.
pub fn figure_svg(k: u64, n_max: u64) -> Result<String, String> {
    let csv = figure_csv(k, n_max)?;
    let mut rows: Vec<(u64, f64, f64, f64, f64)> = Vec::new();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let to_log = |s: &str| -> f64 {
            let v: f64 = s.parse::<f64>().unwrap_or(1.0);
            v.max(1.0).log10()
        };
        rows.push((
            f[0].parse().unwrap(),
            to_log(f[1]),
            to_log(f[4]),
            to_log(f[2]),
            to_log(f[3]),
        ));
    }
    let max_y = rows.iter().map(|r| r.2).fold(1.0f64, f64::max);
    let (w, h, mx, my) = (900.0, 480.0, 40.0, 20.0);
    let px = |i: usize| mx + (w - 2.0 * mx) * i as f64 / rows.len().max(1) as f64;
    let py = |v: f64| h - my - (h - 2.0 * my) * v / max_y;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for (i, r) in rows.iter().enumerate() {
        let x = px(i);
        writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#999\" stroke-width=\"4\"/>",
            x - 2.5,
            py(r.1),
            x - 2.5,
            py(r.2)
        )
        .unwrap();
        writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#000\" stroke-width=\"4\"/>",
            x + 2.5,
            py(r.3),
            x + 2.5,
            py(r.4)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn cmd_bound(n: u64, k: u64, json: bool) -> Result<String, (i32, String)> {
    let p = Params::new(n, k).map_err(|e| (EXIT_NOT_APPLICABLE, e.to_string()))?;
    let rows = aggregate(k, n).map_err(|e| (EXIT_NOT_APPLICABLE, e.to_string()))?;
    let row = rows.last().unwrap();
    let (mms_value, mms_floor) = mms(p);
    let thm = thm_upper(p).ok();
    let exact = exact_known(p);
    if json {
        let record = serde_json::json!({
            "n": n, "k": k, "c": p.c, "r": p.r,
            "nlb": nlb(p).to_string(),
            "mms": mms_value.to_string(),
            "mms_floor": mms_floor.to_string(),
            "thm_upper": thm.as_ref().map(|v| v.to_string()),
            "lower": row.lower.value.to_string(),
            "lower_source": row.lower.source.to_string(),
            "upper": row.upper.value.to_string(),
            "upper_source": row.upper.source.to_string(),
            "exact": exact.as_ref().map(|e| e.value.to_string()),
        });
        return Ok(format!("{record}\n"));
    }
    let mut out = String::new();
    writeln!(out, "n={n} k={k} c={} r={}", p.c, p.r).unwrap();
    writeln!(out, "nlb={}", nlb(p)).unwrap();
    writeln!(out, "mms={mms_value} floor={mms_floor}").unwrap();
    match thm {
        Some(t) => writeln!(out, "thm_upper={t}").unwrap(),
        None => writeln!(out, "thm_upper=n/a").unwrap(),
    }
    writeln!(out, "lower={} source={}", row.lower.value, row.lower.source).unwrap();
    writeln!(out, "upper={} source={}", row.upper.value, row.upper.source).unwrap();
    match exact {
        Some(e) => writeln!(out, "exact={} source={}", e.value, e.source).unwrap(),
        None => writeln!(out, "exact=none").unwrap(),
    }
    Ok(out)
}

/// Best construction (method, u, partitions) we can actually build for a
/// product factor.
fn best_buildable(n: u64, k: u64) -> Option<(Method, Option<u64>, BigNat)> {
    let p = Params::new(n, k).ok()?;
    let mut best: Option<(Method, Option<u64>, BigNat)> = None;
    if n < 2 * k {
        best = Some((Method::Product, None, BigNat::from(1u32)));
    }
    for u in main_u_range(p) {
        if let Ok(v) = main_construction_p(p, u) {
            if best.as_ref().map_or(true, |(_, _, b)| v > *b) {
                best = Some((Method::Main, Some(u), v));
            }
        }
    }
    for u in alt_u_range(p) {
        if let Ok(v) = alt_construction_p(p, u) {
            if best.as_ref().map_or(true, |(_, _, b)| v > *b) {
                best = Some((Method::Alt, Some(u), v));
            }
        }
    }
    if k >= 11 && k % 6 != 4 && n == 3 * k - 6 {
        let v = BigNat::from((k - 2) * (k - 2) / 2);
        if best.as_ref().map_or(true, |(_, _, b)| v > *b) {
            best = Some((Method::Family3k6, None, v));
        }
    }
    best
}

fn build_by_method(
    n: u64,
    k: u64,
    method: Method,
    u: Option<u64>,
    seed: u64,
    m: Option<u64>,
) -> Result<PartitionSystem, (i32, String)> {
    let bad = |msg: String| (EXIT_NOT_APPLICABLE, msg);
    let p = Params::new(n, k).map_err(|e| bad(e.to_string()))?;
    match method {
        Method::Main => {
            let u = match u {
                Some(u) => u,
                None => main_u_range(p)
                    .into_iter()
                    .max_by_key(|&u| main_construction_p(p, u).unwrap())
                    .ok_or_else(|| bad("no admissible u for this method".into()))?,
            };
            let plan = plan_main(p, u).map_err(|e| bad(e.to_string()))?;
            let split = GroundSplit::new(n as usize).map_err(|e| bad(e.to_string()))?;
            realize(&plan, split, seed).map_err(|e| (EXIT_VERIFY_FAILED, e.to_string()))
        }
        Method::Alt => {
            let u = match u {
                Some(u) => u,
                None => alt_u_range(p)
                    .into_iter()
                    .max_by_key(|&u| alt_construction_p(p, u).unwrap())
                    .ok_or_else(|| bad("no admissible u for this method".into()))?,
            };
            let plan = plan_alt(p, u).map_err(|e| bad(e.to_string()))?;
            let split = GroundSplit::new(n as usize).map_err(|e| bad(e.to_string()))?;
            realize(&plan, split, seed).map_err(|e| (EXIT_VERIFY_FAILED, e.to_string()))
        }
        Method::Family3k6 => {
            if n != 3 * k - 6 {
                return Err(bad(format!("family method needs n = 3k - 6 = {}", 3 * k - 6)));
            }
            build_3k6(k, seed).map_err(|e| bad(e.to_string()))
        }
        Method::Product => {
            let m = m.ok_or_else(|| bad("product method needs --m".into()))?;
            if m < k || n < m + k {
                return Err(bad(format!(
                    "product split needs k <= m and k <= n - m, got m={m}"
                )));
            }
            let left = build_factor(m, k, seed).map_err(|e| bad(e))?;
            let right = build_factor(n - m, k, seed.wrapping_add(1)).map_err(|e| bad(e))?;
            product_build(&left, &right).map_err(|e| bad(e.to_string()))
        }
    }
}

fn build_factor(n: u64, k: u64, seed: u64) -> Result<PartitionSystem, String> {
    if n < 2 * k {
        return Ok(PartitionSystem::trivial(n as usize, k as usize));
    }
    match best_buildable(n, k) {
        Some((Method::Main, Some(u), _)) => {
            let p = Params::new(n, k).map_err(|e| e.to_string())?;
            let plan = plan_main(p, u).map_err(|e| e.to_string())?;
            realize(&plan, GroundSplit::new(n as usize).map_err(|e| e.to_string())?, seed)
                .map_err(|e| e.to_string())
        }
        Some((Method::Alt, Some(u), _)) => {
            let p = Params::new(n, k).map_err(|e| e.to_string())?;
            let plan = plan_alt(p, u).map_err(|e| e.to_string())?;
            realize(&plan, GroundSplit::new(n as usize).map_err(|e| e.to_string())?, seed)
                .map_err(|e| e.to_string())
        }
        Some((Method::Family3k6, _, _)) => build_3k6(k, seed).map_err(|e| e.to_string()),
        _ => Err(format!("no buildable system for factor ({n}, {k})")),
    }
}

fn describe_failure(f: &Failure) -> String {
    match f {
        Failure::BadPartition { idx, reason } => format!("partition {idx}: {reason}"),
        Failure::Subset(w) => format!(
            "class {} of partition {} is {} class {} of partition {}",
            w.inner.1,
            w.inner.0,
            if w.equal { "equal to" } else { "contained in" },
            w.outer.1,
            w.outer.0
        ),
    }
}

/// Runs the CLI; returns (exit code, stdout text, stderr text).
pub fn run(args: &[String]) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_NOT_APPLICABLE } else { EXIT_OK };
            return (code, String::new(), e.to_string());
        }
    };
    match cli.command {
        Command::Bound { n, k, json } => match cmd_bound(n, k, json) {
            Ok(out) => (EXIT_OK, out, String::new()),
            Err((code, msg)) => (code, String::new(), msg),
        },
        Command::Table {
            k_min,
            k_max,
            n_max,
            csv,
        } => {
            if k_min > k_max || k_min < 1 {
                return (EXIT_NOT_APPLICABLE, String::new(), "invalid k range".into());
            }
            match table_csv(k_min, k_max, n_max) {
                Ok(text) => match std::fs::write(&csv, &text) {
                    Ok(()) => (
                        EXIT_OK,
                        format!("wrote {} rows to {}\n", text.lines().count() - 1, csv.display()),
                        String::new(),
                    ),
                    Err(e) => (EXIT_IO, String::new(), format!("writing {}: {e}", csv.display())),
                },
                Err(msg) => (EXIT_NOT_APPLICABLE, String::new(), msg),
            }
        }
        Command::Figure { k, n_max, csv, plot } => match figure_csv(k, n_max) {
            Ok(text) => {
                if let Err(e) = std::fs::write(&csv, &text) {
                    return (EXIT_IO, String::new(), format!("writing {}: {e}", csv.display()));
                }
                if let Some(plot_path) = plot {
                    match figure_svg(k, n_max) {
                        Ok(svg) => {
                            if let Err(e) = std::fs::write(&plot_path, svg) {
                                return (
                                    EXIT_IO,
                                    String::new(),
                                    format!("writing {}: {e}", plot_path.display()),
                                );
                            }
                        }
                        Err(msg) => return (EXIT_NOT_APPLICABLE, String::new(), msg),
                    }
                }
                (
                    EXIT_OK,
                    format!("wrote {} rows to {}\n", text.lines().count() - 1, csv.display()),
                    String::new(),
                )
            }
            Err(msg) => (EXIT_NOT_APPLICABLE, String::new(), msg),
        },
        Command::Construct {
            n,
            k,
            method,
            u,
            seed,
            m,
            out,
        } => match build_by_method(n, k, method, u, seed, m) {
            Ok(sys) => {
                let report = verify_system(&sys);
                if !report.pass {
                    return (
                        EXIT_VERIFY_FAILED,
                        String::new(),
                        format!(
                            "refusing to write unverified system: {}",
                            describe_failure(&report.failure.unwrap())
                        ),
                    );
                }
                match write_system(&out, &sys) {
                    Ok(()) => (
                        EXIT_OK,
                        format!(
                            "n={} k={} partitions={} verified=true -> {}\n",
                            sys.n,
                            sys.k,
                            sys.partitions.len(),
                            out.display()
                        ),
                        String::new(),
                    ),
                    Err(e) => (EXIT_IO, String::new(), e),
                }
            }
            Err((code, msg)) => (code, String::new(), msg),
        },
        Command::Verify { path, detecting } => match read_system(&path) {
            Ok(sys) => {
                let report = verify_system(&sys);
                let mut out = format!(
                    "partitions={} sperner={}\n",
                    report.partitions,
                    if report.pass { "pass" } else { "fail" }
                );
                if let Some(f) = &report.failure {
                    writeln!(out, "witness: {}", describe_failure(f)).unwrap();
                }
                let mut pass = report.pass;
                if detecting && report.pass {
                    let arr = to_detecting_array(&sys);
                    match verify_detecting(&arr) {
                        Ok((ok, witness)) => {
                            writeln!(out, "detecting={}", if ok { "pass" } else { "fail" }).unwrap();
                            if let Some(w) = witness {
                                writeln!(
                                    out,
                                    "witness: rows of symbol {} in column {} contain rows of symbol {} in column {}",
                                    w.outer.1, w.outer.0, w.inner.1, w.inner.0
                                )
                                .unwrap();
                            }
                            pass &= ok;
                        }
                        Err(e) => return (EXIT_IO, out, e.to_string()),
                    }
                }
                if pass {
                    (EXIT_OK, out, String::new())
                } else {
                    (EXIT_VERIFY_FAILED, out, String::new())
                }
            }
            Err(msg) => (EXIT_IO, String::new(), msg),
        },
        Command::Brute { n, k, cap, out } => match brute_force_sp(n, k, cap) {
            Ok((value, witness)) => {
                let mut text = format!("sp({n},{k})={value}\n");
                if let Some(path) = out {
                    if let Err(e) = write_system(&path, &witness) {
                        return (EXIT_IO, text, e);
                    }
                    writeln!(text, "witness -> {}", path.display()).unwrap();
                }
                (EXIT_OK, text, String::new())
            }
            Err(e) => (EXIT_NOT_APPLICABLE, String::new(), e.to_string()),
        },
    }
}
