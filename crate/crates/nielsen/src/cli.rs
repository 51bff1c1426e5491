//! Argument definitions and the subcommand drivers.

use std::convert::Infallible;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nielsen_core::density::{
    exact_density, run_shard, shard_plan, DensityEstimate, Predicate, DEFAULT_SHARDS,
};
use nielsen_core::dynamics::{growth_report, GrowthReport, DEFAULT_TOLERANCE};
use nielsen_core::endo::DEFAULT_LENGTH_CAP;
use nielsen_core::periodic::{
    aperiodic_round_trip_count, certified_minimal_points, fixed_point_count, label_fixed_points, minimal_period_census,
    DEFAULT_ADDRESS_BUDGET,
};
use nielsen_core::remnant::erosion;
use nielsen_core::wagner::{lefschetz_number, TailOrigin, WagnerAnalysis};
use nielsen_core::{remnant_decomposition, Endomorphism, Word};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_REFUSED, EXIT_RESOURCE};
use crate::format::{format_endomorphism, parse_endomorphism, ParseOptions};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "nielsen/1";

#[derive(Parser, Debug)]
#[command(name = "nielsen", version, about = "Fixed points, periodic points and growth of free group endomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "NIELSEN_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Reduce unreduced images with a warning instead of rejecting them.
    #[arg(long, global = true)]
    pub auto_reduce: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct MapSource {
    /// The map, inline (`a->abA; b->ba` or JSON) or the path of a file holding it.
    #[arg(long)]
    pub map: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Remnants of the images and membership in R_k and S_l.
    Remnant {
        #[command(flatten)]
        map: MapSource,
        /// Membership to test: remnant, Rk=<k> or Sl=<l>. Exit status 2 when false.
        #[arg(long)]
        check: Option<Predicate>,
    },
    /// Nielsen number of a power of the map.
    Nielsen {
        #[command(flatten)]
        map: MapSource,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long, default_value_t = DEFAULT_LENGTH_CAP)]
        length_cap: usize,
        /// Also list the fixed point classes.
        #[arg(long)]
        classes: bool,
    },
    /// Nielsen numbers of successive powers, growth bounds and entropy estimates.
    Dynamics {
        #[command(flatten)]
        map: MapSource,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_LENGTH_CAP)]
        length_cap: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Shorthand for --format csv.
        #[arg(long)]
        csv: bool,
    },
    /// Periodic points of the standard form through their addresses.
    Periodic {
        #[command(flatten)]
        map: MapSource,
        #[arg(long)]
        n: u32,
        /// List every fixed point of the n-th power with its address and orbit.
        #[arg(long)]
        list: bool,
        /// Count fixed points of the n-th power by minimal period.
        #[arg(long)]
        census: bool,
        /// Count the points of minimal period n certified for maps in S_l.
        #[arg(long, value_name = "L")]
        certified: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ADDRESS_BUDGET)]
        budget: u64,
    },
    /// Densities of sets of endomorphisms in the ball of radius p.
    Density {
        /// remnant, Rk=<k>, Sl=<l>, true or false.
        #[arg(long)]
        predicate: Predicate,
        #[arg(long)]
        m: usize,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Required whenever samples are drawn.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the estimates to this CSV file.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Also compute the exact density by full enumeration.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_SHARDS)]
        shards: u32,
        /// Largest number of maps the exact count may enumerate.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

/// Runs a parsed command line, writing results to `out` and warnings to `diag`.
pub fn run(cli: &Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let pool = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?,
        ),
        None => None,
    };
    dispatch(cli, pool.as_ref(), out, diag)
}

fn dispatch(cli: &Cli, pool: Option<&rayon::ThreadPool>, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let opts = ParseOptions { auto_reduce: cli.auto_reduce };
    let text = match &cli.command {
        Command::Remnant { check, map } => remnant(&load(map, opts, diag)?, *check, cli.format)?,
        Command::Nielsen { map, power, length_cap, classes } => {
            nielsen(&load(map, opts, diag)?, *power, *length_cap, *classes, cli.format)?
        }
        Command::Dynamics { map, n_max, length_cap, tol, csv } => {
            let format = if *csv { Format::Csv } else { cli.format };
            let phi = load(map, opts, diag)?;
            let report = growth_report(&phi, *n_max, *length_cap, *tol)?;
            let text = dynamics(&phi, &report, format);
            if let Some(cap) = &report.cap_hit {
                emit(out, &text)?;
                return Err(CliError::Status {
                    message: format!("dynamics: stopped after {} powers: {cap}", report.rows.len()),
                    code: EXIT_RESOURCE,
                });
            }
            text
        }
        Command::Periodic { map, n, list, census, certified, budget } => {
            periodic(&load(map, opts, diag)?, *n, *list, *census, *certified, *budget, cli.format)?
        }
        Command::Density { predicate, m, p, samples, seed, csv, exact, shards, budget } => {
            density(&DensityArgs { predicate: *predicate, m: *m, ps: p, samples: *samples, seed: *seed, exact: *exact, shards: *shards, budget: *budget }, csv.as_deref(), pool, cli.format)?
        }
    };
    emit(out, &text)?;
    if let Command::Remnant { check: Some(pred), map } = &cli.command {
        let phi = load(map, opts, &mut std::io::sink())?;
        if !pred.eval(&phi) {
            return Err(CliError::Status { message: format!("check {pred} is false"), code: EXIT_REFUSED });
        }
    }
    Ok(())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}

/// Reads `--map`: a path when it names an existing file, inline text otherwise.
pub fn load(src: &MapSource, opts: ParseOptions, diag: &mut dyn Write) -> Result<Endomorphism, CliError> {
    let path = Path::new(&src.map);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?
    } else {
        src.map.clone()
    };
    let parsed = parse_endomorphism(&text, opts)?;
    for w in &parsed.warnings {
        let _ = writeln!(diag, "{w}");
    }
    Ok(parsed.map)
}

fn envelope(command: &str, phi: Option<&Endomorphism>, body: Value) -> String {
    let mut doc = json!({ "schema": SCHEMA, "command": command });
    if let Some(phi) = phi {
        doc["map"] = Value::String(format_endomorphism(phi));
    }
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let cells: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(s, "{}", cells.join("  ").trim_end());
    };
    line(&mut s, &mut header.iter().copied());
    for r in rows {
        line(&mut s, &mut r.iter().map(String::as_str));
    }
    s
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn generator_name(g: usize) -> String {
    if g < 26 {
        ((b'a' + g as u8) as char).to_string()
    } else {
        format!("x{}", g + 1)
    }
}

fn remnant(phi: &Endomorphism, check: Option<Predicate>, format: Format) -> Result<String, CliError> {
    let rem = remnant_decomposition(phi);
    let gens: Vec<(String, String, Option<Word>, Option<(usize, usize)>, (usize, usize))> = (0..phi.rank())
        .map(|g| {
            let e = erosion(phi, g);
            let word = rem.remnant(phi, g).map(|s| Word::from_reduced(s.to_vec()).expect("subword of a reduced word"));
            let span = rem.span(g).map(|r| (r.start + 1, r.end));
            (generator_name(g), phi.image(g).to_string(), word, span, (e.left, e.right))
        })
        .collect();
    let rk_level = rem.has_remnant().then(|| (0..phi.rank()).map(|g| rem.remnant_len(g)).min().unwrap_or(0));
    let sl_level = rem.sl_level(phi);
    let check_value = check.map(|p| (p, p.eval(phi)));
    Ok(match format {
        Format::Json => {
            let generators: Vec<Value> = gens
                .iter()
                .map(|(name, image, word, span, (l, r))| {
                    json!({
                        "generator": name,
                        "image": image,
                        "remnant": word.as_ref().map(|w| w.to_string()),
                        "span": span.map(|(s, e)| [s, e]),
                        "erosion": [l, r],
                    })
                })
                .collect();
            let mut body = json!({ "generators": generators, "has_remnant": rem.has_remnant(), "rk_level": rk_level, "sl_level": sl_level });
            if let Some((p, v)) = check_value {
                body["check"] = json!({ "predicate": p.id(), "value": v });
            }
            envelope("remnant", Some(phi), body)
        }
        Format::Table | Format::Csv => {
            let header = ["generator", "image", "remnant", "span", "erosion"];
            let rows: Vec<Vec<String>> = gens
                .iter()
                .map(|(name, image, word, span, (l, r))| {
                    vec![
                        name.clone(),
                        image.clone(),
                        word.as_ref().map_or("-".into(), Word::to_string),
                        span.map_or("-".into(), |(s, e)| format!("{s}..{e}")),
                        format!("{l}:{r}"),
                    ]
                })
                .collect();
            let mut s = if format == Format::Csv { csv(&header, &rows) } else { table(&header, &rows) };
            if format == Format::Table {
                let _ = writeln!(s, "has remnant: {}", if rem.has_remnant() { "yes" } else { "no" });
                let _ = writeln!(s, "R_k level: {}", rk_level.map_or("-".into(), |k| k.to_string()));
                let _ = writeln!(s, "S_l level: {}", sl_level.map_or("-".into(), |l| l.to_string()));
            }
            if let Some((p, v)) = check_value {
                let _ = writeln!(s, "check {p}: {v}");
            }
            s
        }
    })
}

fn origin_json(origin: &TailOrigin) -> Value {
    match origin {
        TailOrigin::Base => json!("base"),
        TailOrigin::Occurrence { generator, position, exponent } => {
            json!({ "generator": generator_name(*generator), "position": position + 1, "exponent": exponent.exponent() })
        }
    }
}

fn nielsen(phi: &Endomorphism, power: u32, cap: usize, classes: bool, format: Format) -> Result<String, CliError> {
    let p = phi.iterate(power, cap)?;
    let a = WagnerAnalysis::new(&p);
    let n = a.nielsen_number()?;
    let (w, iso, lef) = (a.w_count()?, a.isolated_tail_count()?, lefschetz_number(&p));
    Ok(match format {
        Format::Json => {
            let mut body = json!({
                "power": power, "nielsen": n, "w_count": w, "isolated": iso, "lefschetz": lef, "tails": a.tails.len(),
            });
            if classes {
                body["classes"] = a
                    .partition
                    .classes
                    .iter()
                    .map(|c| json!({ "index_sum": c.index_sum, "tails": c.tails.iter().map(|&t| origin_json(&a.tails[t].origin)).collect::<Vec<_>>() }))
                    .collect();
            }
            envelope("nielsen", Some(phi), body)
        }
        Format::Csv => csv(
            &["power", "nielsen", "w_count", "isolated", "lefschetz", "tails"],
            &[vec![power.to_string(), n.to_string(), w.to_string(), iso.to_string(), lef.to_string(), a.tails.len().to_string()]],
        ),
        Format::Table => {
            let mut s = format!("{n}\n");
            if classes {
                let rows: Vec<Vec<String>> = a
                    .partition
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let tails: Vec<String> = c
                            .tails
                            .iter()
                            .map(|&t| match a.tails[t].origin {
                                TailOrigin::Base => "base".into(),
                                TailOrigin::Occurrence { generator, position, exponent } => {
                                    format!("{}@{}{}", generator_name(generator), position + 1, if exponent.exponent() > 0 { "+" } else { "-" })
                                }
                            })
                            .collect();
                        vec![(k + 1).to_string(), c.index_sum.to_string(), tails.join(" ")]
                    })
                    .collect();
                s.push_str(&table(&["class", "index", "tails"], &rows));
            }
            s
        }
    })
}

fn dynamics(phi: &Endomorphism, r: &GrowthReport, format: Format) -> String {
    let header = ["n", "nielsen", "root", "w_count", "isolated", "lefschetz", "tails", "max_length", "entropy"];
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            vec![
                row.n.to_string(),
                row.nielsen.to_string(),
                format!("{:.6}", row.root),
                row.w_count.to_string(),
                row.isolated.to_string(),
                row.lefschetz.to_string(),
                row.tails.to_string(),
                r.entropy.lengths.get(k).map_or("-".into(), |l| l.to_string()),
                r.entropy.estimates.get(k).map_or("-".into(), |h| format!("{h:.6}")),
            ]
        })
        .collect();
    match format {
        Format::Csv => csv(&header, &rows),
        Format::Table => {
            let mut s = table(&header, &rows);
            let sp = &r.bounds.spectral;
            let _ = writeln!(s, "spectral radius: {:.10} in [{:.10}, {:.10}]", sp.value, sp.lower, sp.upper);
            let _ = writeln!(s, "asymptotic Nielsen number: upper {:.10}", r.bounds.upper);
            match r.bounds.lower {
                Some(lo) => {
                    let _ = writeln!(s, "asymptotic Nielsen number: lower {lo} (S_{})", r.bounds.l);
                }
                None => {
                    let _ = writeln!(s, "asymptotic Nielsen number: no certified lower bound");
                }
            }
            let _ = writeln!(s, "entropy estimate: {:.6}", r.entropy.h_sharp);
            if let Some(h) = r.entropy.certified_lower {
                let _ = writeln!(s, "entropy lower bound: {h:.6}");
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n, "nielsen": row.nielsen, "root": row.root, "w_count": row.w_count,
                        "isolated": row.isolated, "lefschetz": row.lefschetz, "tails": row.tails,
                    })
                })
                .collect();
            let sp = &r.bounds.spectral;
            envelope(
                "dynamics",
                Some(phi),
                json!({
                    "rows": rows,
                    "cap_hit": r.cap_hit.as_ref().map(|e| e.to_string()),
                    "spectral_radius": { "value": sp.value, "lower": sp.lower, "upper": sp.upper, "iterations": sp.iterations },
                    "bounds": { "lower": r.bounds.lower, "upper": r.bounds.upper, "l": r.bounds.l },
                    "entropy": {
                        "lengths": r.entropy.lengths, "estimates": r.entropy.estimates, "h_sharp": r.entropy.h_sharp,
                        "sl_level": r.entropy.sl_level, "certified_lower": r.entropy.certified_lower,
                    },
                }),
            )
        }
    }
}

fn periodic(
    phi: &Endomorphism,
    n: u32,
    list: bool,
    census: bool,
    certified: Option<usize>,
    budget: u64,
    format: Format,
) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let total = fixed_point_count(phi, n);
    let census_rows = if census {
        let mut c = minimal_period_census(phi, n, budget)?;
        // the base point is fixed by every power
        *c.entry(1).or_default() += 1;
        Some(c)
    } else {
        None
    };
    let records = if list { Some(label_fixed_points(phi, n, budget)?) } else { None };
    let cert = certified.map(|l| certified_minimal_points(phi, l, n)).transpose()?;
    let mobius = aperiodic_round_trip_count(phi, n);
    Ok(match format {
        Format::Json => {
            let mut body = json!({ "n": n, "fixed_points": total.to_string(), "aperiodic_addresses": mobius.to_string() });
            if let Some(c) = &census_rows {
                body["census"] = c.iter().map(|(d, k)| json!({ "period": d, "points": k, "orbits": k / *d as u64 })).collect();
            }
            if let Some(rs) = &records {
                body["points"] = rs
                    .iter()
                    .map(|r| json!({ "label": r.label, "address": r.address.locations(), "minimal_period": r.minimal_period, "orbit": r.orbit }))
                    .collect();
            }
            if let (Some(l), Some(c)) = (certified, &cert) {
                body["certified"] = json!({ "l": l, "points": c.to_string() });
            }
            envelope("periodic", Some(phi), body)
        }
        Format::Table | Format::Csv => {
            let mut s = String::new();
            let section = |header: &[&str], rows: &[Vec<String>]| {
                if format == Format::Csv { csv(header, rows) } else { table(header, rows) }
            };
            s.push_str(&section(&["n", "fixed_points", "aperiodic_addresses"], &[vec![n.to_string(), total.to_string(), mobius.to_string()]]));
            if let Some(c) = &census_rows {
                let mut rows: Vec<Vec<String>> =
                    c.iter().map(|(d, k)| vec![d.to_string(), k.to_string(), (k / *d as u64).to_string()]).collect();
                rows.push(vec!["total".into(), c.values().sum::<u64>().to_string(), "-".into()]);
                s.push_str(&section(&["period", "points", "orbits"], &rows));
            }
            if let Some(rs) = &records {
                let rows: Vec<Vec<String>> = rs
                    .iter()
                    .map(|r| {
                        let orbit: Vec<String> = r.orbit.iter().map(|k| k.to_string()).collect();
                        vec![
                            format!("{}_{n}", r.label),
                            if r.address.is_empty() { "-".into() } else { r.address.to_string().replace(',', " ") },
                            r.minimal_period.to_string(),
                            orbit.join(" "),
                        ]
                    })
                    .collect();
                s.push_str(&section(&["label", "address", "minimal_period", "orbit"], &rows));
            }
            if let (Some(l), Some(c)) = (certified, &cert) {
                s.push_str(&section(&["l", "certified_minimal_points"], &[vec![l.to_string(), c.to_string()]]));
            }
            s
        }
    })
}

struct DensityArgs<'a> {
    predicate: Predicate,
    m: usize,
    ps: &'a [u32],
    samples: u64,
    seed: Option<u64>,
    exact: bool,
    shards: u32,
    budget: u64,
}

/// Same result as the sequential estimate in the core crate; shards run on the rayon pool.
pub fn estimate_parallel(predicate: Predicate, m: usize, p: u32, samples: u64, seed: u64, shards: u32) -> DensityEstimate {
    let plan = shard_plan(samples, shards);
    let firsts: Vec<u64> = plan.iter().scan(0, |acc, &c| Some(std::mem::replace(acc, *acc + c))).collect();
    let hits: u64 = plan
        .par_iter()
        .zip(firsts.par_iter())
        .enumerate()
        .map(|(s, (&count, &first))| {
            run_shard::<Infallible, _>(m, p, seed, s as u32, count, first, |phi| Ok(predicate.eval(phi)))
                .unwrap_or_else(|f| match f.error {})
        })
        .sum();
    DensityEstimate::from_counts(predicate.id(), m, p, samples, hits, seed, shards)
}

const DENSITY_CSV: [&str; 9] = ["m", "p", "predicate", "samples", "hits", "estimate", "ci_lo", "ci_hi", "seed"];

fn density_row(e: &DensityEstimate) -> Vec<String> {
    vec![
        e.m.to_string(),
        e.p.to_string(),
        e.predicate.clone(),
        e.samples.to_string(),
        e.hits.to_string(),
        format!("{:.6}", e.estimate),
        format!("{:.6}", e.ci_lo),
        format!("{:.6}", e.ci_hi),
        e.seed.to_string(),
    ]
}

fn density(a: &DensityArgs<'_>, csv_path: Option<&Path>, pool: Option<&rayon::ThreadPool>, format: Format) -> Result<String, CliError> {
    if a.m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    if a.shards == 0 {
        return Err(CliError::Usage("--shards must be at least 1".into()));
    }
    if a.samples == 0 && !a.exact {
        return Err(CliError::Usage("--samples 0 needs --exact".into()));
    }
    let seed = match (a.samples, a.seed) {
        (0, s) => s,
        (_, Some(s)) => Some(s),
        (_, None) => return Err(CliError::Usage("--seed is required when sampling".into())),
    };
    let estimates: Vec<DensityEstimate> = match seed {
        Some(seed) if a.samples > 0 => {
            let all = || a.ps.iter().map(|&p| estimate_parallel(a.predicate, a.m, p, a.samples, seed, a.shards)).collect();
            match pool {
                Some(pool) => pool.install(all),
                None => all(),
            }
        }
        _ => Vec::new(),
    };
    let exact = if a.exact {
        a.ps.iter().map(|&p| exact_density(a.predicate, a.m, p, a.budget).map(|r| (p, r))).collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let rows: Vec<Vec<String>> = estimates.iter().map(density_row).collect();
    if let Some(path) = csv_path {
        std::fs::write(path, csv(&DENSITY_CSV, &rows)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    }
    let ratio_f64 = |r: &num_rational::Ratio<num_bigint::BigUint>| {
        use num_traits::ToPrimitive;
        r.to_f64().unwrap_or(f64::NAN)
    };
    Ok(match format {
        Format::Json => {
            let est: Vec<Value> = estimates
                .iter()
                .map(|e| {
                    json!({
                        "m": e.m, "p": e.p, "predicate": e.predicate, "samples": e.samples, "hits": e.hits,
                        "estimate": e.estimate, "ci_lo": e.ci_lo, "ci_hi": e.ci_hi, "seed": e.seed, "shards": e.shards,
                    })
                })
                .collect();
            let ex: Vec<Value> =
                exact.iter().map(|(p, r)| json!({ "p": p, "exact": r.to_string(), "value": ratio_f64(r) })).collect();
            envelope(
                "density",
                None,
                json!({ "predicate": a.predicate.id(), "m": a.m, "shards": a.shards, "estimates": est, "exact": ex }),
            )
        }
        Format::Csv | Format::Table => {
            let mut s = String::new();
            if !rows.is_empty() {
                s.push_str(&if format == Format::Csv { csv(&DENSITY_CSV, &rows) } else { table(&DENSITY_CSV, &rows) });
            }
            if !exact.is_empty() {
                let ex: Vec<Vec<String>> = exact
                    .iter()
                    .map(|(p, r)| vec![a.m.to_string(), p.to_string(), a.predicate.id(), r.to_string(), format!("{:.6}", ratio_f64(r))])
                    .collect();
                let header = ["m", "p", "predicate", "exact", "value"];
                s.push_str(&if format == Format::Csv { csv(&header, &ex) } else { table(&header, &ex) });
            }
            s
        }
    })
}
