//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams and exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use spectral_genus::conjecture::{HomogeneousSweep, ScaleSweep, SCHEMA_VERSION};
use spectral_genus::distribution::{DiagnosticsRow, FamilyReport};
use spectral_genus::invariants::{homogeneous_weights, Suspension};
use spectral_genus::{
    analyze_germ, build_diagram, family_diagnostics, hertling_gap, hertling_strong_criterion,
    homogeneous_sweep, judge_total, measure_moments, parse_germ_spec, parse_polynomial,
    parse_polynomial_file, quasihom_spectrum, scale_sweep, suspend, sup_cdf_distance,
    EmpiricalMeasure, GermSpec, InvariantBundle, Rational, SaitoDensity, SingularityReport,
    SpectralMultiset, Strategy, SweepRecord,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SPECTRAL_GENUS_THREADS";

const TORSION_NOTE: &str =
    "power of |t| in the torsion asymptotics; the log-log term is not computed";

/// Exit code when some input violates the weak inequality.
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "spectral-genus",
    version,
    about = "Exact Milnor numbers, spectral genera and spectra of isolated hypersurface singularities"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton-diagram invariants of one or more polynomial germs; several
    /// germs are treated as the singular points of one hypersurface.
    Analyze(AnalyzeArgs),
    /// Quasi-homogeneous germ given by its weights.
    Quasihom {
        /// Comma-separated weights in (0, 1), e.g. 1/2,1/3.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Homogeneous germ of degree D in N+1 variables.
    Homog {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'd')]
        d: u32,
        #[arg(long)]
        oracle: bool,
    },
    /// Irreducible plane curve given by Puiseux pairs.
    Puiseux {
        /// Pairs "k1:n1,k2:n2,...".
        #[arg(long, alias = "pairs")]
        puiseux: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Plane-curve normal form x^a+y^b (plain), x^a+xy^b (x) or x^a y+xy^b (xy).
    Family {
        kind: String,
        a: u32,
        b: u32,
        #[arg(long)]
        oracle: bool,
    },
    /// Suspension f + z^(k+1) of a germ with a known spectrum.
    Suspend(SuspendArgs),
    /// Parameter sweeps.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Spectral distribution statistics.
    Distribution(DistributionArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Polynomial expression or path to a polynomial file; repeatable.
    #[arg(long, required = true)]
    poly: Vec<String>,
    /// Comma-separated variable names for expressions.
    #[arg(long)]
    vars: Option<String>,
    /// Assert that the germs are non-degenerate with respect to their
    /// Newton diagrams; required for the Newton formulas.
    #[arg(long)]
    assume_nondegenerate: bool,
    /// Recompute by brute-force enumeration and fail on any mismatch.
    #[arg(long)]
    oracle: bool,
    /// Print the Newton diagrams as JSON instead of a report.
    #[arg(long)]
    dump_diagram: bool,
}

#[derive(Args, Debug)]
struct SuspendArgs {
    #[arg(long, group = "germ")]
    weights: Option<String>,
    #[arg(long, num_args = 2, value_names = ["N", "D"], group = "germ")]
    homog: Option<Vec<String>>,
    #[arg(long, num_args = 3, value_names = ["KIND", "A", "B"], group = "germ")]
    family: Option<Vec<String>>,
    /// Suspension order; defaults to the lcm of the exponent denominators.
    #[arg(long)]
    k: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum SweepCommand {
    /// Homogeneous germs of degrees FROM..=TO in N+1 variables.
    Homog {
        #[arg(short = 'n')]
        n: u32,
        #[arg(long, default_value_t = 2)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
    /// The germs f(x_0^k, ..., x_n^k) for k = 1..=K_MAX.
    Scale {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long)]
        k_max: u64,
        #[arg(long)]
        assume_nondegenerate: bool,
    },
}

#[derive(Args, Debug)]
struct DistributionArgs {
    /// Statistics of a single quasi-homogeneous spectrum.
    #[arg(long, group = "source")]
    weights: Option<String>,
    /// Diagnostics for the homogeneous family in N+1 variables.
    #[arg(long, value_name = "N", group = "source")]
    homog: Option<u32>,
    #[arg(long, default_value_t = 2)]
    from: u32,
    #[arg(long, default_value_t = 40)]
    to: u32,
    /// Number of grid intervals for the CDF comparison.
    #[arg(long, default_value_t = 1000)]
    grid: u32,
}

/// Runs the program on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    configure_threads();
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn configure_threads() {
    let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    else {
        return;
    };
    // Fails harmlessly if the global pool already exists.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze(args) => analyze(args, fmt, out),
        Command::Quasihom { weights, oracle } => {
            single(fmt, out, &[("weights", weights.clone())], *oracle, weights)
        }
        Command::Homog { n, d, oracle } => single(
            fmt,
            out,
            &[("homog", format!("{n} {d}"))],
            *oracle,
            &format!("homogeneous n={n} d={d}"),
        ),
        Command::Puiseux { puiseux, oracle } => single(
            fmt,
            out,
            &[("puiseux", puiseux.clone())],
            *oracle,
            &format!("puiseux {puiseux}"),
        ),
        Command::Family { kind, a, b, oracle } => single(
            fmt,
            out,
            &[("family", format!("{kind} {a} {b}"))],
            *oracle,
            &format!("family {kind} {a} {b}"),
        ),
        Command::Suspend(args) => suspension(args, fmt, out),
        Command::Sweep(cmd) => sweep(cmd, fmt, out),
        Command::Distribution(args) => distribution(args, fmt, out),
    }
}

fn germ_spec(pairs: &[(&str, String)]) -> Result<GermSpec> {
    let map: BTreeMap<String, String> = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    Ok(parse_germ_spec(&map)?)
}

fn single(
    fmt: Format,
    out: &mut dyn Write,
    pairs: &[(&str, String)],
    oracle: bool,
    label: &str,
) -> Result<i32> {
    let spec = germ_spec(pairs)?;
    let bundle = analyze_germ(&spec, false, oracle)?;
    emit_report(fmt, out, &judge_total(label, std::slice::from_ref(&bundle))?, &bundle.warnings)
}

fn read_polynomial(text: &str, vars: Option<&str>) -> Result<(String, spectral_genus::MonomialSupport)> {
    let names: Option<Vec<&str>> = vars.map(|v| v.split(',').map(str::trim).collect());
    let path = Path::new(text);
    if path.is_file() {
        let contents = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let support = match &names {
            Some(n) => parse_polynomial(&contents, Some(n)),
            None => parse_polynomial_file(&contents),
        }
        .with_context(|| format!("parsing {}", path.display()))?;
        Ok((path.display().to_string(), support))
    } else {
        let support = parse_polynomial(text, names.as_deref())
            .with_context(|| format!("parsing {text:?}"))?;
        Ok((text.to_string(), support))
    }
}

fn analyze(args: &AnalyzeArgs, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    let mut labels = Vec::new();
    let mut bundles: Vec<InvariantBundle> = Vec::new();
    let mut dumps = Vec::new();
    for text in &args.poly {
        let (label, support) = read_polynomial(text, args.vars.as_deref())?;
        if args.dump_diagram {
            dumps.push(json!({"germ": label, "diagram": build_diagram(&support).dump()}));
            continue;
        }
        let spec = GermSpec::Polynomial(support);
        bundles.push(
            analyze_germ(&spec, args.assume_nondegenerate, args.oracle)
                .with_context(|| format!("analyzing {label}"))?,
        );
        labels.push(label);
    }
    if args.dump_diagram {
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({"schema": SCHEMA_VERSION, "diagrams": dumps}))?)?;
        return Ok(0);
    }
    let report = judge_total(&labels.join(" ; "), &bundles)?;
    emit_report(fmt, out, &report, &[])
}

#[derive(Serialize)]
struct ReportRow<'a> {
    germ: &'a str,
    n: usize,
    mu: &'a Rational,
    spectral_genus: &'a Rational,
    geometric_genus: Option<u64>,
    margin: &'a Rational,
    weak: bool,
    strong: bool,
    equality: bool,
    torsion_exponent: &'a Rational,
    methods: String,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "FAILS"
    }
}

fn emit_report(fmt: Format, out: &mut dyn Write, rep: &SingularityReport, warnings: &[String]) -> Result<i32> {
    match fmt {
        Format::Json => {
            let mut v = serde_json::to_value(rep)?;
            v["torsion_note"] = json!(TORSION_NOTE);
            if !warnings.is_empty() {
                v["warnings"] = json!(warnings);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.serialize(ReportRow {
                germ: &rep.germ,
                n: rep.n,
                mu: &rep.mu,
                spectral_genus: &rep.spectral_genus,
                geometric_genus: rep.geometric_genus,
                margin: &rep.margin,
                weak: rep.weak_ok,
                strong: rep.strong_ok,
                equality: rep.equality_attained,
                torsion_exponent: &rep.torsion_exponent,
                methods: rep.methods.join("+"),
            })?;
            w.flush()?;
        }
        Format::Table => {
            let pg = rep
                .geometric_genus
                .map_or_else(|| "-".to_string(), |g| g.to_string());
            let strong = if rep.equality_attained {
                format!("{} (equality)", yes_no(rep.strong_ok))
            } else {
                yes_no(rep.strong_ok).to_string()
            };
            let rows = [
                ("germ", rep.germ.clone()),
                ("n", rep.n.to_string()),
                ("mu", rep.mu.to_string()),
                ("spectral genus", rep.spectral_genus.to_string()),
                ("geometric genus", pg),
                ("margin", rep.margin.to_string()),
                ("weak form", yes_no(rep.weak_ok).to_string()),
                ("strong form", strong),
                ("torsion exponent", rep.torsion_exponent.to_string()),
                ("methods", rep.methods.join(", ")),
            ];
            for (k, v) in rows {
                writeln!(out, "{k:<18}{v}")?;
                if k == "torsion exponent" {
                    writeln!(out, "{:<18}({TORSION_NOTE})", "")?;
                }
            }
            for w in warnings {
                writeln!(out, "{:<18}{w}", "warning")?;
            }
        }
    }
    Ok(if rep.weak_ok { 0 } else { EXIT_VIOLATION })
}

fn spectrum_of(spec: &GermSpec) -> Result<SpectralMultiset> {
    match spec {
        GermSpec::QuasiHomogeneous(w) => Ok(quasihom_spectrum(w)?),
        GermSpec::Homogeneous { n, d } => Ok(quasihom_spectrum(&homogeneous_weights(*n, *d))?),
        GermSpec::Dim1Family { kind, a, b } => Ok(quasihom_spectrum(&kind.weights(*a, *b))?),
        _ => bail!("suspension needs a germ with a known spectrum (weights, homog or family)"),
    }
}

fn suspension(args: &SuspendArgs, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    let mut pairs = Vec::new();
    if let Some(w) = &args.weights {
        pairs.push(("weights", w.clone()));
    }
    if let Some(h) = &args.homog {
        pairs.push(("homog", h.join(" ")));
    }
    if let Some(f) = &args.family {
        pairs.push(("family", f.join(" ")));
    }
    let spec = germ_spec(&pairs)?;
    let s: Suspension = suspend(&spectrum_of(&spec)?, args.k)?;
    let pg = s.bundle.geometric_genus.unwrap_or(0);
    match fmt {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "k": s.k,
                "n": s.bundle.n,
                "mu": s.bundle.mu,
                "geometric_genus": pg,
                "spectral_genus": s.bundle.spectral_genus,
                "base_spectral_genus": s.base_spectral_genus,
                "identity_verified": true,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["k", "n", "mu", "geometric_genus", "spectral_genus", "base_spectral_genus"])?;
            w.write_record([
                s.k.to_string(),
                s.bundle.n.to_string(),
                s.bundle.mu.to_string(),
                pg.to_string(),
                s.bundle.spectral_genus.to_string(),
                s.base_spectral_genus.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Table => {
            writeln!(out, "{:<22}{}", "k", s.k)?;
            writeln!(out, "{:<22}{}", "n", s.bundle.n)?;
            writeln!(out, "{:<22}{}", "mu", s.bundle.mu)?;
            writeln!(out, "{:<22}{}", "geometric genus", pg)?;
            writeln!(out, "{:<22}{}", "spectral genus", s.bundle.spectral_genus)?;
            writeln!(out, "{:<22}{}", "base spectral genus", s.base_spectral_genus)?;
            writeln!(out, "{:<22}p_g(h) = {} * {} verified", "identity", s.k, s.base_spectral_genus)?;
        }
    }
    Ok(0)
}

fn write_records(out: &mut dyn Write, records: &[&SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn sweep_table(out: &mut dyn Write, records: &[&SweepRecord], extra: Option<&[Rational]>) -> Result<()> {
    write!(
        out,
        "{:>6} {:>10} {:>14} {:>14} {:>12} {:>6} {:>6}",
        "param", "mu", "spectral_genus", "margin", "ratio", "weak", "strong"
    )?;
    if extra.is_some() {
        write!(out, " {:>14}", "margin/k^n")?;
    }
    writeln!(out)?;
    for (i, r) in records.iter().enumerate() {
        write!(
            out,
            "{:>6} {:>10} {:>14} {:>14} {:>12} {:>6} {:>6}",
            r.param,
            r.mu.to_string(),
            r.spectral_genus.to_string(),
            r.margin.to_string(),
            format!("{:.6}", r.ratio.to_f64()),
            r.weak,
            r.strong
        )?;
        if let Some(e) = extra {
            write!(out, " {:>14}", format!("{:.6}", e[i].to_f64()))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn sweep(cmd: &SweepCommand, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    let records: Vec<SweepRecord> = match cmd {
        SweepCommand::Homog { n, from, to } => {
            let ds: Vec<u32> = (*from..=*to).collect();
            let sweep: HomogeneousSweep = homogeneous_sweep(*n, &ds)?;
            let refs: Vec<&SweepRecord> = sweep.records.iter().collect();
            match fmt {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&json!({"schema": SCHEMA_VERSION, "sweep": sweep}))?
                )?,
                Format::Csv => write_records(out, &refs)?,
                Format::Table => {
                    sweep_table(out, &refs, None)?;
                    writeln!(out, "ratio nondecreasing: {}", sweep.ratio_nondecreasing)?;
                    writeln!(out, "ratio below bound:   {}", sweep.ratio_below_bound)?;
                }
            }
            sweep.records
        }
        SweepCommand::Scale {
            poly,
            vars,
            k_max,
            assume_nondegenerate,
        } => {
            if !assume_nondegenerate {
                return Err(spectral_genus::Error::RefusedWithoutNondegeneracyFlag.into());
            }
            let (_, support) = read_polynomial(poly, vars.as_deref())?;
            let ks: Vec<u64> = (1..=*k_max).collect();
            let sweep: ScaleSweep = scale_sweep(&support, &ks, Strategy::default())?;
            let refs: Vec<&SweepRecord> = sweep.records.iter().map(|r| &r.record).collect();
            match fmt {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&json!({"schema": SCHEMA_VERSION, "sweep": sweep}))?
                )?,
                Format::Csv => write_records(out, &refs)?,
                Format::Table => {
                    let scaled: Vec<Rational> =
                        sweep.records.iter().map(|r| r.scaled_margin.clone()).collect();
                    sweep_table(out, &refs, Some(&scaled))?;
                    writeln!(out, "predicted limit of margin/k^n: {}", sweep.predicted_limit)?;
                    let first = sweep
                        .first_strong_k
                        .map_or_else(|| "none".to_string(), |k| k.to_string());
                    writeln!(out, "first k with strong form: {first}")?;
                    writeln!(out, "strong form from then on: {}", sweep.strong_thereafter)?;
                }
            }
            sweep.records.into_iter().map(|r| r.record).collect()
        }
    };
    Ok(if records.iter().all(|r| r.weak) {
        0
    } else {
        EXIT_VIOLATION
    })
}

fn distribution(args: &DistributionArgs, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    if let Some(weights) = &args.weights {
        let spec = germ_spec(&[("weights", weights.clone())])?;
        let m = EmpiricalMeasure::new(spectrum_of(&spec)?)?;
        let (mean, variance) = measure_moments(&m);
        let gap = hertling_gap(&m);
        let criterion = hertling_strong_criterion(&m).ok();
        let density = SaitoDensity::new(m.dim());
        let distance = sup_cdf_distance(&m, &density, args.grid)?;
        match fmt {
            Format::Json => {
                let v = json!({
                    "schema": SCHEMA_VERSION,
                    "weights": weights,
                    "n": m.dim(),
                    "mu": m.total(),
                    "mean": mean,
                    "variance": variance,
                    "hertling_gap": gap,
                    "hertling_strong_criterion": criterion,
                    "grid": args.grid,
                    "cdf_distance": distance,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            }
            Format::Csv => {
                let sg = m.base().spectral_genus();
                let mu = Rational::from(m.total() as i64);
                let row = DiagnosticsRow {
                    param: weights.clone(),
                    mu: m.total(),
                    min_alpha: m.base().min_exponent().unwrap().clone(),
                    ratio_pg: Rational::from(m.base().geometric_genus() as i64) / &mu,
                    ratio_sg: sg / &mu,
                    cdf_distance: distance,
                };
                let mut w = csv::Writer::from_writer(&mut *out);
                w.serialize(row)?;
                w.flush()?;
            }
            Format::Table => {
                writeln!(out, "{:<26}{}", "n", m.dim())?;
                writeln!(out, "{:<26}{}", "mu", m.total())?;
                writeln!(out, "{:<26}{}", "mean (unshifted)", mean)?;
                writeln!(out, "{:<26}{}", "variance", variance)?;
                writeln!(out, "{:<26}{}", "Hertling gap", gap)?;
                let c = criterion.map_or_else(|| "n/a (curves only)".to_string(), |b| b.to_string());
                writeln!(out, "{:<26}{}", "Hertling strong criterion", c)?;
                writeln!(out, "{:<26}{} (grid {})", "CDF sup-distance", distance, args.grid)?;
            }
        }
        return Ok(0);
    }
    let Some(n) = args.homog else {
        bail!("distribution needs --weights or --homog N");
    };
    if args.from < 2 || args.to < args.from {
        bail!("need 2 <= --from <= --to");
    }
    let family: Vec<(String, EmpiricalMeasure)> = (args.from..=args.to)
        .map(|d| -> Result<_> {
            let s = quasihom_spectrum(&homogeneous_weights(n, d))?;
            Ok((d.to_string(), EmpiricalMeasure::new(s)?))
        })
        .collect::<Result<_>>()?;
    let report: FamilyReport = family_diagnostics(&family, args.grid)?;
    match fmt {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({"schema": SCHEMA_VERSION, "diagnostics": report}))?
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in &report.rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Table => {
            writeln!(
                out,
                "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
                "param", "mu", "min_alpha", "ratio_pg", "ratio_sg", "cdf_dist"
            )?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{:>6} {:>10} {:>10} {:>10.6} {:>10.6} {:>10.6}",
                    r.param,
                    r.mu,
                    r.min_alpha.to_string(),
                    r.ratio_pg.to_f64(),
                    r.ratio_sg.to_f64(),
                    r.cdf_distance.to_f64()
                )?;
            }
            let f = &report.flags;
            let show = |b: Option<bool>| b.map_or_else(|| "indeterminate".to_string(), |b| b.to_string());
            writeln!(out, "min alpha decreasing:          {}", show(f.min_alpha_decreasing))?;
            writeln!(out, "p~g/mu increasing below bound: {}", show(f.spectral_ratio_increasing_below_bound))?;
            writeln!(out, "CDF distance nonincreasing:    {}", show(f.cdf_distance_nonincreasing))?;
            writeln!(out, "final p~g/mu gap:              {}", f.final_spectral_gap)?;
            writeln!(out, "final p_g/mu gap:              {}", f.final_geometric_gap)?;
            writeln!(out, "note: {}", report.note)?;
        }
    }
    Ok(0)
}
