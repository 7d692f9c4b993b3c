//! Command implementations over the library crate.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nctorus::{
    build, element_from_json, element_to_json, homotopy, k0_from_trace, near_rational,
    spec_from_json, spec_warnings, verify, K0Class, TorusElement, VerifyConfig,
};

type CmdResult = Result<u8, String>;

fn default_tol() -> f64 {
    std::env::var("NCTORUS_TOL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1e-9)
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn k0_label(k0: &Option<K0Class>) -> String {
    match k0 {
        Some(c) => format!("({}, {})", c.m, c.n),
        None => "unresolved".to_string(),
    }
}

pub fn cmd_build(spec_path: &Path, out: Option<&Path>) -> CmdResult {
    let spec = spec_from_json(&read_file(spec_path)?).map_err(|e| e.to_string())?;
    for warning in spec_warnings(&spec) {
        eprintln!("warning: {warning}");
    }
    let element = build(&spec).map_err(|e| e.to_string())?;
    let out_path: PathBuf = match out {
        Some(p) => p.to_path_buf(),
        None => spec_path.with_extension("element.json"),
    };
    write_file(
        &out_path,
        &element_to_json(&element).map_err(|e| e.to_string())?,
    )?;

    let trace = element.trace();
    let order = element.order(1e-12);
    let k0 = k0_from_trace(trace, element.theta(), 20, 1e-6).ok();
    println!(
        "built {} | theta = {} | trace = {:.12} | order = {} | K0 = {}",
        out_path.display(),
        element.theta(),
        trace,
        order,
        k0_label(&k0)
    );
    Ok(0)
}

pub struct VerifyOptions {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub oracle_trials: Option<usize>,
    pub oracle_probes: Option<usize>,
    pub seed: Option<u64>,
    pub report: Option<PathBuf>,
}

fn verify_config(
    tol: Option<f64>,
    samples: Option<usize>,
    oracle_trials: Option<usize>,
    oracle_probes: Option<usize>,
    seed: Option<u64>,
) -> VerifyConfig {
    let defaults = VerifyConfig::default();
    VerifyConfig {
        tol: tol.unwrap_or_else(default_tol),
        samples: samples.unwrap_or(defaults.samples),
        oracle_trials: oracle_trials.unwrap_or(defaults.oracle_trials),
        oracle_probes: oracle_probes.unwrap_or(defaults.oracle_probes),
        seed: seed.unwrap_or(defaults.seed),
        ..defaults
    }
}

pub fn cmd_verify(element_path: &Path, opts: VerifyOptions) -> CmdResult {
    let element = element_from_json(&read_file(element_path)?).map_err(|e| e.to_string())?;
    let config = verify_config(
        opts.tol,
        opts.samples,
        opts.oracle_trials,
        opts.oracle_probes,
        opts.seed,
    );
    let report = verify(&element, &config);
    let report_path = opts.report.unwrap_or_else(|| {
        let mut p = element_path.as_os_str().to_owned();
        p.push(".report.json");
        PathBuf::from(p)
    });
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    write_file(&report_path, &json)?;

    println!(
        "{} | trace = {:.12} | order = {} | K0 = {} | max residual = {:.3e} | oracle = {}",
        if report.pass { "PASS" } else { "FAIL" },
        report.trace,
        report.order,
        k0_label(&report.k0),
        report
            .residual_selfadjoint
            .max(report.residual_idempotent_in_band)
            .max(report.residual_idempotent_overflow)
            .max(report.residual_eq_k)
            .max(report.residual_eq_0),
        report
            .oracle_residual
            .map(|r| format!("{r:.3e}"))
            .unwrap_or_else(|| "skipped".to_string()),
    );
    println!("report written to {}", report_path.display());
    Ok(if report.pass { 0 } else { 1 })
}

/// Sampled columns for the nonnegative nonzero bands of one element.
/// The grid is strictly increasing in `[0, 1)` and contains every
/// breakpoint of the band exactly.
pub struct PlotBundle {
    pub theta: f64,
    pub source_hash: u64,
    pub bands: Vec<BandSamples>,
}

pub struct BandSamples {
    pub k: i32,
    pub breakpoints: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn sample_bundle(element: &TorusElement, resolution: usize, source_hash: u64) -> PlotBundle {
    let mut bands = Vec::new();
    for (k, f) in element.bands() {
        if k < 0 {
            // negative bands are determined by self-adjointness
            continue;
        }
        let breakpoints = f.breakpoints();
        let mut xs: Vec<f64> = (0..resolution)
            .map(|i| i as f64 / resolution as f64)
            .collect();
        xs.extend(breakpoints.iter().copied());
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.retain(|x| (0.0..1.0).contains(x));
        let points = xs.iter().map(|&x| (x, f.evaluate(x))).collect();
        bands.push(BandSamples {
            k,
            breakpoints,
            points,
        });
    }
    PlotBundle {
        theta: element.theta(),
        source_hash,
        bands,
    }
}

pub fn cmd_plot(element_path: &Path, resolution: usize, out_dir: Option<&Path>) -> CmdResult {
    if resolution < 64 {
        return Err(format!(
            "resolution {resolution} is below the minimum of 64"
        ));
    }
    let raw = read_file(element_path)?;
    let element = element_from_json(&raw).map_err(|e| e.to_string())?;
    let bundle = sample_bundle(&element, resolution, fnv1a(raw.as_bytes()));
    let dir = out_dir.unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let stem = element_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "element".to_string());

    let mut meta = String::new();
    let _ = writeln!(
        meta,
        "{{\n  \"theta\": {:?},\n  \"source_hash\": \"{:016x}\",\n  \"bands\": [",
        bundle.theta, bundle.source_hash
    );
    for (i, band) in bundle.bands.iter().enumerate() {
        let mut csv = String::from("x,value\n");
        for (x, v) in &band.points {
            let _ = writeln!(csv, "{x:.16e},{v:.16e}");
        }
        let path = dir.join(format!("{stem}_p{}.csv", band.k));
        write_file(&path, &csv)?;
        println!("wrote {} ({} rows)", path.display(), band.points.len());
        let breaks: Vec<String> = band.breakpoints.iter().map(|b| format!("{b:?}")).collect();
        let _ = write!(
            meta,
            "    {{\"k\": {}, \"breakpoints\": [{}]}}{}",
            band.k,
            breaks.join(", "),
            if i + 1 < bundle.bands.len() {
                ",\n"
            } else {
                "\n"
            }
        );
    }
    let _ = writeln!(meta, "  ]\n}}");
    write_file(&dir.join(format!("{stem}_plot_meta.json")), &meta)?;
    Ok(0)
}

pub fn cmd_homotopy(
    spec_path: &Path,
    steps: usize,
    tol: Option<f64>,
    seed: Option<u64>,
) -> CmdResult {
    if steps < 2 {
        return Err(format!("steps = {steps}; need at least the two endpoints"));
    }
    let spec = spec_from_json(&read_file(spec_path)?).map_err(|e| e.to_string())?;
    let config = verify_config(tol, None, None, None, seed);
    let mut worst = 0.0_f64;
    let mut failed = 0usize;
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let element = homotopy(&spec, t).map_err(|e| e.to_string())?;
        let report = verify(&element, &config);
        let residual = report
            .residual_selfadjoint
            .max(report.residual_idempotent_in_band)
            .max(report.residual_idempotent_overflow)
            .max(report.residual_eq_k)
            .max(report.residual_eq_0);
        worst = worst.max(residual);
        if !report.pass {
            failed += 1;
        }
        println!(
            "t = {t:.4} | {} | trace = {:.12} | max residual = {residual:.3e}",
            if report.pass { "PASS" } else { "FAIL" },
            report.trace
        );
    }
    println!("sweep max residual = {worst:.3e} over {steps} steps");
    Ok(if failed == 0 { 0 } else { 1 })
}

pub fn cmd_k0_sweep(theta: f64, m_max: i32) -> CmdResult {
    if !(0.0 < theta && theta < 1.0) {
        return Err(format!("theta = {theta} must lie in (0, 1)"));
    }
    if m_max < 1 {
        return Err(format!("m-max = {m_max} must be at least 1"));
    }
    if let Some((p, q)) = near_rational(theta, 64) {
        eprintln!("warning: theta is within 1e-12 of {p}/{q}; classes may collide");
    }
    println!(
        "{:>3}  {:>20}  {:>12}",
        "M", "trace = frac(M*theta)", "K0 label"
    );
    let mut traces: Vec<f64> = Vec::new();
    for m in 1..=m_max {
        let trace = (m as f64 * theta).fract();
        let n = (m as f64 * theta).floor() as i64;
        println!("{m:>3}  {trace:>20.12}  ({:>3}, {m:>2})", -n);
        traces.push(trace);
    }
    for i in 0..traces.len() {
        for j in 0..i {
            if (traces[i] - traces[j]).abs() < 1e-9 {
                println!("trace collision between M = {} and M = {}", j + 1, i + 1);
                return Ok(1);
            }
        }
    }
    println!("{} pairwise distinct traces", traces.len());
    Ok(0)
}
