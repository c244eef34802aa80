//! Experiment orchestration: build the objects a config describes, run the
//! requested check and render its JSON and CSV artifacts.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use diffcheb::cover::{histogram_csv, CoverInput, CoverSpec};
use diffcheb::density::{
    chebotarev_report, default_schedule, near_rationality_probe, trace_check, zeta_coeffs, zeta_shape_check,
    BasicConstructible, NumFormat, Report,
};
use diffcheb::diffpoly::{parse_poly, DifferencePolynomial};
use diffcheb::diffvar::{count_sequence, Base, CountOptions, CountSequence, DiffSystem};
use diffcheb::ideals::{
    perfect_membership_bounded, perfect_point_check, run_corpus, verify_witness, CorpusReport, IdealBounds,
    Membership, PointCheckOptions,
};
use diffcheb::par::Exec;
use diffcheb::quandle::CentralFunction;
use serde_json::{json, Map, Value};

use crate::config::{parse_gauss, string_map, CentralKind, ExperimentConfig, ExperimentKind};
use crate::error::CliError;

/// Command-line overrides shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub budget: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub precision_bits: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: None,
            threads: None,
            budget: None,
            out_dir: None,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}

pub const DEFAULT_PRECISION_BITS: u32 = 200;

impl RunOptions {
    fn exec(&self) -> Exec {
        if self.threads == Some(1) {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn count_options(&self) -> CountOptions {
        let mut o = CountOptions {
            exec: self.exec(),
            ..CountOptions::default()
        };
        if let Some(b) = self.budget {
            o.budget = b;
        }
        o
    }

    /// Run `f` on a pool of the requested size, or the global pool.
    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.threads {
            Some(n) if n > 1 => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::config(format!("cannot start {n} threads: {e}")))?;
                Ok(pool.install(f))
            }
            _ => Ok(f()),
        }
    }
}

/// Result of `run`: the verdict, a human summary and the rendered artifacts.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub summary: Vec<String>,
    pub json: Value,
    pub csv: String,
}

impl Outcome {
    /// Pretty JSON with a trailing newline, as written to disk.
    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

fn base_of(cfg: &ExperimentConfig) -> Result<Base, CliError> {
    Ok(Base::new(cfg.base.p, cfg.base.q, cfg.base.q0)?)
}

/// The configured variety.
pub fn build_system(cfg: &ExperimentConfig) -> Result<DiffSystem, CliError> {
    Ok(DiffSystem::parse(
        base_of(cfg)?,
        &cfg.variety.vars,
        &cfg.variety.equations,
        &cfg.variety.units,
        cfg.base.generator_name.as_deref(),
    )?)
}

/// The configured cover, validated.
pub fn build_cover(cfg: &ExperimentConfig, sys: &DiffSystem, opts: &CountOptions) -> Result<CoverSpec, CliError> {
    let c = cfg.cover.as_ref().ok_or_else(|| CliError::config("no cover section"))?;
    let input = CoverInput {
        fiber_vars: c.fiber_vars.clone(),
        fiber_equations: c.fiber_equations.clone(),
        fiber_units: c.fiber_units.clone(),
        group_generators: c.group_generators.iter().map(string_map).collect::<Result<_, _>>()?,
        sigma_tilde: string_map(&c.sigma_tilde)?,
        const_field_degree: c.const_field_degree,
        validation_level: c.validation_level,
        fiber_extension: c.fiber_extension,
    };
    Ok(CoverSpec::build(sys, &input, opts)?)
}

/// The configured central function on the cover's Σ.
pub fn build_central(cfg: &ExperimentConfig, cov: &CoverSpec) -> Result<CentralFunction, CliError> {
    let c = cfg
        .central_function
        .as_ref()
        .ok_or_else(|| CliError::config("no centralFunction section"))?;
    let sigma = cov.sigma();
    match c.kind {
        CentralKind::Indicator => {
            let members = c
                .data
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|i| i as usize)
                        .ok_or_else(|| CliError::config("indicator data must list element indices"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CentralFunction::indicator(sigma, &members)?)
        }
        CentralKind::Table => {
            let values = c.data.iter().map(parse_gauss).collect::<Result<Vec<_>, _>>()?;
            Ok(CentralFunction::new(sigma.clone(), values)?)
        }
    }
}

/// Dry run: parse, build the cover and validate its relations, list Σ's
/// conjugacy domains. Nothing is counted.
pub fn validate(cfg: &ExperimentConfig, ro: &RunOptions) -> Result<Vec<String>, CliError> {
    ro.install(|| {
        let sys = build_system(cfg)?;
        let mut lines = vec![format!(
            "variety: {} variable(s), {} equation(s) over F_{} (q0 = {})",
            sys.num_vars(),
            sys.equations().len(),
            cfg.base.q,
            cfg.base.q0
        )];
        if cfg.cover.is_some() {
            let cov = build_cover(cfg, &sys, &ro.count_options())?;
            lines.push(format!("group: order {}", cov.group().len()));
            lines.push(format!("Σ: size {}", cov.sigma().len()));
            let domains = &cov.domains().domains;
            lines.push(format!("domains: {}", domains.len()));
            for (i, d) in domains.iter().enumerate() {
                lines.push(format!("  domain {i}: size {} members {d:?}", d.len()));
            }
            if cfg.central_function.is_some() {
                let alpha = build_central(cfg, &cov)?;
                lines.push(format!("central function: {} values", alpha.values().len()));
            }
        }
        if let Some(ideal) = &cfg.experiment.ideal {
            parse_poly(sys.ring(), &ideal.f)?;
            for g in ideal.gens.iter().flatten() {
                parse_poly(sys.ring(), g)?;
            }
            lines.push("ideal: expressions parse".to_string());
        }
        Ok(lines)
    })?
}

/// Run the configured experiment. Artifacts are returned, not written.
pub fn run(cfg: &ExperimentConfig, ro: &RunOptions) -> Result<Outcome, CliError> {
    ro.install(|| run_inner(cfg, ro))?
}

fn run_inner(cfg: &ExperimentConfig, ro: &RunOptions) -> Result<Outcome, CliError> {
    let fmt = NumFormat::from_bits(ro.precision_bits);
    let copts = ro.count_options();
    let seed = ro.seed.unwrap_or(cfg.seed);
    let spec = &cfg.experiment;
    let kind = spec.kind;
    let sys = build_system(cfg)?;
    let (report, csv, mut summary) = match kind {
        ExperimentKind::Count => {
            let cs = count_sequence(&sys, &cfg.levels()?, &copts)?;
            let summary = vec![format!("counts: {:?}", cs.counts)];
            (count_report(&cs), cs.to_csv(), summary)
        }
        ExperimentKind::Subst => subst(cfg, &sys, &copts)?,
        ExperimentKind::Density | ExperimentKind::Trace => {
            let cov = Arc::new(build_cover(cfg, &sys, &copts)?);
            let alpha = build_central(cfg, &cov)?;
            let basic = BasicConstructible::new(cov, alpha)?;
            let n_max = cfg.n_range()?[1];
            let d = spec.d.unwrap_or(1);
            let report = if kind == ExperimentKind::Density {
                let schedule = spec.schedule.clone().unwrap_or_else(default_schedule);
                chebotarev_report(&basic, n_max, d, &schedule, spec.tolerance.unwrap_or(1e-9), fmt, &copts)?
            } else {
                trace_check(&basic, n_max, d, fmt, &copts)?
            };
            let csv = rows_csv(&report.per_n)?;
            (report, csv, Vec::new())
        }
        ExperimentKind::Langweil | ExperimentKind::ZetaShape => {
            let cs = count_sequence(&sys, &cfg.levels()?, &copts)?;
            let report = zeta_shape_check(&cs, spec.d, cfg.mu()?, spec.tolerance.unwrap_or(0.05), fmt)?;
            (report, cs.to_csv(), vec![format!("counts: {:?}", cs.counts)])
        }
        ExperimentKind::Pade => {
            let cs = count_sequence(&sys, &cfg.levels()?, &copts)?;
            pade(&cs, spec.max_degree.unwrap_or(2), fmt)?
        }
        ExperimentKind::IdealMember => ideal_member(cfg, &sys, seed, ro)?,
    };
    let mut json = report.to_json();
    if let Value::Object(m) = &mut json {
        m.insert("experiment".into(), json!(kind.name()));
        m.insert("seed".into(), json!(seed));
    }
    let mut lines = vec![format!(
        "{}: verdict {}",
        report.check,
        if report.pass { "pass" } else { "fail" }
    )];
    if let Some(f) = report.fitted {
        lines.push(format!("fitted: C = {}, exponent = {}", f.c, f.exponent));
    }
    if let Some(d) = report.extra.get("density") {
        let show = |k: &str| match d.get(k).map(|v| v.get("decimal").unwrap_or(v)) {
            Some(Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
            None => String::new(),
        };
        lines.push(format!(
            "density estimate {}, Haar mean {}, gap {}",
            show("estimate"),
            show("haar"),
            show("gap")
        ));
    }
    lines.append(&mut summary);
    Ok(Outcome {
        pass: report.pass,
        summary: lines,
        json,
        csv,
    })
}

fn count_params(cs: &CountSequence) -> Value {
    json!({
        "p": cs.p,
        "q": cs.q,
        "q0": cs.q0,
        "n_min": cs.ns.first().copied().unwrap_or(0),
        "n_max": cs.ns.last().copied().unwrap_or(0),
    })
}

fn count_rows(cs: &CountSequence) -> Vec<Value> {
    (0..cs.len())
        .map(|i| {
            json!({
                "n": cs.ns[i],
                "Q": cs.big_q[i].to_string(),
                "count": cs.counts[i].to_string(),
                "exact": cs.exact[i],
            })
        })
        .collect()
}

fn count_report(cs: &CountSequence) -> Report {
    Report {
        check: "count".into(),
        params: count_params(cs),
        per_n: count_rows(cs),
        pass: true,
        fitted: None,
        extra: Map::new(),
    }
}

fn subst(
    cfg: &ExperimentConfig,
    sys: &DiffSystem,
    copts: &CountOptions,
) -> Result<(Report, String, Vec<String>), CliError> {
    let cov = build_cover(cfg, sys, copts)?;
    let hs = cfg
        .levels()?
        .into_iter()
        .map(|n| cov.substitution_histogram(n, copts))
        .collect::<Result<Vec<_>, _>>()?;
    let sigma_size: usize = cov.sigma().len();
    let mut summary = Vec::new();
    let per_n: Vec<Value> = hs
        .iter()
        .map(|h| {
            let total = h.total();
            // counts proportional to domain sizes
            let uniform = h
                .counts
                .iter()
                .zip(&h.domain_sizes)
                .all(|(&c, &s)| c as u128 * sigma_size as u128 == total as u128 * s as u128);
            summary.push(format!("n = {}: counts {:?}", h.n, h.counts));
            json!({ "n": h.n, "points": total, "counts": h.counts, "uniform": uniform })
        })
        .collect();
    let mut extra = Map::new();
    extra.insert("sigma_size".into(), json!(sigma_size));
    extra.insert("domains".into(), json!(cov.domains().domains));
    let report = Report {
        check: "subst".into(),
        params: json!({
            "p": cfg.base.p,
            "q": cfg.base.q,
            "q0": cfg.base.q0,
            "n_range": cfg.n_range()?,
        }),
        per_n,
        pass: true,
        fitted: None,
        extra,
    };
    Ok((report, histogram_csv(&hs), summary))
}

fn pade(cs: &CountSequence, max_degree: usize, fmt: NumFormat) -> Result<(Report, String, Vec<String>), CliError> {
    let fit = near_rationality_probe(cs, max_degree)?;
    let zeta = zeta_coeffs(cs)?;
    let per_n = count_rows(cs)
        .into_iter()
        .zip(&zeta.coeffs)
        .map(|(mut row, z)| {
            row["zeta"] = fmt.gauss(z);
            row
        })
        .collect();
    let strings = |v: &[num_rational::BigRational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
    let mut extra = Map::new();
    let summary = match &fit {
        Some(f) => {
            extra.insert(
                "fit".into(),
                json!({
                    "num_degree": f.num_degree,
                    "den_degree": f.den_degree,
                    "numerator": strings(&f.numerator),
                    "denominator": strings(&f.denominator),
                    "degenerate": f.degenerate,
                }),
            );
            vec![format!(
                "rational fit ({}, {}): numerator {:?}, denominator {:?}",
                f.num_degree,
                f.den_degree,
                strings(&f.numerator),
                strings(&f.denominator)
            )]
        }
        None => {
            extra.insert("fit".into(), Value::Null);
            vec!["no rational fit".to_string()]
        }
    };
    let mut params = count_params(cs);
    params["max_degree"] = json!(max_degree);
    let report = Report {
        check: "pade".into(),
        params,
        per_n,
        pass: fit.is_some(),
        fitted: None,
        extra,
    };
    let csv = rows_csv(&report.per_n)?;
    Ok((report, csv, summary))
}

fn ideal_member(
    cfg: &ExperimentConfig,
    sys: &DiffSystem,
    seed: u64,
    ro: &RunOptions,
) -> Result<(Report, String, Vec<String>), CliError> {
    let spec = cfg.experiment.ideal.as_ref().ok_or_else(|| CliError::config("no ideal section"))?;
    let ring = sys.ring();
    let f = parse_poly(ring, &spec.f)?;
    let gens: Vec<DifferencePolynomial> = match &spec.gens {
        Some(gs) => gs.iter().map(|g| parse_poly(ring, g)).collect::<Result<_, _>>()?,
        None => sys.equations().to_vec(),
    };
    let gsys = DiffSystem::new(sys.base(), ring.clone(), gens.clone(), sys.units().to_vec())?;
    let b = cfg.experiment.bounds.map_or((2, 2, 2), |b| (b.k, b.l, b.m));
    let bounds = IdealBounds::new(b.0, b.1, b.2);
    let mut pc = PointCheckOptions::default();
    if let Some(ns) = &spec.point_levels {
        pc.ns = ns.clone();
    }
    if let Some(es) = &spec.point_extensions {
        pc.exts = es.clone();
    }
    if let Some(budget) = ro.budget {
        pc.budget = budget;
    }
    let twist = sys.base().b();
    let check = perfect_point_check(&gsys, &f, &bounds, &pc)?;
    let enlarged = perfect_membership_bounded(&f, &gens, &bounds.enlarged(), twist)?;
    let verified = match &check.membership {
        Membership::Yes(nu) => verify_witness(&f, &gens, bounds.k, nu, twist, bounds.limits)?,
        Membership::NoWithinBounds => true,
    };
    let expected = spec.expect.as_deref().is_none_or(|e| (e == "yes") == check.membership.is_yes());
    let monotone = !check.membership.is_yes() || enlarged.is_yes();
    let corpus: Option<CorpusReport> = spec
        .corpus_size
        .map(|size| run_corpus(seed, size, &bounds, &PointCheckOptions::default(), ro.exec()))
        .transpose()?;
    let witness = check.membership.witness().map(|nu| nu.to_string());
    let gens_text: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    let mut per_n = vec![json!({
        "case": "query",
        "p": cfg.base.p,
        "f": f.to_string(),
        "gens": gens_text.join("; "),
        "extra": Value::Null,
        "witness": witness,
        "enlarged_witness": enlarged.witness().map(|nu| nu.to_string()),
        "monotone": monotone,
        "verified": verified,
        "solutions": check.solutions,
        "counterexamples": check.counterexamples.len(),
        "intersection_violations": Value::Null,
    })];
    if let Some(c) = &corpus {
        per_n.extend(c.cases.iter().enumerate().map(|(i, r)| {
            json!({
                "case": i,
                "p": r.p,
                "f": r.f,
                "gens": r.gens.join("; "),
                "extra": r.extra,
                "witness": r.witness,
                "enlarged_witness": r.enlarged_witness,
                "monotone": r.monotone,
                "verified": r.verified,
                "solutions": r.solutions,
                "counterexamples": r.counterexamples,
                "intersection_violations": r.intersection_violations.len(),
            })
        }));
    }
    let pass = verified && check.consistent() && expected && monotone && corpus.as_ref().is_none_or(|c| c.passed());
    let mut extra = Map::new();
    extra.insert("witness".into(), json!(witness));
    extra.insert("verified".into(), json!(verified));
    extra.insert("expected".into(), json!(expected));
    extra.insert(
        "point_check".into(),
        json!({
            "tuples": check.tuples,
            "solutions": check.solutions,
            "counterexamples": check.counterexamples,
        }),
    );
    let mut summary = vec![match &witness {
        Some(nu) => format!("{f}: member with ν = {nu}"),
        None => format!("{f}: not a member within bounds"),
    }];
    if let Some(c) = &corpus {
        extra.insert(
            "corpus".into(),
            json!({
                "seed": c.seed,
                "size": c.cases.len(),
                "yes": c.yes,
                "monotonicity_violations": c.monotonicity_violations,
                "witness_failures": c.witness_failures,
                "point_inconsistencies": c.point_inconsistencies,
                "intersection_violations": c.intersection_violations,
            }),
        );
        summary.push(format!(
            "corpus of {}: {} members, {} monotonicity violations, {} point inconsistencies, {} intersection violations",
            c.cases.len(),
            c.yes,
            c.monotonicity_violations,
            c.point_inconsistencies,
            c.intersection_violations
        ));
    }
    let report = Report {
        check: "ideal-member".into(),
        params: json!({
            "p": cfg.base.p,
            "q": cfg.base.q,
            "q0": cfg.base.q0,
            "f": f.to_string(),
            "gens": gens_text,
            "bounds": { "k": bounds.k, "l": bounds.l, "m": bounds.m },
        }),
        per_n,
        pass,
        fitted: None,
        extra,
    };
    let csv = rows_csv(&report.per_n)?;
    Ok((report, csv, summary))
}

/// CSV from JSON objects; columns follow the first row's keys, nested
/// objects become `key_sub` columns.
pub fn rows_csv(rows: &[Value]) -> Result<String, CliError> {
    let flat: Vec<Vec<(String, String)>> = rows
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten("", r, &mut cells);
            cells
        })
        .collect();
    let Some(first) = flat.first() else {
        return Ok(String::new());
    };
    let keys: Vec<&str> = first.iter().map(|(k, _)| k.as_str()).collect();
    let err = |e: csv::Error| CliError::config(format!("CSV rendering failed: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&keys).map_err(err)?;
    for row in &flat {
        let cells = keys
            .iter()
            .map(|k| row.iter().find(|(c, _)| c == k).map_or("", |(_, v)| v.as_str()));
        w.write_record(cells).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::config(format!("CSV rendering failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV cells are UTF-8"))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}_{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Where an artifact goes: relative paths resolve against `out_dir`.
pub fn artifact_path(out_dir: Option<&Path>, path: &str) -> PathBuf {
    let p = Path::new(path);
    match out_dir {
        Some(d) if p.is_relative() => d.join(p),
        _ => p.to_path_buf(),
    }
}

/// Write the configured artifacts, returning the paths written.
pub fn write_artifacts(cfg: &ExperimentConfig, outcome: &Outcome, ro: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let targets = [
        (cfg.output.csv_path.as_deref(), outcome.csv.as_str()),
        (cfg.output.json_path.as_deref(), outcome.json_text().as_str()),
    ]
    .map(|(p, s)| (p.map(|p| artifact_path(ro.out_dir.as_deref(), p)), s.to_string()));
    for (path, text) in targets {
        let Some(path) = path else { continue };
        let io = |e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(io)?;
        }
        std::fs::write(&path, text).map_err(io)?;
        written.push(path);
    }
    Ok(written)
}
