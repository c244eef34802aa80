//! Acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use diffcheb::density::{
    chebotarev_report, default_schedule, near_rationality_probe, trace_check, zeta_coeffs, zeta_shape_check,
    BasicConstructible, NumFormat,
};
use diffcheb::diffpoly::{parse_poly, PolyRing, ShiftOperator};
use diffcheb::diffvar::{count_sequence, lang_weil_fit, CountOptions};
use diffcheb::field::FieldCtx;
use diffcheb::gauss;
use diffcheb::ideals::{perfect_membership_bounded, run_corpus, IdealBounds, Membership, PointCheckOptions};
use diffcheb::par::Exec;
use diffcheb::quandle::laws::run_law_suite;
use diffcheb::quandle::CentralFunction;
use diffcheb_cli::{build_cover, build_system, run, write_artifacts, ExperimentConfig, RunOptions};
use num_bigint::BigUint;
use num_rational::BigRational;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> Result<ExperimentConfig, String> {
    ExperimentConfig::load(&configs_dir().join(name)).map_err(|e| e.to_string())
}

fn opts() -> CountOptions {
    CountOptions::default()
}

fn quandle_laws() -> Check {
    let r = run_law_suite(20_260_101, 200).map_err(|e| e.to_string())?;
    ensure(r.structures >= 200, || format!("only {} structures", r.structures))?;
    ensure(r.all_hold(), || format!("law failures: {r:?}"))?;
    Ok(format!(
        "{} structures; projection {}, functoriality {}+{}, base change {}, reciprocity {}+{} checks, {} skipped",
        r.structures,
        r.projection_formula.checked,
        r.pullback_functoriality.checked,
        r.pushforward_functoriality.checked,
        r.base_change.checked,
        r.reciprocity_injective.checked,
        r.reciprocity_surjective.checked,
        r.skipped
    ))
}

fn kummer_oracle() -> Check {
    let cfg = config("kummer_density.json")?;
    let sys = build_system(&cfg).map_err(|e| e.to_string())?;
    let cov = Arc::new(build_cover(&cfg, &sys, &opts()).map_err(|e| e.to_string())?);
    let nb = sys.num_vars();
    for n in 1..=4u32 {
        let lv = cov.level(n as u64, &opts()).map_err(|e| e.to_string())?;
        let pf = &lv.points.field;
        let ff = &lv.fiber_field;
        let units = 7u64.pow(n) - 1;
        let exp = BigUint::from(units / 3);
        let subs = cov.substitutions(&lv, Exec::Parallel).map_err(|e| e.to_string())?;
        ensure(subs.len() as u64 == units, || format!("n = {n}: {} points", subs.len()))?;
        let mut per_domain = vec![0u64; cov.domains().len()];
        for r in &subs {
            let z = cov.fiber(&lv, &r.point).map_err(|e| e.to_string())?.remove(0);
            let image = cov.act(&lv, r.class_rep, &z);
            let zeta = ff.mul(&image[nb], &ff.inv(&z[nb]).map_err(|e| e.to_string())?);
            let oracle = lv.lift.apply(ff, &pf.pow(&r.point[0], &exp));
            ensure(zeta == oracle, || format!("n = {n}: substitution differs from the power residue"))?;
            per_domain[r.domain] += 1;
        }
        ensure(per_domain.iter().all(|&c| c == units / 3), || {
            format!("n = {n}: histogram {per_domain:?}")
        })?;
    }
    let schedule = default_schedule();
    for class in 0..cov.sigma().len() {
        let alpha = CentralFunction::indicator(cov.sigma(), &[class]).map_err(|e| e.to_string())?;
        let basic = BasicConstructible::new(cov.clone(), alpha).map_err(|e| e.to_string())?;
        let tr = trace_check(&basic, 4, 1, NumFormat::default(), &opts()).map_err(|e| e.to_string())?;
        ensure(tr.per_n.iter().all(|e| e["error"]["exact"] == "0"), || {
            format!("class {class}: nonzero trace error")
        })?;
        let ch =
            chebotarev_report(&basic, 4, 1, &schedule, 1e-9, NumFormat::default(), &opts()).map_err(|e| e.to_string())?;
        let gap = ch.extra["density"]["gap"].as_f64().unwrap_or(f64::INFINITY);
        ensure(ch.pass && gap < 1e-9, || format!("class {class}: gap {gap}"))?;
        ensure(ch.extra["density"]["haar"]["exact"] == "1/3", || format!("class {class}: Haar mean"))?;
    }
    Ok("power residues match for n ≤ 4, histograms uniform, trace errors 0, gaps 0".into())
}

fn twisted_kummer() -> Check {
    let cfg = config("twisted_kummer.json")?;
    let sys = build_system(&cfg).map_err(|e| e.to_string())?;
    let cov = Arc::new(build_cover(&cfg, &sys, &opts()).map_err(|e| e.to_string())?);
    let domains = &cov.domains().domains;
    ensure(domains.len() == 1 && domains[0].len() == 3, || format!("domains {domains:?}"))?;
    for n in 1..=3 {
        let h = cov.substitution_histogram(n, &opts()).map_err(|e| e.to_string())?;
        ensure(h.counts.len() == 1 && h.total() == 4u64.pow(n as u32) * 2 - 1, || {
            format!("n = {n}: histogram {:?}", h.counts)
        })?;
    }
    let out = run(&cfg, &RunOptions::default()).map_err(|e| e.to_string())?;
    let d = &out.json["density"];
    let gap = d["gap"].as_f64().unwrap_or(f64::INFINITY);
    ensure(out.pass && d["estimate"]["exact"] == "1" && gap < 1e-9, || format!("density {d}"))?;
    Ok("one domain of size 3, every substitution in it, density 1".into())
}

fn twisted_lang_weil() -> Check {
    let out = run(&config("langweil.json")?, &RunOptions::default()).map_err(|e| e.to_string())?;
    let fitted = &out.json["fitted"];
    let c = fitted["C"].as_f64().ok_or("C is not finite")?;
    let exponent = match &fitted["exponent"] {
        serde_json::Value::String(s) if s == "-inf" => f64::NEG_INFINITY,
        v => v.as_f64().ok_or_else(|| format!("exponent {v}"))?,
    };
    ensure(out.pass && c.is_finite() && exponent <= 0.55, || {
        format!("verdict {}, C {c}, exponent {exponent}", out.pass)
    })?;
    Ok(format!("C = {c:.6}, residual exponent {exponent}, stable windows"))
}

fn zeta_shape() -> Check {
    let cfg = config("gm_zeta.json")?;
    let sys = build_system(&cfg).map_err(|e| e.to_string())?;
    let ns: Vec<u64> = (1..=12).collect();
    let cs = count_sequence(&sys, &ns, &opts()).map_err(|e| e.to_string())?;
    let z = zeta_coeffs(&cs).map_err(|e| e.to_string())?;
    for (i, &n) in ns.iter().enumerate() {
        let want = BigRational::new((7i64.pow(n as u32) - 1).into(), (n as i64).into());
        ensure(z.coeffs[i] == gauss::from_real(want), || format!("n = {n}: {}", z.coeffs[i]))?;
    }
    let one = BigRational::from_integer(1.into());
    let fit = lang_weil_fit(&cs, Some(1), Some(one.clone())).map_err(|e| e.to_string())?;
    ensure(fit.residuals.iter().all(|r| *r == -one.clone()), || "residuals differ from −1".into())?;
    let rep = zeta_shape_check(&cs, Some(1), Some(one), 0.05, NumFormat::default()).map_err(|e| e.to_string())?;
    ensure(rep.pass, || "zeta_shape_check failed".into())?;
    let p = near_rationality_probe(&cs, 2).map_err(|e| e.to_string())?.ok_or("no rational fit")?;
    let want: Vec<BigRational> = [1, -8, 7].iter().map(|&c| BigRational::from_integer(c.into())).collect();
    ensure(p.denominator == want, || format!("denominator {:?}", p.denominator))?;
    Ok("log-zeta (7^n − 1)/n for n ≤ 12, residuals −1, denominator (1 − t)(1 − 7t)".into())
}

fn ideals() -> Check {
    let ring = PolyRing::new(FieldCtx::cached(2, 1).map_err(|e| e.to_string())?, vec!["x".into()]);
    let x = parse_poly(&ring, "x").map_err(|e| e.to_string())?;
    let g = parse_poly(&ring, "x*x@1").map_err(|e| e.to_string())?;
    let m = perfect_membership_bounded(&x, &[g], &IdealBounds::new(2, 2, 2), 0).map_err(|e| e.to_string())?;
    ensure(m == Membership::Yes(ShiftOperator::new(vec![1, 1])), || format!("{m:?}"))?;
    let r = run_corpus(2024, 50, &IdealBounds::new(2, 2, 2), &PointCheckOptions::default(), Exec::Parallel)
        .map_err(|e| e.to_string())?;
    ensure(r.cases.len() == 50 && r.passed(), || {
        format!(
            "monotonicity {}, witnesses {}, points {}, intersections {}",
            r.monotonicity_violations, r.witness_failures, r.point_inconsistencies, r.intersection_violations
        )
    })?;
    let out = run(&config("ideals.json")?, &RunOptions::default()).map_err(|e| e.to_string())?;
    ensure(out.pass, || "ideals config failed".into())?;
    Ok(format!("ν = 1+σ; corpus of 50 with {} members and no violations", r.yes))
}

fn determinism() -> Check {
    let mut names: Vec<PathBuf> = std::fs::read_dir(configs_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    let mut files = 0;
    for path in &names {
        let cfg = ExperimentConfig::load(path).map_err(|e| e.to_string())?;
        let mut written = Vec::new();
        for (i, dir) in dirs.iter().enumerate() {
            let ro = RunOptions {
                out_dir: Some(dir.path().to_path_buf()),
                // the second run is sequential, so thread scheduling cannot matter
                threads: (i == 1).then_some(1),
                ..RunOptions::default()
            };
            let out = run(&cfg, &ro).map_err(|e| format!("{}: {e}", path.display()))?;
            written.push(write_artifacts(&cfg, &out, &ro).map_err(|e| e.to_string())?);
        }
        for (a, b) in written[0].iter().zip(&written[1]) {
            let (x, y) = (std::fs::read(a).map_err(|e| e.to_string())?, std::fs::read(b).map_err(|e| e.to_string())?);
            ensure(x == y, || format!("{} differs between runs", a.display()))?;
            files += 1;
        }
    }
    ensure(files >= 2 * names.len(), || format!("only {files} artifacts"))?;
    Ok(format!("{} configs, {files} artifacts byte-identical", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<u64>); 7] = [
        ("quandle law suite", quandle_laws, Some(30)),
        ("Kummer oracle", kummer_oracle, Some(60)),
        ("twisted Kummer", twisted_kummer, None),
        ("twisted Lang-Weil", twisted_lang_weil, Some(10)),
        ("zeta shape", zeta_shape, None),
        ("ideals", ideals, None),
        ("determinism", determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(s)) if elapsed > Duration::from_secs(s) => Err(format!("took longer than {s} s")),
            (r, _) => r,
        };
        let secs = elapsed.as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
