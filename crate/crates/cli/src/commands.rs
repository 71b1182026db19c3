use std::path::Path;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use spherecover::oracle::{
    circle_cover_check, hemisphere_sector_instance, random_short_arcs, sample_sphere_augmented, sampling_cover_check,
    shattered_cover, shattered_lemma1_instance, simplex_cover, ArcSetJson,
};
use spherecover::solver::SolverConfig;
use spherecover::{
    common_point_with, cover_certificate, shortset_family_check, uncovered_witness, BigRational, InstanceSpec,
    SolveStatus,
};

use crate::error::{CliError, Exit};
use crate::family::Family;

/// Uncovered samples listed in an oracle report; the rest are only counted.
const LISTED_SAMPLES: usize = 16;

pub struct Outcome {
    pub exit: Exit,
    pub digest: String,
    pub result: Value,
}

fn to_value<S: serde::Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::json(e).context(&path.display().to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    SimplexCover,
    ShatteredCover,
    Arcs,
    Lemma1,
    HemisphereSectors,
}

/// Returns the instance document and notes for the run report.
pub fn generate(dim: usize, kind: Kind, depth: u32, seed: u64) -> Result<(Value, Value), CliError> {
    if dim == 0 {
        return Err(CliError::input("--dim must be at least 1"));
    }
    let need = |d: usize| {
        if dim == d {
            Ok(())
        } else {
            Err(CliError::input(format!("--kind {kind:?} needs --dim {d}")))
        }
    };
    Ok(match kind {
        Kind::SimplexCover => {
            let caps = simplex_cover::<f64>(dim, seed)?;
            (to_value(&caps), json!({"members": caps.len()}))
        }
        Kind::ShatteredCover => {
            let sets = shattered_cover::<f64>(dim, depth, seed)?;
            let parts: Vec<usize> = sets.iter().map(|s| s.parts().len()).collect();
            (to_value(&sets), json!({"members": sets.len(), "parts": parts}))
        }
        Kind::Arcs => {
            need(1)?;
            let deg = |v: &BigRational| v.to_f64().expect("finite angle");
            let arcs: Vec<ArcSetJson> =
                random_short_arcs(seed).iter().map(|a| ArcSetJson { arcs: vec![[deg(a.start()), deg(a.end())]] }).collect();
            (to_value(&arcs), json!({"members": arcs.len()}))
        }
        Kind::Lemma1 => {
            let (inst, hidden) = shattered_lemma1_instance::<f64>(dim, depth, seed)?;
            (to_value(&InstanceSpec::from(&inst)), json!({"sets": inst.sets().len(), "hidden_point": hidden}))
        }
        Kind::HemisphereSectors => {
            need(2)?;
            let inst = hemisphere_sector_instance::<f64>()?;
            (to_value(&InstanceSpec::from(&inst)), json!({"sets": inst.sets().len()}))
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Certificate,
    Oracle,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Certificate => "certificate",
            Mode::Oracle => "oracle",
            Mode::Both => "both",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub mode: Mode,
    pub mesh_depth: u32,
    pub exact: bool,
    pub seed: u64,
    pub extra_samples: usize,
}

/// Checks every file; results are in input order.
pub fn check_all(paths: &[std::path::PathBuf], opts: CheckOptions) -> Vec<Result<Outcome, CliError>> {
    paths
        .par_iter()
        .map(|p| read_json(p).and_then(|raw| check(&raw, opts)).map_err(|e| e.context(&p.display().to_string())))
        .collect()
}

pub fn check(raw: &Value, opts: CheckOptions) -> Result<Outcome, CliError> {
    let family = Family::from_value(raw)?;
    if opts.exact && family.dim != 1 {
        return Err(CliError::input("--exact is only available for families on S^1"));
    }
    let mut result = Map::new();
    result.insert("dim".into(), json!(family.dim));
    result.insert("family_size".into(), json!(family.members.len()));
    let mut verdicts = Vec::new();
    if opts.mode != Mode::Oracle {
        let (report, ok) = certificate(&family)?;
        result.insert("certificate".into(), report);
        verdicts.push(ok);
    }
    if opts.mode != Mode::Certificate {
        let (report, ok) = oracle(&family, opts)?;
        result.insert("oracle".into(), report);
        verdicts.push(ok);
    }
    if opts.mode == Mode::Both {
        result.insert("agreement".into(), json!(verdicts[0] == verdicts[1]));
    }
    let covered = verdicts.iter().all(|&v| v);
    result.insert("covered".into(), json!(covered));
    Ok(Outcome {
        exit: if covered { Exit::Positive } else { Exit::Refuted },
        digest: crate::canonical::digest(raw),
        result: Value::Object(result),
    })
}

fn certificate(family: &Family) -> Result<(Value, bool), CliError> {
    if let Some(caps) = family.caps()? {
        let cert = cover_certificate(&caps)?;
        let ok = cert.certified;
        return Ok((json!({"kind": "caps", "report": cert}), ok));
    }
    let report = shortset_family_check(&family.short_sets()?)?;
    let c = &report.necessary;
    let ok = c.condition_i && c.condition_ii && c.condition_iii.nondegenerate && c.condition_iii.origin_interior;
    Ok((json!({"kind": "short_sets", "report": report, "conditions_hold": ok}), ok))
}

fn oracle(family: &Family, opts: CheckOptions) -> Result<(Value, bool), CliError> {
    if family.dim == 1 {
        let arcs = family.arc_sets()?;
        let gaps_f64 = |gaps: Vec<(f64, f64)>| gaps.into_iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>();
        if opts.exact {
            let exact = arcs.iter().map(|s| s.to_exact()).collect::<Result<Vec<_>, _>>()?;
            let cover = circle_cover_check(&exact);
            let approx = cover.gaps.iter().map(|(a, b)| (a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN)));
            let rational: Vec<Value> = cover.gaps.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect();
            let report = json!({
                "method": "circle_sweep",
                "exact": true,
                "covered": cover.covered,
                "gaps": gaps_f64(approx.collect()),
                "gaps_exact": rational,
            });
            return Ok((report, cover.covered));
        }
        let cover = circle_cover_check(&arcs);
        let report = json!({"method": "circle_sweep", "exact": false, "covered": cover.covered, "gaps": gaps_f64(cover.gaps)});
        return Ok((report, cover.covered));
    }
    let sets = family.short_sets()?;
    let samples = sample_sphere_augmented::<f64>(family.dim, opts.mesh_depth, opts.seed, opts.extra_samples);
    let r = sampling_cover_check(&sets, &samples);
    let listed: Vec<&spherecover::SpherePoint<f64>> = r.uncovered.iter().take(LISTED_SAMPLES).collect();
    let report = json!({
        "method": "sampling",
        "covered": r.all_covered,
        "evidence_only": r.all_covered,
        "checked": r.checked,
        "mesh_depth": opts.mesh_depth,
        "mesh_bound": r.mesh_bound,
        "uncovered_count": r.uncovered.len(),
        "uncovered": listed,
    });
    Ok((report, r.all_covered))
}

pub fn witness(raw: &Value) -> Result<Outcome, CliError> {
    let family = Family::from_value(raw)?;
    let caps = family.caps()?.ok_or_else(|| CliError::input("witness needs caps, not multi-part sets"))?;
    if caps.len() >= family.dim + 2 {
        return Err(CliError::input("family size admits a cover; use check"));
    }
    let point = uncovered_witness(&caps)?;
    if let Some(i) = caps.iter().position(|c| c.contains(&point)) {
        return Err(CliError { exit: Exit::Refuted, message: format!("witness re-verification failed: cap {i} contains it") });
    }
    let distances = caps.iter().map(|c| c.distance(&point)).collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome {
        exit: Exit::Positive,
        digest: crate::canonical::digest(raw),
        result: json!({"point": point, "distances": distances, "verified": true}),
    })
}

pub fn solve_lemma1(raw: &Value, eps: f64, depth_limit: u32, probes: usize, seed: u64) -> Result<Outcome, CliError> {
    let spec: InstanceSpec<f64> = serde_json::from_value(raw.clone()).map_err(CliError::json)?;
    let inst = spec.build(probes, seed)?;
    let cfg = SolverConfig { depth_limit, ..SolverConfig::default() };
    let r = common_point_with(&inst, eps, &cfg)?;
    let exit = match r.status {
        SolveStatus::Ok => Exit::Positive,
        SolveStatus::NotACover => Exit::Refuted,
        SolveStatus::Limit => Exit::Limit,
    };
    let mut result = json!({
        "status": r.status,
        "point": r.point,
        "barycentric": r.barycentric,
        "max_dist": r.max_dist,
        "depth": r.depth,
        "history": r.history,
        "eps": eps,
        "face_condition_checked": inst.face_condition_checked(),
        "face_violations": inst.face_violations(),
    });
    if r.status == SolveStatus::Limit {
        result["note"] = json!("hypotheses violated or eps too small");
    }
    Ok(Outcome { exit, digest: crate::canonical::digest(raw), result })
}
