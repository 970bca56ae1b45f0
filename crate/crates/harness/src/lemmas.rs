//! `rso verify-lemmas`: evaluates the technical summation lemmas on a grid.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rso_core::bounds::{
    default_explicit_grid, default_general_grid, ExplicitGrid, ExplicitPoint, GeneralGrid, GeneralPoint, LemmaCheck,
};

use crate::error::Result;
use crate::output::{config_hash, invocation_dir, load_config, write_json};
use crate::Outcome;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaGridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general: Option<GeneralGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<ExplicitGrid>,
}

impl LemmaGridSpec {
    pub fn defaults() -> Self {
        LemmaGridSpec { general: Some(default_general_grid()), explicit: Some(default_explicit_grid()) }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "lemma", rename_all = "kebab-case")]
pub enum Point {
    General(GeneralPoint),
    Explicit(ExplicitPoint),
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResult {
    #[serde(flatten)]
    pub point: Point,
    /// `None` when the point lies outside the lemma's preconditions.
    pub check: Option<LemmaCheck>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
    pub all_hold: bool,
    pub points: Vec<PointResult>,
}

pub fn verify(spec: &LemmaGridSpec) -> LemmaReport {
    let mut pts: Vec<Point> = Vec::new();
    if let Some(g) = &spec.general {
        pts.extend(g.points().into_iter().map(Point::General));
    }
    if let Some(g) = &spec.explicit {
        pts.extend(g.points().into_iter().map(Point::Explicit));
    }
    let points: Vec<PointResult> = pts
        .par_iter()
        .map(|&point| {
            let r = match point {
                Point::General(p) => p.evaluate(),
                Point::Explicit(p) => p.evaluate(),
            };
            match r {
                Ok(c) => PointResult { point, check: Some(c), skipped: None },
                Err(e) => PointResult { point, check: None, skipped: Some(e.to_string()) },
            }
        })
        .collect();
    let checked = points.iter().filter(|p| p.check.is_some()).count();
    let failed = points.iter().filter(|p| p.check.is_some_and(|c| !c.holds)).count();
    LemmaReport { checked, skipped: points.len() - checked, failed, all_hold: failed == 0, points }
}

pub fn cmd_verify_lemmas(config: Option<&Path>, out: &Path, jobs: Option<usize>) -> Result<Outcome> {
    let (spec, canonical) = match config {
        Some(p) => load_config::<LemmaGridSpec>(p)?,
        None => {
            let s = LemmaGridSpec::defaults();
            let v = serde_json::to_value(&s).expect("grid serializes");
            (s, v)
        }
    };
    if spec.general.is_none() && spec.explicit.is_none() {
        log::warn!("empty lemma grid, nothing to verify");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| crate::error::HarnessError::Config(format!("jobs: {e}")))?;
    let report = pool.install(|| verify(&spec));
    let dir = invocation_dir(out, "verify-lemmas", &config_hash("verify-lemmas", &canonical))?;
    write_json(&dir.join("config.json"), &canonical)?;
    write_json(&dir.join("lemmas.json"), &report)?;
    if !report.all_hold {
        log::warn!("{} of {} lemma points failed", report.failed, report.checked);
    }
    Ok(Outcome { dir, ok: report.all_hold })
}
