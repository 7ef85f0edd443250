//! The JSON/CSV result document emitted by `find`, plus the plot-data
//! export. Field order is fixed by declaration order and zeros arrive
//! pre-sorted from the engine, so serialization is deterministic.

use holozero::{RecordKind, RegionReport, RunReport, ZeroRecord};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultDocument {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Sum of multiplicities over all reported zeros.
    pub count: u64,
    pub zeros: Vec<ZeroEntry>,
    pub regions: Vec<RegionEntry>,
    pub eval_counts: EvalCountsEntry,
    pub config: ConfigEcho,
    pub timing_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZeroEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
    pub residue_re: f64,
    pub residue_im: f64,
    pub refined: bool,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sheet: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RegionEntry {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aaa_degree: Option<usize>,
    pub depth: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalCountsEntry {
    pub f: u64,
    pub fprime: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    pub problem: String,
    pub rect: [f64; 4],
    pub max_per_region: u32,
    pub residue_tol: f64,
    pub polish: bool,
    pub seed: u64,
    pub derivative_free: bool,
    pub aaa_rel_tol: f64,
    pub quad_rel_tol: f64,
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manual_depth: Option<u32>,
}

/// Rectangles and zero coordinates for external plotting.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PlotData {
    pub rectangles: Vec<RegionEntry>,
    pub zeros: Vec<[f64; 2]>,
}

pub fn zero_entry(record: &ZeroRecord, sheet: Option<String>) -> ZeroEntry {
    ZeroEntry {
        re: record.location.re,
        im: record.location.im,
        multiplicity: record.multiplicity,
        residue_re: record.raw_residue.re,
        residue_im: record.raw_residue.im,
        refined: record.refined,
        kind: match record.kind {
            RecordKind::Zero => "zero".to_string(),
            RecordKind::Pole => "pole".to_string(),
        },
        sheet,
    }
}

pub fn region_entry(region: &RegionReport) -> RegionEntry {
    RegionEntry {
        re_min: region.rect.re_min,
        re_max: region.rect.re_max,
        im_min: region.rect.im_min,
        im_max: region.rect.im_max,
        count: region.count,
        aaa_degree: region.aaa_degree,
        depth: region.depth,
    }
}

pub fn from_report(
    records: &[ZeroRecord],
    report: &RunReport,
    sheets: Option<Vec<String>>,
    config: ConfigEcho,
    timing_seconds: f64,
) -> ResultDocument {
    let zeros = records
        .iter()
        .enumerate()
        .map(|(i, r)| zero_entry(r, sheets.as_ref().map(|s| s[i].clone())))
        .collect();
    ResultDocument {
        status: "ok".to_string(),
        error: None,
        count: report.total_multiplicity as u64,
        zeros,
        regions: report.regions.iter().map(region_entry).collect(),
        eval_counts: EvalCountsEntry {
            f: report.evaluations.f,
            fprime: report.evaluations.fprime,
        },
        config,
        timing_seconds,
    }
}

pub fn failure(error: String, config: ConfigEcho, timing_seconds: f64) -> ResultDocument {
    ResultDocument {
        status: "failed".to_string(),
        error: Some(error),
        count: 0,
        zeros: Vec::new(),
        regions: Vec::new(),
        eval_counts: EvalCountsEntry { f: 0, fprime: 0 },
        config,
        timing_seconds,
    }
}

pub fn to_csv(doc: &ResultDocument) -> String {
    let mut out = String::from("re,im,multiplicity,residue_re,residue_im,refined,kind,sheet\n");
    for z in &doc.zeros {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            z.re,
            z.im,
            z.multiplicity,
            z.residue_re,
            z.residue_im,
            z.refined,
            z.kind,
            z.sheet.as_deref().unwrap_or("")
        ));
    }
    out
}
