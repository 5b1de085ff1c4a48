//! Machine-readable certificates and their independent re-verification.
//!
//! A certificate records the partition, the certified parameter box, the
//! angle sum enclosures and the gimbal loops. Re-verification recomputes
//! Steps III–V from the recorded box and loops alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gimbal::{removed_ends, validate_gimbal_loop, GimbalLoop, Letter, LoopError};
use crate::interval::Interval;
use crate::pipeline::{outcome_for_recheck, verify_box, PipelineOutcome, StepReport};
use crate::triangulation::{Flag, Perm4, Triangulation};
use crate::verify::{CertifyMethod, CertifyOptions, Partition};

pub const FORMAT: &str = "hypcert-certificate";
pub const VERSION: u32 = 1;
/// Working precision of every interval operation, in bits.
pub const PRECISION_BITS: u32 = 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Verified,
    NotVerified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopRecord {
    pub vertex: usize,
    pub word: Vec<String>,
    /// Flags `tet:perm` of the small hexagons bounded by the loop.
    pub hexagons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub version: u32,
    pub verdict: Verdict,
    /// SHA-256 of the canonical triangulation text without lengths.
    pub triangulation_sha256: String,
    pub tets: usize,
    pub edges: usize,
    pub vertices: usize,
    pub precision_bits: u32,
    pub method: CertifyMethod,
    pub refine: bool,
    pub steps: Vec<StepReport>,
    pub partition: Option<Partition>,
    /// Outward decimal bounds of the parameter box, per edge.
    pub nu: Option<Vec<[String; 2]>>,
    /// Outward decimal bounds of the angle sums, per edge.
    pub theta: Option<Vec<[String; 2]>>,
    pub inflation_rounds: Option<usize>,
    pub gimbal_loops: Option<Vec<LoopRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error("unsupported certificate format {format:?} version {version}")]
    Format { format: String, version: u32 },
    #[error("certificate is for a different triangulation")]
    Triangulation,
    #[error("certificate does not claim verification")]
    NotVerified,
    #[error("certificate lacks {0}")]
    Missing(&'static str),
    #[error("inconsistent partition")]
    Partition,
    #[error("bad interval for edge {0}")]
    Interval(usize),
    #[error("bad gimbal loop record: {0}")]
    LoopRecord(String),
    #[error("gimbal loop of vertex {vertex} is invalid: {source}")]
    Loop { vertex: usize, source: LoopError },
}

/// SHA-256 hex digest of the canonical text of `t`.
pub fn triangulation_digest(t: &Triangulation) -> String {
    Sha256::digest(t.to_text(None).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn decimal_pairs(xs: &[Interval]) -> Vec<[String; 2]> {
    xs.iter()
        .map(|x| {
            let (lo, hi) = x.to_decimal_pair();
            [lo, hi]
        })
        .collect()
}

fn loop_record(lp: &GimbalLoop) -> LoopRecord {
    LoopRecord {
        vertex: lp.vertex,
        word: lp.word(),
        hexagons: lp.hexagons.iter().map(|f| format!("{}:{}", f.tet, f.perm)).collect(),
    }
}

fn parse_flag(t: &Triangulation, s: &str) -> Option<Flag> {
    let (tet, perm) = s.split_once(':')?;
    let tet: usize = tet.parse().ok()?;
    let perm = Perm4::from_digits(perm)?;
    (tet < t.num_tets()).then_some(Flag::new(tet, perm))
}

fn parse_loop(t: &Triangulation, r: &LoopRecord) -> Result<GimbalLoop, CertificateError> {
    let bad = |s: &str| CertificateError::LoopRecord(s.to_string());
    if r.vertex >= t.num_vertices() {
        return Err(bad("vertex out of range"));
    }
    let mut letters = Vec::with_capacity(r.word.len());
    for w in &r.word {
        let l: Letter = w.parse().map_err(|_| bad(w))?;
        let in_range = match l {
            Letter::Edge(e) => e.start.tet < t.num_tets(),
            Letter::Polygon(end) => end.class < t.num_edges(),
        };
        if !in_range {
            return Err(bad(w));
        }
        letters.push(l);
    }
    let hexagons = r
        .hexagons
        .iter()
        .map(|h| parse_flag(t, h).ok_or_else(|| bad(h)))
        .collect::<Result<_, _>>()?;
    Ok(GimbalLoop {
        vertex: r.vertex,
        letters,
        hexagons,
    })
}

impl Certificate {
    /// Certificate of a pipeline run; timings are recorded on request only,
    /// so that the default output is deterministic.
    pub fn from_outcome(t: &Triangulation, out: &PipelineOutcome, opts: &CertifyOptions, timings: bool) -> Self {
        Certificate {
            format: FORMAT.to_string(),
            version: VERSION,
            verdict: if out.verified() {
                Verdict::Verified
            } else {
                Verdict::NotVerified
            },
            triangulation_sha256: triangulation_digest(t),
            tets: t.num_tets(),
            edges: t.num_edges(),
            vertices: t.num_vertices(),
            precision_bits: PRECISION_BITS,
            method: opts.method,
            refine: opts.refine,
            steps: out.steps.clone(),
            partition: out.partition.clone(),
            nu: out.certified.as_ref().map(|b| decimal_pairs(&b.nu)),
            theta: out.theta.as_deref().map(decimal_pairs),
            inflation_rounds: out.certified.as_ref().map(|b| b.rounds),
            gimbal_loops: out.gimbal.as_ref().map(|g| g.loops.iter().map(loop_record).collect()),
            timings_ms: timings.then(|| {
                out.timings
                    .iter()
                    .map(|(s, d)| (s.to_string(), d.as_secs_f64() * 1e3))
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, CertificateError> {
        serde_json::from_str(s).map_err(|e| CertificateError::Json(e.to_string()))
    }

    /// The recorded parameter box, widened to absorb decimal parsing.
    pub fn nu_box(&self) -> Result<Vec<Interval>, CertificateError> {
        let nu = self.nu.as_ref().ok_or(CertificateError::Missing("a parameter box"))?;
        nu.iter()
            .enumerate()
            .map(|(e, [lo, hi])| Interval::from_decimal_pair(lo, hi).map_err(|_| CertificateError::Interval(e)))
            .collect()
    }

    /// Recomputes Steps III–V for `t` from the recorded box, partition and
    /// loops. Steps I and II are reported as recorded.
    pub fn recheck(&self, t: &Triangulation) -> Result<PipelineOutcome, CertificateError> {
        if self.format != FORMAT || self.version != VERSION {
            return Err(CertificateError::Format {
                format: self.format.clone(),
                version: self.version,
            });
        }
        if self.triangulation_sha256 != triangulation_digest(t) {
            return Err(CertificateError::Triangulation);
        }
        if self.verdict != Verdict::Verified {
            return Err(CertificateError::NotVerified);
        }
        let m = t.num_edges();
        let part = self.partition.as_ref().ok_or(CertificateError::Missing("a partition"))?;
        let rebuilt = Partition::new(m, &part.eq, &part.var).map_err(|_| CertificateError::Partition)?;
        if &rebuilt != part || part.sim.len() != 3 * t.num_vertices() {
            return Err(CertificateError::Partition);
        }
        let nu = self.nu_box()?;
        if nu.len() != m {
            return Err(CertificateError::Missing("one interval per edge"));
        }
        let records = self.gimbal_loops.as_ref().ok_or(CertificateError::Missing("gimbal loops"))?;
        let mut loops: Vec<GimbalLoop> = records.iter().map(|r| parse_loop(t, r)).collect::<Result<_, _>>()?;
        loops.sort_by_key(|l| l.vertex);
        if loops.iter().map(|l| l.vertex).ne(0..t.num_vertices()) {
            return Err(CertificateError::LoopRecord("need one loop per vertex".into()));
        }
        for lp in &loops {
            validate_gimbal_loop(t, lp, &removed_ends(t, lp.vertex, &part.sim)).map_err(|source| {
                CertificateError::Loop {
                    vertex: lp.vertex,
                    source,
                }
            })?;
        }
        let mut out = outcome_for_recheck(part.clone());
        verify_box(t, &nu, part, Some(loops), &mut out);
        Ok(out)
    }
}
