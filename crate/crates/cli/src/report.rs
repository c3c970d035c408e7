//! Report document written by every command. Integers from lattice
//! computations are decimal strings so nothing is lost in JSON.

use fanlat::filtration::{Decomposition, DecompositionCheck, DecompositionRoute, GenerationReport};
use fanlat::io::FanFile;
use fanlat::refine::{DepthRecord, SubdivisionTrace, Verdict};
use fanlat::{Depth, IntMatrix, LatticeIndex, Sublattice, SupportPolicy};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "fanlat-report/1";

pub type Row = Vec<String>;

pub fn row(v: &[BigInt]) -> Row {
    v.iter().map(ToString::to_string).collect()
}

pub fn rows(vs: &[Vec<BigInt>]) -> Vec<Row> {
    vs.iter().map(|v| row(v)).collect()
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Row> {
    rows(&m.to_rows())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_lattice: Option<RayLatticeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<LatticeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub filtrations: Vec<FiltrationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancies: Option<Vec<DiscrepancySection>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub depths: Vec<DepthSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<DecompositionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<LocalizationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdivision: Option<SubdivisionSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scans: Vec<ScanSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub catalog: Vec<CatalogItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorSection>,
}

impl Report {
    pub fn new(command: &str, fan: Option<&str>) -> Self {
        Report {
            version: VERSION.to_string(),
            command: command.to_string(),
            fan: fan.map(str::to_string),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSection {
    pub exit_code: i32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub valid: bool,
    /// "full", "partial" or "trusted"; absent for invalid fans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    pub findings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_rays: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_cones: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplicial: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSection {
    pub ambient_rank: usize,
    pub rank: usize,
    pub basis: Vec<Row>,
}

impl From<&Sublattice> for LatticeSection {
    fn from(l: &Sublattice) -> Self {
        LatticeSection {
            ambient_rank: l.ambient_rank(),
            rank: l.rank(),
            basis: rows(&l.basis_vectors()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayLatticeSection {
    pub rank: usize,
    /// Decimal string or "infinite".
    pub index: String,
    pub basis: Vec<Row>,
}

impl RayLatticeSection {
    pub fn new(l: &Sublattice, index: &LatticeIndex) -> Self {
        RayLatticeSection {
            rank: l.rank(),
            index: index.to_string(),
            basis: rows(&l.basis_vectors()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassGroupSection {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDepth {
    pub relation: Row,
    pub depth: Depth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationSection {
    pub policy: SupportPolicy,
    pub level_ranks: Vec<usize>,
    pub generation: GenerationReport,
    pub basis_depths: Vec<RelationDepth>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancySection {
    pub relation: Row,
    pub inclusive: Depth,
    pub exclusive: Depth,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub bound: u32,
    /// A bounded witness was found at the computed depth.
    pub witness_at_depth: Option<bool>,
    /// No bounded witness exists one level lower.
    pub none_below: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSection {
    pub relation: Row,
    pub policy: SupportPolicy,
    pub depth: Depth,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceSection {
    pub ray: usize,
    pub piece: Row,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub relation: Row,
    pub route: DecompositionRoute,
    pub moves: usize,
    pub pieces: Vec<PieceSection>,
    pub checks: DecompositionCheck,
}

impl DecompositionSection {
    pub fn new(d: &Decomposition, checks: DecompositionCheck) -> Self {
        DecompositionSection {
            relation: row(&d.relation),
            route: d.route,
            moves: d.moves,
            pieces: d
                .pieces
                .iter()
                .map(|(ray, p)| PieceSection { ray: *ray, piece: row(p) })
                .collect(),
            checks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationSection {
    pub cone: Vec<usize>,
    pub quotient_rank: usize,
    pub projection: Vec<Row>,
    pub rays: Vec<Row>,
    pub ray_origin: Vec<usize>,
    pub cones: Vec<Vec<usize>>,
    pub relations: LatticeSection,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRecordSection {
    pub relation: Row,
    pub padded: Row,
    pub policy: SupportPolicy,
    pub before: Depth,
    pub after: Depth,
    pub verdict: Verdict,
}

impl From<&DepthRecord> for DepthRecordSection {
    fn from(r: &DepthRecord) -> Self {
        DepthRecordSection {
            relation: row(&r.relation),
            padded: row(&r.padded),
            policy: r.policy,
            before: r.before,
            after: r.after,
            verdict: r.verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSection {
    pub trial: usize,
    pub subdivided_cone: Vec<usize>,
    pub new_ray: Row,
    pub injection: Vec<usize>,
    pub relation_rank_before: usize,
    pub relation_rank_after: usize,
    pub depth_records: Vec<DepthRecordSection>,
}

impl TraceSection {
    pub fn new(t: &SubdivisionTrace) -> Self {
        TraceSection {
            trial: t.trial,
            subdivided_cone: t.subdivided_cone.ray_indices.clone(),
            new_ray: row(&t.new_ray),
            injection: t.injection.clone(),
            relation_rank_before: t.before.num_rays() - fanlat::lattices::ray_lattice(&t.before).sublattice.rank(),
            relation_rank_after: t.after.num_rays() - fanlat::lattices::ray_lattice(&t.after).sublattice.rank(),
            depth_records: t.depth_records.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionSection {
    pub trace: TraceSection,
    pub fan: FanFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedTrial {
    pub trial: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSection {
    pub policy: SupportPolicy,
    pub seed: u64,
    pub trials: usize,
    pub violation_count: usize,
    pub skipped: Vec<SkippedTrial>,
    pub traces: Vec<TraceSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogItem {
    pub name: String,
    pub description: String,
    pub rank: usize,
    pub num_rays: usize,
}
