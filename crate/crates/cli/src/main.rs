//! `fanlat` command-line tool.

mod oracle;
mod report;

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fanlat::filtration::{self, FiltrationError};
use fanlat::io::{FanFile, FanFileError};
use fanlat::lattices::{self, LatticeError};
use fanlat::refine::{self, RefineError};
use fanlat::{corpus, Fan, FanError, IntVector, SupportPolicy};
use num_bigint::BigInt;

use report::*;

#[derive(Parser)]
#[command(name = "fanlat", version, about = "Exact lattice invariants of rational fans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Skip pairwise-intersection validation (required for non-simplicial fans).
    #[arg(long, global = true)]
    trust: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Inclusive,
    Exclusive,
    Both,
}

impl PolicyArg {
    fn policies(self) -> Vec<SupportPolicy> {
        match self {
            PolicyArg::Inclusive => vec![SupportPolicy::Inclusive],
            PolicyArg::Exclusive => vec![SupportPolicy::Exclusive],
            PolicyArg::Both => SupportPolicy::ALL.to_vec(),
        }
    }
}

/// FAN is a path to a fan JSON file, or `catalog:<name>`.
#[derive(Subcommand)]
enum Command {
    /// Check that a fan file describes a valid fan.
    Validate { fan: String },
    /// Lattices, class group, completeness, filtration and depths.
    Report {
        fan: String,
        #[arg(long, value_enum, default_value = "both")]
        policy: PolicyArg,
    },
    /// HNF basis of the relation lattice.
    Relations { fan: String },
    /// Filtration level ranks and the generation check.
    Filtration {
        fan: String,
        #[arg(long, value_enum, default_value = "inclusive")]
        policy: PolicyArg,
    },
    /// Filtration depth of a relation (default: each basis relation).
    Depth {
        fan: String,
        #[arg(long, allow_hyphen_values = true)]
        relation: Option<String>,
        #[arg(long, value_enum, default_value = "inclusive")]
        policy: PolicyArg,
        /// Confirm each depth by brute force with coefficients in [-B, B].
        #[arg(long, value_name = "B")]
        max_coeff: Option<u32>,
    },
    /// Split a relation into star-local pieces (default: each basis relation).
    Decompose {
        fan: String,
        #[arg(long, allow_hyphen_values = true)]
        relation: Option<String>,
    },
    /// Quotient fan of the star of a cone.
    Localize {
        fan: String,
        #[arg(long)]
        cone: String,
    },
    /// Stellar subdivision at a ray through the interior of a cone.
    Subdivide {
        fan: String,
        #[arg(long)]
        cone: String,
        #[arg(long, allow_hyphen_values = true)]
        ray: String,
        #[arg(long, value_enum, default_value = "inclusive")]
        policy: PolicyArg,
        /// Write the subdivided fan here.
        #[arg(long)]
        fan_out: Option<PathBuf>,
    },
    /// Random stellar subdivisions, comparing depths before and after.
    Conjecture {
        fan: String,
        #[arg(long, value_enum, default_value = "inclusive")]
        policy: PolicyArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Class group of the rays.
    Classgroup { fan: String },
    /// Built-in example fans.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print a catalog fan as a fan file.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    /// Unreadable or malformed input.
    Parse(String),
    /// Well-formed input that fails a check.
    Semantic(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Semantic(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) | Failure::Semantic(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<FanError> for Failure {
    fn from(e: FanError) -> Self {
        match e {
            FanError::WrongLength { .. } | FanError::RayIndexOutOfRange { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

impl From<FanFileError> for Failure {
    fn from(e: FanFileError) -> Self {
        if e.is_shape_error() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Semantic(e.to_string())
        }
    }
}

impl From<FiltrationError> for Failure {
    fn from(e: FiltrationError) -> Self {
        match e {
            FiltrationError::RoutingFailure(_) => Failure::Internal(e.to_string()),
            FiltrationError::Fan(f) => f.into(),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Fan(f) => f.into(),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

impl From<RefineError> for Failure {
    fn from(e: RefineError) -> Self {
        match e {
            RefineError::Fan(f) => f.into(),
            RefineError::Filtration(f) => f.into(),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

fn read_fan_file(spec: &str) -> Result<FanFile, Failure> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        let entry = corpus::entry(name).ok_or_else(|| Failure::Parse(format!("unknown catalog fan `{name}`")))?;
        return Ok(FanFile::from_fan(&entry.fan));
    }
    let text = fs::read_to_string(spec).map_err(|e| Failure::Parse(format!("cannot read {spec}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{spec}: {e}")))
}

fn load_fan(spec: &str, trust: bool) -> Result<Fan, Failure> {
    Ok(read_fan_file(spec)?.to_fan(trust)?)
}

fn parse_ints(s: &str, what: &str) -> Result<IntVector, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Parse(format!("{what} must be a comma-separated integer list, got `{s}`")))
}

fn parse_indices(s: &str) -> Result<Vec<usize>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Parse(format!("cone must be a comma-separated list of ray indices, got `{s}`")))
}

fn relations_or_basis(fan: &Fan, relation: Option<&str>) -> Result<Vec<IntVector>, Failure> {
    match relation {
        Some(s) => Ok(vec![parse_ints(s, "relation")?]),
        None => Ok(lattices::rel_lattice(fan).sublattice.basis_vectors()),
    }
}

fn fan_label(spec: &str, fan: &Fan) -> String {
    fan.name().map(str::to_string).unwrap_or_else(|| spec.to_string())
}

fn filtration_section(fan: &Fan, policy: SupportPolicy) -> Result<FiltrationSection, Failure> {
    let profile = filtration::filtration(fan, policy)?;
    let generation = filtration::check_generation(fan, policy)?;
    let basis_depths = profile
        .relations
        .basis_vectors()
        .iter()
        .map(|r| {
            Ok(RelationDepth {
                relation: row(r),
                depth: profile.depth_of(r)?,
            })
        })
        .collect::<Result<_, FiltrationError>>()?;
    Ok(FiltrationSection {
        policy,
        level_ranks: profile.level_ranks(),
        generation,
        basis_depths,
    })
}

fn class_group_section(fan: &Fan) -> Option<ClassGroupSection> {
    lattices::class_group(fan).ok().map(|c| ClassGroupSection {
        free_rank: c.free_rank,
        torsion: c.torsion.iter().map(ToString::to_string).collect(),
    })
}

fn cmd_validate(spec: &str, trust: bool, report: &mut Report) -> Result<(), Failure> {
    let file = read_fan_file(spec)?;
    match file.to_fan(trust) {
        Ok(fan) => {
            report.fan = Some(fan_label(spec, &fan));
            report.validation = Some(ValidationSection {
                valid: true,
                status: Some(format!("{:?}", fan.validation()).to_lowercase()),
                findings: fan.findings().to_vec(),
                num_rays: Some(fan.num_rays()),
                num_cones: Some(fan.cones().len()),
                simplicial: Some(fan.is_simplicial()),
            });
            Ok(())
        }
        Err(e) if e.is_shape_error() => Err(e.into()),
        Err(e) => {
            report.validation = Some(ValidationSection {
                valid: false,
                status: None,
                findings: vec![e.to_string()],
                num_rays: None,
                num_cones: None,
                simplicial: None,
            });
            Err(Failure::Semantic(format!("invalid fan: {e}")))
        }
    }
}

fn cmd_report(fan: &Fan, policy: PolicyArg, report: &mut Report) -> Result<(), Failure> {
    let ray = lattices::ray_lattice(fan);
    report.ray_lattice = Some(RayLatticeSection::new(&ray.sublattice, &ray.index));
    let rel = lattices::rel_lattice(fan);
    report.relations = Some((&rel.sublattice).into());
    report.class_group = class_group_section(fan);
    report.complete = fan.is_complete().ok();
    for p in policy.policies() {
        report.filtrations.push(filtration_section(fan, p)?);
    }
    if policy == PolicyArg::Both {
        let found = filtration::policy_discrepancies(fan, &rel.sublattice.basis_vectors())?;
        report.discrepancies = Some(
            found
                .into_iter()
                .map(|d| DiscrepancySection {
                    note: format!(
                        "depth depends on whether the star support keeps the rays of the cone: {} when kept, {} when removed",
                        d.inclusive, d.exclusive
                    ),
                    relation: row(&d.relation),
                    inclusive: d.inclusive,
                    exclusive: d.exclusive,
                })
                .collect(),
        );
    }
    Ok(())
}

fn cmd_depth(
    fan: &Fan,
    relation: Option<&str>,
    policy: PolicyArg,
    max_coeff: Option<u32>,
    report: &mut Report,
) -> Result<(), Failure> {
    let relations = relations_or_basis(fan, relation)?;
    let mut breach = None;
    for p in policy.policies() {
        let profile = filtration::filtration(fan, p)?;
        for r in &relations {
            filtration::check_relation(fan, r)?;
            let depth = profile.depth_of(r)?;
            let oracle = max_coeff.map(|b| oracle::confirm_depth(fan, p, r, depth, b));
            if oracle.as_ref().and_then(|o| o.none_below) == Some(false) {
                breach = Some(format!(
                    "brute force found {p} witness for {:?} below computed depth {depth}",
                    row(r)
                ));
            }
            report.depths.push(DepthSection {
                relation: row(r),
                policy: p,
                depth,
                oracle,
            });
        }
    }
    breach.map_or(Ok(()), |m| Err(Failure::Internal(m)))
}

fn cmd_decompose(fan: &Fan, relation: Option<&str>, report: &mut Report) -> Result<(), Failure> {
    for r in relations_or_basis(fan, relation)? {
        let d = filtration::local_decompose(fan, &r)?;
        let checks = d.check(fan)?;
        report.decompositions.push(DecompositionSection::new(&d, checks));
    }
    Ok(())
}

fn cmd_localize(fan: &Fan, cone: &str, report: &mut Report) -> Result<(), Failure> {
    let tau = fan.cone(&parse_indices(cone)?)?.clone();
    let q = fan.localize(&tau)?;
    let rel = lattices::rel_lattice_localized(fan, &tau)?;
    report.localization = Some(LocalizationSection {
        cone: tau.ray_indices.clone(),
        quotient_rank: q.quotient_rank,
        projection: matrix_rows(&q.projection),
        rays: rows(&q.rays),
        ray_origin: q.ray_origin.clone(),
        cones: q.cones.clone(),
        relations: (&rel.sublattice).into(),
        warnings: q.warnings.clone(),
    });
    Ok(())
}

fn cmd_subdivide(
    fan: &Fan,
    cone: &str,
    ray: &str,
    policy: PolicyArg,
    fan_out: Option<&Path>,
    report: &mut Report,
) -> Result<(), Failure> {
    let sigma = fan.cone(&parse_indices(cone)?)?.clone();
    let w = parse_ints(ray, "ray")?;
    let mut section: Option<TraceSection> = None;
    let mut after = None;
    for p in policy.policies() {
        let trace = refine::trace_subdivision(fan, &sigma, &w, p, 0)?;
        match &mut section {
            None => section = Some(TraceSection::new(&trace)),
            Some(s) => s.depth_records.extend(trace.depth_records.iter().map(Into::into)),
        }
        after = Some(trace.after);
    }
    let after = after.expect("at least one policy");
    let file = FanFile::from_fan(&after);
    if let Some(path) = fan_out {
        write_json(path, &file)?;
    }
    report.subdivision = Some(SubdivisionSection {
        trace: section.expect("at least one policy"),
        fan: file,
    });
    Ok(())
}

fn cmd_conjecture(fan: &Fan, policy: PolicyArg, trials: usize, seed: u64, report: &mut Report) -> Result<(), Failure> {
    let mut violations = 0;
    for p in policy.policies() {
        let scan = refine::conjecture_scan(fan, p, trials, seed);
        violations += scan.violation_count();
        report.scans.push(ScanSection {
            policy: p,
            seed,
            trials,
            violation_count: scan.violation_count(),
            skipped: scan
                .skipped
                .iter()
                .map(|(trial, reason)| SkippedTrial {
                    trial: *trial,
                    reason: reason.clone(),
                })
                .collect(),
            traces: scan.traces.iter().map(TraceSection::new).collect(),
        });
    }
    if violations > 0 {
        return Err(Failure::Semantic(format!(
            "{violations} depth record(s) rose after subdivision"
        )));
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display())))
}

fn with_fan<F>(spec: &str, trust: bool, report: &mut Report, f: F) -> Result<(), Failure>
where
    F: FnOnce(&Fan, &mut Report) -> Result<(), Failure>,
{
    let fan = load_fan(spec, trust)?;
    report.fan = Some(fan_label(spec, &fan));
    f(&fan, report)
}

fn run(cli: &Cli, report: &mut Report) -> Result<(), Failure> {
    let trust = cli.trust;
    match &cli.command {
        Command::Validate { fan } => cmd_validate(fan, trust, report),
        Command::Report { fan, policy } => with_fan(fan, trust, report, |f, r| cmd_report(f, *policy, r)),
        Command::Relations { fan } => with_fan(fan, trust, report, |f, r| {
            r.relations = Some((&lattices::rel_lattice(f).sublattice).into());
            Ok(())
        }),
        Command::Filtration { fan, policy } => with_fan(fan, trust, report, |f, r| {
            for p in policy.policies() {
                r.filtrations.push(filtration_section(f, p)?);
            }
            Ok(())
        }),
        Command::Depth {
            fan,
            relation,
            policy,
            max_coeff,
        } => with_fan(fan, trust, report, |f, r| {
            cmd_depth(f, relation.as_deref(), *policy, *max_coeff, r)
        }),
        Command::Decompose { fan, relation } => {
            with_fan(fan, trust, report, |f, r| cmd_decompose(f, relation.as_deref(), r))
        }
        Command::Localize { fan, cone } => with_fan(fan, trust, report, |f, r| cmd_localize(f, cone, r)),
        Command::Subdivide {
            fan,
            cone,
            ray,
            policy,
            fan_out,
        } => with_fan(fan, trust, report, |f, r| {
            cmd_subdivide(f, cone, ray, *policy, fan_out.as_deref(), r)
        }),
        Command::Conjecture {
            fan,
            policy,
            trials,
            seed,
        } => with_fan(fan, trust, report, |f, r| cmd_conjecture(f, *policy, *trials, *seed, r)),
        Command::Classgroup { fan } => with_fan(fan, trust, report, |f, r| {
            let lattice = lattices::ray_lattice(f);
            r.ray_lattice = Some(RayLatticeSection::new(&lattice.sublattice, &lattice.index));
            r.class_group = class_group_section(f);
            Ok(())
        }),
        Command::Catalog { .. } => unreachable!("handled before reporting"),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Report { .. } => "report",
        Command::Relations { .. } => "relations",
        Command::Filtration { .. } => "filtration",
        Command::Depth { .. } => "depth",
        Command::Decompose { .. } => "decompose",
        Command::Localize { .. } => "localize",
        Command::Subdivide { .. } => "subdivide",
        Command::Conjecture { .. } => "conjecture",
        Command::Classgroup { .. } => "classgroup",
        Command::Catalog { .. } => "catalog",
    }
}

fn catalog(action: &CatalogAction, json: Option<&Path>) -> Result<(), Failure> {
    match action {
        CatalogAction::List => {
            let mut report = Report::new("catalog", None);
            report.catalog = corpus::catalog()
                .into_iter()
                .map(|e| CatalogItem {
                    name: e.name.to_string(),
                    description: e.description.to_string(),
                    rank: e.fan.rank(),
                    num_rays: e.fan.num_rays(),
                })
                .collect();
            print_json(&report)?;
            if let Some(path) = json {
                write_json(path, &report)?;
            }
            Ok(())
        }
        CatalogAction::Export { name, out } => {
            let entry = corpus::entry(name).ok_or_else(|| Failure::Parse(format!("unknown catalog fan `{name}`")))?;
            let file = FanFile::from_fan(&entry.fan);
            match out {
                Some(path) => write_json(path, &file),
                None => print_json(&file),
            }
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Internal(e.to_string())),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Catalog { action } = &cli.command {
        return match catalog(action, cli.json.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        };
    }

    let mut report = Report::new(command_name(&cli.command), None);
    let outcome = run(&cli, &mut report);
    let code = match &outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            report.error = Some(ErrorSection {
                exit_code: i32::from(e.exit_code()),
                message: e.to_string(),
            });
            e.exit_code()
        }
    };
    let written = print_json(&report).and_then(|()| match &cli.json {
        Some(path) => write_json(path, &report),
        None => Ok(()),
    });
    match written {
        Ok(()) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
