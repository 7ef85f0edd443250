//! The zero-finding engine: argument-principle subdivision of the search
//! region, per-region rational approximation of the logarithmic derivative,
//! residue filtering, count verification, and optional Newton polishing.
//!
//! Subdivision works on a queue of regions. A region whose zero count
//! exceeds the per-region cap is split in half perpendicular to its longer
//! side; a quadrature failure on an inserted edge (a zero on or near it)
//! discards the affected siblings and re-splits their parent at a seeded,
//! perturbed offset. Accepted regions are then approximated independently:
//! the poles of a continuum AAA fit of f'/f inside the region, with residue
//! close to a positive integer, are the zeros with their multiplicities.
//! Whenever the multiplicities of a region disagree with its argument-
//! principle count, the region is subdivided further and reprocessed.

use crate::aaa::{aaa_continuum, AAAConfig, AAAError, AAAResult};
use crate::function::{EvalCounts, FunctionHandle};
use crate::geometry::{Edge, Rectangle};
use crate::numderiv::DerivConfig;
use crate::quadrature::{count_zeros, ArgPrincipleOutcome, EdgeCache, QuadConfig};
use crate::rational::RationalError;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Retries of a single split with fresh perturbed offsets before giving up.
const MAX_SPLIT_RETRIES: u32 = 64;

/// AAA tolerance floor when the derivative channel is itself approximate.
const DERIVATIVE_FREE_AAA_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("there is a zero on or close to the boundary of the search region: quadrature failed on edge {edge}")]
    BoundaryZero { edge: Edge },
    #[error("argument principle returned the non-integer value {value} on {region}; the function may not be holomorphic there, or the quadrature failed")]
    NonIntegerCount { value: Complex64, region: Rectangle },
    #[error("subdivision depth budget exhausted at {region}: a zero cluster is denser than the per-region cap, or a multiplicity exceeds it")]
    DepthExhausted { region: Rectangle },
    #[error("could not place a zero-free split edge in {region} after {MAX_SPLIT_RETRIES} perturbed offsets")]
    SplitRetriesExhausted { region: Rectangle },
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Approximation(#[from] RationalError),
}

/// Engine tuning knobs.
#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    /// Maximum zero count per accepted region (M).
    pub max_zeros_per_region: u32,
    /// A computed residue must be within this distance of an integer.
    pub residue_tol: f64,
    /// Subdivision depth budget.
    pub max_depth: u32,
    /// Perturbed split offsets are drawn from
    /// `0.5 +/- [perturb_min, perturb_max]`, alternating sign.
    pub perturb_min: f64,
    pub perturb_max: f64,
    /// Seed for every random choice (split perturbations).
    pub seed: u64,
    /// Newton-polish computed zeros against f.
    pub polish: bool,
    /// Worker threads for the approximation stage (1 = sequential).
    pub threads: usize,
    pub aaa: AAAConfig,
    pub quad: QuadConfig,
    /// Used by callers that wrap derivative-free functions.
    pub deriv: DerivConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            max_zeros_per_region: 7,
            residue_tol: 1e-2,
            max_depth: 50,
            perturb_min: 0.01,
            perturb_max: 0.05,
            seed: 0,
            polish: false,
            threads: 1,
            aaa: AAAConfig::default(),
            quad: QuadConfig::default(),
            deriv: DerivConfig::default(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_zeros_per_region < 1 {
            return Err(EngineError::InvalidConfig("max_zeros_per_region must be >= 1"));
        }
        if !(self.residue_tol > 0.0 && self.residue_tol < 0.5) {
            return Err(EngineError::InvalidConfig("residue_tol must lie in (0, 0.5)"));
        }
        if !(self.perturb_min > 0.0 && self.perturb_min <= self.perturb_max && self.perturb_max < 0.5)
        {
            return Err(EngineError::InvalidConfig("perturbation range must satisfy 0 < min <= max < 0.5"));
        }
        if self.max_depth > 60 {
            // tree paths are packed into 64 bits
            return Err(EngineError::InvalidConfig("max_depth must be at most 60"));
        }
        self.quad
            .validate()
            .map_err(EngineError::InvalidConfig)?;
        Ok(())
    }

    fn aaa_config(&self, fh: &FunctionHandle) -> AAAConfig {
        let mut cfg = self.aaa;
        if fh.is_derivative_free() {
            cfg.rel_tol = cfg.rel_tol.max(DERIVATIVE_FREE_AAA_TOL);
        }
        cfg
    }
}

/// Binary position of a region in the subdivision tree; used to derive
/// independent, reproducible perturbation streams per region no matter in
/// which order regions are processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TreePath {
    bits: u64,
    depth: u32,
}

impl TreePath {
    fn root() -> Self {
        Self { bits: 0, depth: 0 }
    }

    fn child(self, right: bool) -> Self {
        Self {
            bits: (self.bits << 1) | (right as u64),
            depth: self.depth + 1,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Split fraction for the `retry`-th attempt at splitting the region at
/// `path`. Attempt zero is the unperturbed midpoint; subsequent attempts
/// draw magnitudes from the seeded per-region stream with alternating sign.
fn split_fraction(cfg: &EngineConfig, path: TreePath, retry: u32) -> f64 {
    if retry == 0 {
        return 0.5;
    }
    let stream = splitmix64(cfg.seed ^ splitmix64(path.bits ^ ((path.depth as u64) << 56)));
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut fraction = 0.5;
    for k in 1..=retry {
        let magnitude = rng.random_range(cfg.perturb_min..=cfg.perturb_max);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        fraction = 0.5 + sign * magnitude;
    }
    fraction
}

/// A node of the subdivision tree.
#[derive(Debug, Clone)]
pub struct RegionNode {
    pub rect: Rectangle,
    /// Argument-principle count, once computed.
    pub count: Option<u32>,
    pub parent: Option<usize>,
    pub sibling: Option<usize>,
    pub children: Option<(usize, usize)>,
    /// The edge inserted by the split that created this node, shared with
    /// the sibling (which traverses it with the opposite sign).
    pub inserted_edge: Option<Edge>,
    pub depth: u32,
    /// False once the node was discarded by a perturbed re-split.
    pub alive: bool,
    /// True when the node's count is at most the per-region cap.
    pub accepted: bool,
    path: TreePath,
}

/// Full subdivision tree produced by [`subdivide`].
#[derive(Debug, Clone)]
pub struct RegionTree {
    pub nodes: Vec<RegionNode>,
}

impl RegionTree {
    /// Indices of live accepted regions.
    pub fn accepted(&self) -> impl Iterator<Item = &RegionNode> {
        self.nodes.iter().filter(|n| n.alive && n.accepted)
    }

    pub fn root_count(&self) -> Option<u32> {
        self.nodes.first().and_then(|n| n.count)
    }
}

/// Implements the subdivision algorithm: breadth-first queue, argument-
/// principle count per region, splits while the count exceeds the cap, and
/// perturbed re-splits of the parent when quadrature fails on an edge.
pub fn subdivide(
    fh: &FunctionHandle,
    omega: Rectangle,
    cfg: &EngineConfig,
) -> Result<RegionTree, EngineError> {
    cfg.validate()?;
    subdivide_with_cache(fh, omega, cfg, &EdgeCache::new())
}

fn subdivide_with_cache(
    fh: &FunctionHandle,
    omega: Rectangle,
    cfg: &EngineConfig,
    cache: &EdgeCache,
) -> Result<RegionTree, EngineError> {
    let mut nodes = vec![RegionNode {
        rect: omega,
        count: None,
        parent: None,
        sibling: None,
        children: None,
        inserted_edge: None,
        depth: 0,
        alive: true,
        accepted: false,
        path: TreePath::root(),
    }];
    let mut retries: Vec<u32> = vec![0];
    let mut queue = std::collections::VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        if !nodes[i].alive {
            continue;
        }
        match count_zeros(fh, &nodes[i].rect, &cfg.quad, cache) {
            ArgPrincipleOutcome::QuadratureFailure(edge) => {
                let Some(parent) = nodes[i].parent else {
                    return Err(EngineError::BoundaryZero { edge });
                };
                // Discard the failed region and any sibling work derived
                // from the same split, then re-split the parent with a
                // fresh perturbed offset.
                prune_children(&mut nodes, parent);
                retries[parent] += 1;
                if retries[parent] > MAX_SPLIT_RETRIES {
                    return Err(EngineError::SplitRetriesExhausted {
                        region: nodes[parent].rect,
                    });
                }
                let fraction = split_fraction(cfg, nodes[parent].path, retries[parent]);
                push_children(&mut nodes, &mut retries, &mut queue, parent, fraction);
            }
            ArgPrincipleOutcome::NonInteger(value) => {
                return Err(EngineError::NonIntegerCount {
                    value,
                    region: nodes[i].rect,
                });
            }
            ArgPrincipleOutcome::Integer(n) => {
                nodes[i].count = Some(n);
                if n <= cfg.max_zeros_per_region {
                    nodes[i].accepted = true;
                } else {
                    if nodes[i].depth >= cfg.max_depth {
                        return Err(EngineError::DepthExhausted {
                            region: nodes[i].rect,
                        });
                    }
                    push_children(&mut nodes, &mut retries, &mut queue, i, 0.5);
                }
            }
        }
    }

    Ok(RegionTree { nodes })
}

fn prune_children(nodes: &mut [RegionNode], parent: usize) {
    let mut stack: Vec<usize> = match nodes[parent].children {
        Some((a, b)) => vec![a, b],
        None => return,
    };
    while let Some(i) = stack.pop() {
        nodes[i].alive = false;
        nodes[i].accepted = false;
        if let Some((a, b)) = nodes[i].children {
            stack.push(a);
            stack.push(b);
        }
    }
}

fn push_children(
    nodes: &mut Vec<RegionNode>,
    retries: &mut Vec<u32>,
    queue: &mut std::collections::VecDeque<usize>,
    parent: usize,
    fraction: f64,
) {
    let (first, second, edge) = nodes[parent].rect.split(fraction);
    let depth = nodes[parent].depth + 1;
    let path = nodes[parent].path;
    let ia = nodes.len();
    let ib = ia + 1;
    for (rect, idx, sibling, right) in [(first, ia, ib, false), (second, ib, ia, true)] {
        nodes.push(RegionNode {
            rect,
            count: None,
            parent: Some(parent),
            sibling: Some(sibling),
            children: None,
            inserted_edge: Some(edge),
            depth,
            alive: true,
            accepted: false,
            path: path.child(right),
        });
        retries.push(0);
        let _ = idx;
    }
    nodes[parent].children = Some((ia, ib));
    queue.push_back(ia);
    queue.push_back(ib);
}

/// Whether the record is a zero of f or (in manual pole scans) a pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Zero,
    Pole,
}

/// A located zero (or pole) with its multiplicity.
#[derive(Debug, Clone, Copy)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub multiplicity: u32,
    /// Residue of the rational approximation of f'/f at the pole; close to
    /// +multiplicity for zeros and -multiplicity for poles.
    pub raw_residue: Complex64,
    /// Index into [`RunReport::regions`] of the region that produced it.
    pub region: usize,
    /// True when Newton polishing was applied and kept.
    pub refined: bool,
    pub kind: RecordKind,
}

/// Per-region summary in a [`RunReport`].
#[derive(Debug, Clone, Copy)]
pub struct RegionReport {
    pub rect: Rectangle,
    /// Argument-principle count (absent in manual pole scans).
    pub count: Option<u32>,
    /// Degree of the AAA approximation used on this region, when one ran.
    pub aaa_degree: Option<usize>,
    /// Whether that AAA run converged to its tolerance.
    pub aaa_converged: Option<bool>,
    pub depth: u32,
}

/// Bookkeeping of a completed run.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Argument-principle count of the whole search region (absent in
    /// manual pole scans).
    pub root_count: Option<u32>,
    /// Sum of multiplicities over all records.
    pub total_multiplicity: u32,
    /// Final leaf regions, sorted by rectangle coordinates.
    pub regions: Vec<RegionReport>,
    pub evaluations: EvalCounts,
}

struct RawRecord {
    location: Complex64,
    multiplicity: u32,
    residue: Complex64,
    refined: bool,
    kind: RecordKind,
    region_rect: Rectangle,
}

/// Finds all zeros of f (with multiplicities) inside `omega`.
pub fn find_zeros(
    fh: &FunctionHandle,
    omega: Rectangle,
    cfg: &EngineConfig,
) -> Result<(Vec<ZeroRecord>, RunReport), EngineError> {
    cfg.validate()?;
    let start_counts = fh.eval_counts();
    let cache = EdgeCache::new();
    let tree = subdivide_with_cache(fh, omega, cfg, &cache)?;
    let root_count = tree.root_count();

    let mut work: Vec<(Rectangle, u32, u32, TreePath)> = Vec::new();
    let mut reports: Vec<RegionReport> = Vec::new();
    for node in tree.accepted() {
        let count = node.count.expect("accepted regions have counts");
        if count > 0 {
            work.push((node.rect, count, node.depth, node.path));
        } else {
            reports.push(RegionReport {
                rect: node.rect,
                count: Some(0),
                aaa_degree: None,
                aaa_converged: None,
                depth: node.depth,
            });
        }
    }

    let outcomes = run_region_tasks(cfg, work, |(rect, count, depth, path)| {
        process_region(fh, rect, count, depth, path, cfg, &cache)
    })?;

    let mut raw: Vec<RawRecord> = Vec::new();
    for (records, regs) in outcomes {
        raw.extend(records);
        reports.extend(regs);
    }
    let (mut records, report) = assemble(raw, reports, root_count, fh.eval_counts().since(start_counts));
    sort_records(&mut records);
    Ok((records, report))
}

/// Runs region tasks sequentially or on a dedicated thread pool.
type RegionOutcome = (Vec<RawRecord>, Vec<RegionReport>);

fn run_region_tasks<W, F>(
    cfg: &EngineConfig,
    work: Vec<W>,
    task: F,
) -> Result<Vec<RegionOutcome>, EngineError>
where
    W: Send,
    F: Fn(W) -> Result<RegionOutcome, EngineError> + Send + Sync,
{
    if cfg.threads == 1 || work.len() <= 1 {
        work.into_iter().map(task).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|_| EngineError::InvalidConfig("failed to build thread pool"))?;
        pool.install(|| {
            use rayon::prelude::*;
            work.into_par_iter().map(&task).collect()
        })
    }
}

/// Approximation stage for one region with a positive count, recursing into
/// children whenever the residue-filtered multiplicities disagree with the
/// argument principle.
fn process_region(
    fh: &FunctionHandle,
    rect: Rectangle,
    count: u32,
    depth: u32,
    path: TreePath,
    cfg: &EngineConfig,
    cache: &EdgeCache,
) -> Result<RegionOutcome, EngineError> {
    debug_assert!(count > 0);
    match aaa_continuum(|z| fh.log_derivative(z), &rect.boundary(), &cfg.aaa_config(fh)) {
        Ok(res) => {
            let accepted = accepted_zero_poles(&res, rect, cfg)?;
            let total: u32 = accepted.iter().map(|r| r.multiplicity).sum();
            if total == count {
                let records = accepted
                    .into_iter()
                    .map(|mut r| {
                        if cfg.polish {
                            if let Some(better) = newton_polish(fh, r.location, &rect) {
                                r.location = better;
                                r.refined = true;
                            }
                        }
                        r
                    })
                    .collect();
                let report = RegionReport {
                    rect,
                    count: Some(count),
                    aaa_degree: Some(res.approximation.degree()),
                    aaa_converged: Some(res.converged),
                    depth,
                };
                return Ok((records, vec![report]));
            }
            // wrong number of zeros: the approximation is not trusted here
            resplit_and_recurse(fh, rect, depth, path, cfg, cache)
        }
        // a singular sample means a zero sits on this region's boundary;
        // re-splitting with a perturbed edge relocates it
        Err(AAAError::NonFiniteValue { .. }) => {
            resplit_and_recurse(fh, rect, depth, path, cfg, cache)
        }
        Err(AAAError::Rational(e)) => Err(EngineError::Approximation(e)),
        Err(AAAError::TooFewPoints) => unreachable!("continuum AAA bootstraps its own samples"),
    }
}

/// Poles of the fitted approximation that lie inside the region and carry a
/// residue within tolerance of a positive integer.
fn accepted_zero_poles(
    res: &AAAResult,
    rect: Rectangle,
    cfg: &EngineConfig,
) -> Result<Vec<RawRecord>, EngineError> {
    let poles = res.approximation.poles()?;
    let mut out = Vec::new();
    for pole in poles {
        if !rect.contains(pole.location) {
            continue;
        }
        let nearest = pole.residue.re.round();
        if nearest >= 1.0 && (pole.residue - nearest).norm() <= cfg.residue_tol {
            out.push(RawRecord {
                location: pole.location,
                multiplicity: nearest as u32,
                residue: pole.residue,
                refined: false,
                kind: RecordKind::Zero,
                region_rect: rect,
            });
        }
    }
    Ok(out)
}

fn resplit_and_recurse(
    fh: &FunctionHandle,
    rect: Rectangle,
    depth: u32,
    path: TreePath,
    cfg: &EngineConfig,
    cache: &EdgeCache,
) -> Result<RegionOutcome, EngineError> {
    if depth >= cfg.max_depth {
        return Err(EngineError::DepthExhausted { region: rect });
    }
    'retry: for retry in 0..=MAX_SPLIT_RETRIES {
        let fraction = split_fraction(cfg, path, retry);
        let (first, second, _) = rect.split(fraction);
        let mut counted = [(first, 0u32), (second, 0u32)];
        for (child, n) in counted.iter_mut() {
            match count_zeros(fh, child, &cfg.quad, cache) {
                ArgPrincipleOutcome::Integer(c) => *n = c,
                ArgPrincipleOutcome::QuadratureFailure(_) => continue 'retry,
                ArgPrincipleOutcome::NonInteger(value) => {
                    return Err(EngineError::NonIntegerCount {
                        value,
                        region: *child,
                    });
                }
            }
        }
        let mut records = Vec::new();
        let mut reports = Vec::new();
        for (bit, (child, n)) in counted.into_iter().enumerate() {
            if n == 0 {
                reports.push(RegionReport {
                    rect: child,
                    count: Some(0),
                    aaa_degree: None,
                    aaa_converged: None,
                    depth: depth + 1,
                });
                continue;
            }
            let (r, rep) =
                process_region(fh, child, n, depth + 1, path.child(bit == 1), cfg, cache)?;
            records.extend(r);
            reports.extend(rep);
        }
        return Ok((records, reports));
    }
    Err(EngineError::SplitRetriesExhausted { region: rect })
}

/// Newton iteration on f from a computed zero. Returns the refined point
/// only if it stays inside the region and does not increase |f|.
fn newton_polish(fh: &FunctionHandle, z0: Complex64, rect: &Rectangle) -> Option<Complex64> {
    let scale = rect.diameter();
    let f0 = fh.f(z0).norm();
    let mut z = z0;
    for _ in 0..20 {
        let step = fh.f(z) / fh.fprime(z);
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if !rect.contains(z) {
            return None;
        }
        if step.norm() <= 1e-15 * scale {
            break;
        }
    }
    (fh.f(z).norm() <= f0).then_some(z)
}

fn sort_records(records: &mut [ZeroRecord]) {
    records.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .expect("zero locations are finite")
    });
}

/// Attaches region indices and produces the final report. Regions are
/// sorted by rectangle coordinates so output is independent of the order in
/// which parallel tasks finished.
fn assemble(
    raw: Vec<RawRecord>,
    mut reports: Vec<RegionReport>,
    root_count: Option<u32>,
    evaluations: EvalCounts,
) -> (Vec<ZeroRecord>, RunReport) {
    reports.sort_by(|a, b| {
        (a.rect.re_min, a.rect.im_min, a.rect.re_max, a.rect.im_max)
            .partial_cmp(&(b.rect.re_min, b.rect.im_min, b.rect.re_max, b.rect.im_max))
            .expect("rectangle coordinates are finite")
    });
    let index_of = |rect: &Rectangle| -> usize {
        reports
            .iter()
            .position(|r| r.rect == *rect)
            .expect("every record belongs to a reported region")
    };
    let records: Vec<ZeroRecord> = raw
        .into_iter()
        .map(|r| ZeroRecord {
            location: r.location,
            multiplicity: r.multiplicity,
            raw_residue: r.residue,
            region: index_of(&r.region_rect),
            refined: r.refined,
            kind: r.kind,
        })
        .collect();
    let total = records.iter().map(|r| r.multiplicity).sum();
    let report = RunReport {
        root_count,
        total_multiplicity: total,
        regions: reports,
        evaluations,
    };
    (records, report)
}

/// Pole/zero scan with manually specified subdivision.
///
/// Splits the region uniformly `depth` times (no argument-principle gating:
/// for meromorphic f the count is zeros minus poles, which cannot drive
/// subdivision), then applies the AAA stage to each piece. Residues near
/// negative integers are reported as poles, near positive integers as
/// zeros; there is no count verification. Per-region approximation
/// failures are recorded in the report rather than aborting the scan.
pub fn find_poles_manual(
    fh: &FunctionHandle,
    omega: Rectangle,
    depth: u32,
    cfg: &EngineConfig,
) -> Result<(Vec<ZeroRecord>, RunReport), EngineError> {
    cfg.validate()?;
    if depth > 30 {
        // 2^depth regions; anything beyond this is a typo, not a scan
        return Err(EngineError::InvalidConfig("manual subdivision depth must be at most 30"));
    }
    let start_counts = fh.eval_counts();

    let mut rects = vec![omega];
    for _ in 0..depth {
        rects = rects
            .into_iter()
            .flat_map(|r| {
                let (a, b, _) = r.split(0.5);
                [a, b]
            })
            .collect();
    }

    let outcomes = run_region_tasks(cfg, rects, |rect| {
        let (records, report) = scan_region(fh, rect, depth, cfg);
        Ok((records, vec![report]))
    })?;

    let mut raw = Vec::new();
    let mut reports = Vec::new();
    for (records, regs) in outcomes {
        raw.extend(records);
        reports.extend(regs);
    }
    let (mut records, report) = assemble(raw, reports, None, fh.eval_counts().since(start_counts));
    sort_records(&mut records);
    // With closed containment a pole sitting exactly on a shared grid edge
    // is claimed by both adjacent regions; keep the better-resolved copy.
    // (The automatic engine never needs this: its subdivision guarantees
    // zero-free edges, and count verification would catch a duplicate.)
    dedupe_boundary_records(&mut records, 1e-9 * omega.diameter());
    sort_records(&mut records);
    Ok((records, report))
}

/// Removes records of the same kind that agree to within `tol`, keeping the
/// copy whose residue sits closest to its integer.
fn dedupe_boundary_records(records: &mut Vec<ZeroRecord>, tol: f64) {
    let mut kept: Vec<ZeroRecord> = Vec::with_capacity(records.len());
    for r in records.iter() {
        match kept.iter_mut().find(|k| {
            k.kind == r.kind && (k.location - r.location).norm() <= tol
        }) {
            Some(k) => {
                let k_err = (k.raw_residue - k.raw_residue.re.round()).norm();
                let r_err = (r.raw_residue - r.raw_residue.re.round()).norm();
                if r_err < k_err {
                    *k = *r;
                }
            }
            None => kept.push(*r),
        }
    }
    *records = kept;
}

fn scan_region(
    fh: &FunctionHandle,
    rect: Rectangle,
    depth: u32,
    cfg: &EngineConfig,
) -> (Vec<RawRecord>, RegionReport) {
    // A pole or zero exactly on this region's (fixed) boundary makes a
    // sample non-finite. Unlike the automatic engine the manual grid cannot
    // be perturbed, but changing the bootstrap sample count moves every
    // subsequent sample parameter off the singular point.
    let mut aaa_cfg = cfg.aaa_config(fh);
    let mut outcome = aaa_continuum(|z| fh.log_derivative(z), &rect.boundary(), &aaa_cfg);
    for retry_init in [17, 19, 23] {
        if !matches!(outcome, Err(AAAError::NonFiniteValue { .. })) {
            break;
        }
        aaa_cfg.init_samples = retry_init;
        outcome = aaa_continuum(|z| fh.log_derivative(z), &rect.boundary(), &aaa_cfg);
    }
    match outcome {
        Ok(res) => {
            // Per-region failures are reported, not fatal: a pole-extraction
            // failure leaves the region marked unconverged with no records.
            let Ok(poles) = res.approximation.poles() else {
                return (
                    Vec::new(),
                    RegionReport {
                        rect,
                        count: None,
                        aaa_degree: Some(res.approximation.degree()),
                        aaa_converged: Some(false),
                        depth,
                    },
                );
            };
            let mut records = Vec::new();
            // A pole sitting exactly on a grid line is computed a rounding
            // error to either side, so containment is widened by a hair;
            // double claims from the two neighbors are deduplicated later.
            let slack = 1e-9 * rect.diameter();
            for pole in poles {
                let inside = pole.location.re >= rect.re_min - slack
                    && pole.location.re <= rect.re_max + slack
                    && pole.location.im >= rect.im_min - slack
                    && pole.location.im <= rect.im_max + slack;
                if !inside {
                    continue;
                }
                let nearest = pole.residue.re.round();
                if nearest.abs() >= 1.0 && (pole.residue - nearest).norm() <= cfg.residue_tol {
                    records.push(RawRecord {
                        location: pole.location,
                        multiplicity: nearest.abs() as u32,
                        residue: pole.residue,
                        refined: false,
                        kind: if nearest >= 1.0 {
                            RecordKind::Zero
                        } else {
                            RecordKind::Pole
                        },
                        region_rect: rect,
                    });
                }
            }
            let report = RegionReport {
                rect,
                count: None,
                aaa_degree: Some(res.approximation.degree()),
                aaa_converged: Some(res.converged),
                depth,
            };
            (records, report)
        }
        Err(_) => (
            Vec::new(),
            RegionReport {
                rect,
                count: None,
                aaa_degree: None,
                aaa_converged: Some(false),
                depth,
            },
        ),
    }
}
