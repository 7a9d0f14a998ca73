//! Machine checks for the Hardy conditions and KCBS quantities: quantum-side
//! audits of a measurement family against its graph, and the exhaustive
//! classical side over deterministic exclusivity-respecting assignments.

use crate::construction::{decompose_state, MeasurementFamily};
use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_EXHAUSTIVE_VERTICES};

/// Outcome of the edge-orthogonality audit.
#[derive(Clone, Debug)]
pub struct OrthogonalityAudit {
    pub passed: bool,
    /// Largest |<v_i|v_j>| over edges, with the offending edge.
    pub worst_edge_overlap: f64,
    pub worst_edge: Option<(u32, u32)>,
    /// Smallest |<v_i|v_j>| over non-edges (diagnostic: the graph demands
    /// nothing here, but vanishing values flag an over-orthogonal family).
    pub min_nonedge_overlap: f64,
    pub min_nonedge: Option<(u32, u32)>,
    /// Every edge overlap, sorted worst-first then by edge.
    pub edge_overlaps: Vec<((u32, u32), f64)>,
}

/// Checks that adjacent vertices carry orthogonal vectors to within `tol`.
pub fn audit_orthogonality(
    graph: &Graph,
    family: &MeasurementFamily,
    tol: f64,
) -> Result<OrthogonalityAudit> {
    if graph.n() != family.n() {
        return Err(Error::GraphFamilyMismatch {
            graph_n: graph.n(),
            family_n: family.n(),
        });
    }
    let mut edge_overlaps = Vec::with_capacity(graph.edge_count());
    for (i, j) in graph.edges() {
        let overlap = family.vector(i)?.overlap(family.vector(j)?);
        edge_overlaps.push(((i, j), overlap));
    }
    edge_overlaps.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let (worst_edge, worst_edge_overlap) = edge_overlaps
        .first()
        .map(|&(e, o)| (Some(e), o))
        .unwrap_or((None, 0.0));

    let mut min_nonedge = None;
    let mut min_nonedge_overlap = f64::INFINITY;
    for i in graph.vertices() {
        for j in i + 1..=graph.n() {
            if !graph.adjacent(i, j) {
                let overlap = family.vector(i)?.overlap(family.vector(j)?);
                if overlap < min_nonedge_overlap {
                    min_nonedge_overlap = overlap;
                    min_nonedge = Some((i, j));
                }
            }
        }
    }
    if min_nonedge.is_none() {
        min_nonedge_overlap = 0.0;
    }
    Ok(OrthogonalityAudit {
        passed: worst_edge_overlap <= tol,
        worst_edge_overlap,
        worst_edge,
        min_nonedge_overlap,
        min_nonedge,
        edge_overlaps,
    })
}

/// Quantum side of the Hardy argument: span residuals of the state in each
/// part, and the probability P(1|1) = |<v_1|psi>|^2.
#[derive(Clone, Debug)]
pub struct HardyQuantum {
    pub conditions_ok: bool,
    pub residual_a: f64,
    pub residual_b: f64,
    pub p11: f64,
}

/// Evaluates the Hardy span conditions via decomposition residuals. The
/// all-zero outcome probability for a part vanishes exactly when the state
/// lies in the span of that part's (orthonormal) vectors.
pub fn hardy_quantum_report(
    graph: &Graph,
    family: &MeasurementFamily,
    tol: f64,
) -> Result<HardyQuantum> {
    if graph.n() != family.n() {
        return Err(Error::GraphFamilyMismatch {
            graph_n: graph.n(),
            family_n: family.n(),
        });
    }
    if graph.part_a().is_empty() || graph.part_b().is_empty() {
        return Err(Error::InvalidGraph(
            "hardy conditions need both parts to be nonempty".into(),
        ));
    }
    let (_, residual_a) = decompose_state(family.state(), family, graph.part_a())?;
    let (_, residual_b) = decompose_state(family.state(), family, graph.part_b())?;
    let p11 = family.vector(1)?.overlap(family.state()).powi(2);
    Ok(HardyQuantum {
        conditions_ok: residual_a <= tol && residual_b <= tol,
        residual_a,
        residual_b,
        p11,
    })
}

/// The KCBS sum over all vertices of |<v_i|psi>|^2.
pub fn kcbs_value(family: &MeasurementFamily) -> f64 {
    family
        .vectors()
        .values()
        .map(|v| v.overlap(family.state()).powi(2))
        .sum()
}

/// A deterministic outcome assignment: one bit per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>, // index v-1
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bit(&self, vertex: u32) -> bool {
        self.bits[vertex as usize - 1]
    }

    pub fn ones(&self) -> u32 {
        self.bits.iter().filter(|&&b| b).count() as u32
    }

    /// True when no edge has both endpoints assigned 1.
    pub fn respects_exclusivity(&self, graph: &Graph) -> bool {
        graph.edges().all(|(i, j)| !(self.bit(i) && self.bit(j)))
    }
}

/// Exhaustive enumeration results over exclusivity-respecting assignments.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalAnalysis {
    /// Maximum of sum X_i, which equals the independence number.
    pub alpha: u32,
    /// Whether any assignment puts a 1 in each part while also setting X_1 = 1.
    /// None when the graph carries no part metadata (the pentagon).
    pub hardy_possible_with_x1: Option<bool>,
    /// Number of exclusivity-respecting assignments that satisfy both Hardy
    /// conditions (at least one 1 in each part), regardless of X_1.
    pub hardy_consistent_assignments: u64,
}

/// Enumerates every exclusivity-respecting 0/1 assignment (vertex-lexicographic
/// with pruning on violated edges) and reports the classical quantities.
pub fn classical_analysis(graph: &Graph) -> Result<ClassicalAnalysis> {
    if graph.n() > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::GraphTooLarge {
            got: graph.n(),
            max: MAX_EXHAUSTIVE_VERTICES,
        });
    }
    let n = graph.n();
    let mut adj = vec![0u32; n as usize + 1];
    for (i, j) in graph.edges() {
        adj[i as usize] |= 1 << (j - 1);
        adj[j as usize] |= 1 << (i - 1);
    }
    let mask_of = |part: &[u32]| part.iter().fold(0u32, |m, &v| m | 1 << (v - 1));
    let part_a = mask_of(graph.part_a());
    let part_b = mask_of(graph.part_b());
    let has_parts = part_a != 0 && part_b != 0;

    let mut state = EnumerationState {
        adj: &adj,
        n,
        part_a,
        part_b,
        alpha: 0,
        hardy_with_x1: false,
        hardy_consistent: 0,
    };
    state.walk(1, 0);
    Ok(ClassicalAnalysis {
        alpha: state.alpha,
        hardy_possible_with_x1: has_parts.then_some(state.hardy_with_x1),
        hardy_consistent_assignments: state.hardy_consistent,
    })
}

struct EnumerationState<'a> {
    adj: &'a [u32],
    n: u32,
    part_a: u32,
    part_b: u32,
    alpha: u32,
    hardy_with_x1: bool,
    hardy_consistent: u64,
}

impl EnumerationState<'_> {
    fn walk(&mut self, vertex: u32, ones: u32) {
        if vertex > self.n {
            let count = ones.count_ones();
            self.alpha = self.alpha.max(count);
            if self.part_a != 0
                && self.part_b != 0
                && ones & self.part_a != 0
                && ones & self.part_b != 0
            {
                self.hardy_consistent += 1;
                if ones & 1 != 0 {
                    self.hardy_with_x1 = true;
                }
            }
            return;
        }
        // X_vertex = 0
        self.walk(vertex + 1, ones);
        // X_vertex = 1, allowed only when no assigned neighbor is already 1
        if self.adj[vertex as usize] & ones == 0 {
            self.walk(vertex + 1, ones | 1 << (vertex - 1));
        }
    }
}

/// Full report combining the quantum audits, KCBS value, and classical side.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub n: u32,
    pub d: usize,
    pub tol: f64,
    pub exclusivity_ok: bool,
    pub worst_edge_overlap: f64,
    pub worst_edge: Option<(u32, u32)>,
    pub min_nonedge_overlap: f64,
    pub hardy_conditions_ok: bool,
    pub residual_a: f64,
    pub residual_b: f64,
    pub p11: f64,
    pub beta: f64,
    pub classical_alpha: u32,
    pub classical_hardy_possible_with_x1: Option<bool>,
    /// Classical Hardy probability of X_1 = 1: zero whenever the Hardy
    /// conditions admit no assignment with X_1 = 1, None without parts.
    pub classical_hardy_p11: Option<f64>,
    /// Worst offending edges (up to five), sorted by decreasing overlap.
    pub worst_edges: Vec<((u32, u32), f64)>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.exclusivity_ok
            && self.hardy_conditions_ok
            && self.classical_hardy_possible_with_x1 != Some(true)
    }
}

/// Runs every check of a family against a graph at tolerance `tol`.
pub fn verify_family(graph: &Graph, family: &MeasurementFamily, tol: f64) -> Result<VerificationReport> {
    let audit = audit_orthogonality(graph, family, tol)?;
    let hardy = hardy_quantum_report(graph, family, tol)?;
    let beta = kcbs_value(family);
    let classical = classical_analysis(graph)?;
    // 0 exactly when the Hardy conditions exclude X_1 = 1; absent otherwise
    // (no parts, or a graph where the exclusion genuinely fails)
    let classical_hardy_p11 = match classical.hardy_possible_with_x1 {
        Some(false) => Some(0.0),
        _ => None,
    };
    Ok(VerificationReport {
        n: graph.n(),
        d: family.d(),
        tol,
        exclusivity_ok: audit.passed,
        worst_edge_overlap: audit.worst_edge_overlap,
        worst_edge: audit.worst_edge,
        min_nonedge_overlap: audit.min_nonedge_overlap,
        hardy_conditions_ok: hardy.conditions_ok,
        residual_a: hardy.residual_a,
        residual_b: hardy.residual_b,
        p11: hardy.p11,
        beta,
        classical_alpha: classical.alpha,
        classical_hardy_possible_with_x1: classical.hardy_possible_with_x1,
        classical_hardy_p11,
        worst_edges: audit.edge_overlaps.into_iter().take(5).collect(),
    })
}
