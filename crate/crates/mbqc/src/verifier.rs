//! Machine check of the two-row CNOT derivation.
//!
//! Builds the 14-qubit CNOT cluster (two 7-vertex chains joined by one
//! vertical edge in column 3), verifies the four correlation-operator
//! product identities symbolically and as eigenvalue equations, and checks
//! the teleportation theorem branch by branch: for every internal-outcome
//! branch, the output pair equals `B * CNOT` applied to the input, with
//! the byproduct exponents predicted from the outcomes.
//!
//! Vertex labels: 0-5 the control row (0 = IN), 6-11 the target row
//! (6 = IN), then the output pair R and S. Measurement bases come from
//! the letters of the product identities: Y on 1, 2, 4, 5 and X on the
//! rest, realized as equator measurements at pi/2 and 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::pattern::{cnot_byproduct, ByproductPair};
use crate::pauli::{Pauli, PauliString};
use crate::state::StateVector;

/// Output vertex of the control row.
pub const OUT_CONTROL: usize = 12;
/// Output vertex of the target row.
pub const OUT_TARGET: usize = 13;
/// IN vertex of the control row.
pub const IN_CONTROL: usize = 0;
/// IN vertex of the target row.
pub const IN_TARGET: usize = 6;

const VERTEX_CAP: usize = 14;

/// Vertices measured in the Y basis; everything else measured in X.
const Y_VERTICES: [usize; 4] = [1, 2, 4, 5];

/// Measurement order: internal qubits first, IN qubits last, so the
/// theorem's eigenvalue signs can be extracted on the post-internal state.
const MEASUREMENT_ORDER: [usize; 12] = [1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 0, 6];

/// Undirected graph on the cluster vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterGraph {
    n_vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ClusterGraph {
    pub fn new(n_vertices: usize) -> Result<Self> {
        if n_vertices > VERTEX_CAP {
            return Err(Error::ClusterTooLarge(n_vertices));
        }
        Ok(ClusterGraph {
            n_vertices,
            edges: BTreeSet::new(),
        })
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.n_vertices {
            return Err(Error::UnknownVertex(a));
        }
        if b >= self.n_vertices {
            return Err(Error::UnknownVertex(b));
        }
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbours(&self, a: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    }

    /// The canonical two-row CNOT cluster: chains 0-1-2-3-4-5-R and
    /// 6-7-8-9-10-11-S plus the vertical edge {3, 9}.
    pub fn cnot_graph() -> Self {
        Self::cnot_graph_with_link(3).unwrap()
    }

    /// CNOT-shaped cluster with the single vertical edge moved to the
    /// given column: {c, c+6} for columns 0-5, {R, S} for column 6.
    pub fn cnot_graph_with_link(column: usize) -> Result<Self> {
        if column > 6 {
            return Err(Error::UnknownVertex(column));
        }
        let mut g = ClusterGraph::new(VERTEX_CAP)?;
        for start in [0usize, 6] {
            for i in 0..5 {
                g.add_edge(start + i, start + i + 1)?;
            }
        }
        g.add_edge(5, OUT_CONTROL)?;
        g.add_edge(11, OUT_TARGET)?;
        if column == 6 {
            g.add_edge(OUT_CONTROL, OUT_TARGET)?;
        } else {
            g.add_edge(column, column + 6)?;
        }
        Ok(g)
    }

    pub fn vertex_name(v: usize) -> String {
        match v {
            OUT_CONTROL => "R".into(),
            OUT_TARGET => "S".into(),
            other => other.to_string(),
        }
    }
}

/// |+> on every vertex (optionally an arbitrary two-qubit state on the IN
/// pair), then CZ along every edge.
pub fn build_cluster(graph: &ClusterGraph, input: Option<&StateVector>) -> Result<StateVector> {
    let n = graph.n_vertices();
    let mut state = match input {
        None => StateVector::plus_state(n)?,
        Some(in_state) => {
            if in_state.n_qubits() != 2 {
                return Err(Error::BadInputState(in_state.n_qubits()));
            }
            // amplitude over all vertices: IN pair from the input state,
            // |+> everywhere else
            let rest = n - 2;
            let scale = ((1usize << rest) as f64).sqrt().recip();
            let in_amps = in_state.amplitudes();
            let mut amps = Vec::with_capacity(1 << n);
            let cbit = n - 1 - IN_CONTROL;
            let tbit = n - 1 - IN_TARGET;
            for index in 0..1usize << n {
                let c = (index >> cbit) & 1;
                let t = (index >> tbit) & 1;
                amps.push(in_amps[(c << 1) | t] * scale);
            }
            StateVector::from_amplitudes(amps)?
        }
    };
    for (a, b) in graph.edges() {
        state.apply_cz(a, b)?;
    }
    Ok(state)
}

/// The correlation operator K_a = X_a times Z on every neighbour of a.
pub fn correlation_operator(graph: &ClusterGraph, a: usize) -> Result<PauliString> {
    if a >= graph.n_vertices() {
        return Err(Error::UnknownVertex(a));
    }
    let mut ops = vec![(a, Pauli::X)];
    for b in graph.neighbours(a) {
        ops.push((b, Pauli::Z));
    }
    Ok(PauliString::from_ops(graph.n_vertices(), &ops))
}

/// One product identity: the K factors on the left and the stated
/// right-hand side.
struct ProductIdentity {
    label: &'static str,
    factors: &'static [usize],
    expected_phase_pow: u8,
    expected_ops: &'static [(usize, Pauli)],
}

const PRODUCT_IDENTITIES: [ProductIdentity; 4] = [
    ProductIdentity {
        label: "E1",
        factors: &[0, 2, 3, 4, OUT_CONTROL, 10, OUT_TARGET],
        expected_phase_pow: 2,
        expected_ops: &[
            (0, Pauli::X),
            (2, Pauli::Y),
            (3, Pauli::X),
            (4, Pauli::Y),
            (OUT_CONTROL, Pauli::X),
            (10, Pauli::X),
            (OUT_TARGET, Pauli::X),
        ],
    },
    ProductIdentity {
        label: "E2",
        factors: &[1, 2, 4, 5],
        expected_phase_pow: 0,
        expected_ops: &[
            (0, Pauli::Z),
            (1, Pauli::Y),
            (2, Pauli::Y),
            (4, Pauli::Y),
            (5, Pauli::Y),
            (OUT_CONTROL, Pauli::Z),
        ],
    },
    ProductIdentity {
        label: "E3",
        factors: &[6, 8, 10, OUT_TARGET],
        expected_phase_pow: 0,
        expected_ops: &[
            (6, Pauli::X),
            (8, Pauli::X),
            (10, Pauli::X),
            (OUT_TARGET, Pauli::X),
        ],
    },
    ProductIdentity {
        label: "E4",
        factors: &[4, 5, 7, 9, 11],
        expected_phase_pow: 0,
        expected_ops: &[
            (4, Pauli::Y),
            (5, Pauli::Y),
            (OUT_CONTROL, Pauli::Z),
            (6, Pauli::Z),
            (7, Pauli::X),
            (9, Pauli::X),
            (11, Pauli::X),
            (OUT_TARGET, Pauli::Z),
        ],
    },
];

/// Result of checking one product identity.
#[derive(Debug, Clone)]
pub struct EquationCheck {
    pub label: &'static str,
    pub computed: PauliString,
    pub expected: PauliString,
    /// Letters and sign both match the stated right-hand side.
    pub symbolic_ok: bool,
    /// Cluster-state expectation of the signed product.
    pub expectation: f64,
    pub expectation_ok: bool,
}

impl EquationCheck {
    pub fn pass(&self) -> bool {
        self.symbolic_ok && self.expectation_ok
    }
}

/// Report for the four product identities.
#[derive(Debug, Clone)]
pub struct CorrelReport {
    pub equations: Vec<EquationCheck>,
}

impl CorrelReport {
    pub fn all_pass(&self) -> bool {
        self.equations.iter().all(EquationCheck::pass)
    }
}

/// Check the four correlation-operator products on the canonical graph.
pub fn check_correl_products() -> Result<CorrelReport> {
    check_correl_products_on(&ClusterGraph::cnot_graph())
}

/// Check the four products on an arbitrary CNOT-shaped graph (used by the
/// uniqueness probe and perturbation tests).
pub fn check_correl_products_on(graph: &ClusterGraph) -> Result<CorrelReport> {
    let cluster = build_cluster(graph, None)?;
    let mut equations = Vec::with_capacity(4);
    for identity in &PRODUCT_IDENTITIES {
        let mut computed = PauliString::identity(graph.n_vertices());
        for &a in identity.factors {
            computed = computed.multiply(&correlation_operator(graph, a)?);
        }
        let expected = PauliString::from_ops(graph.n_vertices(), identity.expected_ops)
            .with_phase_pow(identity.expected_phase_pow);
        let symbolic_ok = computed == expected;
        let expectation = match cluster.expectation(&computed) {
            Ok(v) => v,
            Err(Error::AntiHermitianPhase) => f64::NAN,
            Err(e) => return Err(e),
        };
        let expectation_ok = (expectation - 1.0).abs() < 1e-10;
        equations.push(EquationCheck {
            label: identity.label,
            computed,
            expected,
            symbolic_ok,
            expectation,
            expectation_ok,
        });
    }
    Ok(CorrelReport { equations })
}

/// Probe every single-vertical-edge placement; returns the columns whose
/// graph satisfies all four product identities.
pub fn link_placements_satisfying_products() -> Result<Vec<usize>> {
    let mut satisfying = Vec::new();
    for column in 0..=6 {
        let graph = ClusterGraph::cnot_graph_with_link(column)?;
        if check_correl_products_on(&graph)?.all_pass() {
            satisfying.push(column);
        }
    }
    Ok(satisfying)
}

/// Byproduct exponents of the commuted operator
/// `Z_C^zc X_C^xc Z_T^zt X_T^xt` for one outcome branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnotByproducts {
    pub control: ByproductPair,
    pub target: ByproductPair,
}

/// Eigenvalue signs of the four theorem equations, extracted from the
/// post-internal-measurement state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractedSigns {
    pub lambda_x: bool,
    pub lambda_z: bool,
    pub mu_x: bool,
    pub mu_z: bool,
}

/// One enumerated branch.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    /// Outcome bits, bit a = m_a over cluster qubits 0..12.
    pub outcomes: u16,
    pub probability: f64,
    /// Fidelity of the output pair against B * CNOT * input.
    pub fidelity: f64,
    pub byproducts: CnotByproducts,
    /// Present when the run could extract eigenvalue signs (all-|+> input).
    pub signs: Option<ExtractedSigns>,
    pub pass: bool,
}

/// Full branch-enumeration report.
#[derive(Debug, Clone)]
pub struct BranchReport {
    pub branches: Vec<BranchOutcome>,
    pub skipped_zero_probability: usize,
    /// Sum of branch probabilities (1 for a full enumeration).
    pub probability_sum: f64,
    pub min_fidelity: f64,
    pub all_pass: bool,
}

/// Enumeration mode: every branch or a seeded random sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchMode {
    All,
    Sample { count: usize, seed: u64 },
}

fn basis_angle(vertex: usize) -> f64 {
    if Y_VERTICES.contains(&vertex) {
        std::f64::consts::FRAC_PI_2
    } else {
        0.0
    }
}

/// Predicted byproduct bits for a branch, from the commuted byproduct
/// formula. `m` is indexed by cluster qubit.
fn predicted_byproducts(m: &[bool; 12]) -> CnotByproducts {
    CnotByproducts {
        control: ByproductPair {
            x: m[1] ^ m[2] ^ m[4] ^ m[5],
            z: true ^ m[0] ^ m[2] ^ m[3] ^ m[4] ^ m[6] ^ m[8],
        },
        target: ByproductPair {
            x: m[1] ^ m[2] ^ m[7] ^ m[9] ^ m[11],
            z: m[6] ^ m[8] ^ m[10],
        },
    }
}

fn predicted_signs(m: &[bool; 12]) -> ExtractedSigns {
    ExtractedSigns {
        lambda_x: true ^ m[2] ^ m[3] ^ m[4] ^ m[10],
        lambda_z: m[1] ^ m[2] ^ m[4] ^ m[5],
        mu_x: m[8] ^ m[10],
        mu_z: m[4] ^ m[5] ^ m[7] ^ m[9] ^ m[11],
    }
}

/// `B * CNOT * input` on (control, target).
fn expected_output(input: &StateVector, b: CnotByproducts) -> Result<StateVector> {
    let mut s = input.clone();
    s.apply_cnot(0, 1)?;
    if b.control.x {
        s.apply_x(0)?;
    }
    if b.control.z {
        s.apply_z(0)?;
    }
    if b.target.x {
        s.apply_x(1)?;
    }
    if b.target.z {
        s.apply_z(1)?;
    }
    Ok(s)
}

/// Extract a +/-1 eigenvalue as a bit; fails the branch when the state is
/// not an eigenstate.
fn eigen_sign(state: &StateVector, ops: &[(usize, Pauli)]) -> Result<Option<bool>> {
    let p = PauliString::from_ops(state.n_qubits(), ops);
    let value = state.expectation(&p)?;
    if (value.abs() - 1.0).abs() > 1e-9 {
        return Ok(None);
    }
    Ok(Some(value < 0.0))
}

struct BranchContext {
    input: StateVector,
    extract_signs: bool,
}

/// Fully measure one branch. `bits` is indexed by measurement order.
fn evaluate_branch(
    base_after_internal: &StateVector,
    internal_bits: &[bool; 10],
    in_bits: (bool, bool),
    probability: f64,
    ctx: &BranchContext,
    signs: Option<ExtractedSigns>,
) -> Result<BranchOutcome> {
    let mut state = base_after_internal.clone();
    let mut probability = probability;
    for (vertex, bit) in [(IN_CONTROL, in_bits.0), (IN_TARGET, in_bits.1)] {
        probability *= state.project_in_equator(vertex, basis_angle(vertex), bit)?;
    }

    // collect m indexed by cluster qubit
    let mut m = [false; 12];
    for (k, &vertex) in MEASUREMENT_ORDER[..10].iter().enumerate() {
        m[vertex] = internal_bits[k];
    }
    m[IN_CONTROL] = in_bits.0;
    m[IN_TARGET] = in_bits.1;

    // output pair: all measured qubits are frozen in computational states,
    // so the R/S amplitudes sit at the indices matching the frozen bits
    let n = state.n_qubits();
    let mut frozen = 0usize;
    for (vertex, &bit) in m.iter().enumerate() {
        if bit {
            frozen |= 1 << (n - 1 - vertex);
        }
    }
    let rbit = 1usize << (n - 1 - OUT_CONTROL);
    let sbit = 1usize << (n - 1 - OUT_TARGET);
    let amps = state.amplitudes();
    let out = StateVector::from_amplitudes(vec![
        amps[frozen],
        amps[frozen | sbit],
        amps[frozen | rbit],
        amps[frozen | rbit | sbit],
    ])?;

    let byproducts = predicted_byproducts(&m);
    let expected = expected_output(&ctx.input, byproducts)?;
    let fidelity = out.fidelity_up_to_phase(&expected)?;

    // dual route: the pattern module's update rule must agree with the
    // commuted-formula exponents
    let (bc, bt) = cnot_byproduct(ByproductPair::default(), ByproductPair::default(), m);
    let rules_agree = bc == byproducts.control && bt == byproducts.target;

    let signs_ok = match (signs, ctx.extract_signs) {
        (Some(extracted), true) => extracted == predicted_signs(&m),
        (None, true) => false,
        _ => true,
    };

    let mut outcomes = 0u16;
    for (vertex, &bit) in m.iter().enumerate() {
        if bit {
            outcomes |= 1 << vertex;
        }
    }
    let pass = fidelity >= 1.0 - 1e-9 && rules_agree && signs_ok;
    Ok(BranchOutcome {
        outcomes,
        probability,
        fidelity,
        byproducts,
        signs,
        pass,
    })
}

/// Enumerate (or sample) the 4096 outcome branches of the CNOT pattern on
/// the given two-qubit input state.
///
/// Every branch projects the cluster onto its outcomes, reads off the
/// output pair and compares it with `B * CNOT * input`. For the all-|+>
/// input, the four eigenvalue signs of the theorem are also extracted on
/// the post-internal-measurement state and checked against the outcome
/// formulas. Branches of probability below 1e-12 are skipped and counted.
pub fn enumerate_branches(input: &StateVector, mode: BranchMode) -> Result<BranchReport> {
    enumerate_branches_on(&ClusterGraph::cnot_graph(), input, mode)
}

/// Branch enumeration on an arbitrary CNOT-shaped graph (perturbed graphs
/// make branches fail, which the tests use as a negative control).
pub fn enumerate_branches_on(
    graph: &ClusterGraph,
    input: &StateVector,
    mode: BranchMode,
) -> Result<BranchReport> {
    if input.n_qubits() != 2 {
        return Err(Error::BadInputState(input.n_qubits()));
    }
    let plus2 = StateVector::plus_state(2)?;
    let extract_signs = input.fidelity_up_to_phase(&plus2)? > 1.0 - 1e-12;
    let ctx = BranchContext {
        input: input.clone(),
        extract_signs,
    };
    let base = build_cluster(graph, Some(input))?;

    let mut branches = Vec::new();
    let mut skipped = 0usize;
    let mut probability_sum = 0.0f64;

    match mode {
        BranchMode::All => {
            // depth-first over the internal qubits, sharing projection
            // prefixes; IN qubits are measured at the leaves
            let mut stack: Vec<(StateVector, f64, usize, [bool; 10])> =
                vec![(base, 1.0, 0, [false; 10])];
            while let Some((state, prob, depth, bits)) = stack.pop() {
                if prob < 1e-12 {
                    skipped += 1 << (12 - depth);
                    continue;
                }
                if depth == 10 {
                    let signs = if extract_signs {
                        extract_eigen_signs(&state)?
                    } else {
                        None
                    };
                    for in_c in [false, true] {
                        for in_t in [false, true] {
                            match evaluate_branch(&state, &bits, (in_c, in_t), prob, &ctx, signs) {
                                Ok(branch) => {
                                    probability_sum += branch.probability;
                                    branches.push(branch);
                                }
                                Err(Error::ImpossibleBranch { .. }) => skipped += 1,
                                Err(e) => return Err(e),
                            }
                        }
                    }
                    continue;
                }
                let vertex = MEASUREMENT_ORDER[depth];
                for bit in [false, true] {
                    let mut next = state.clone();
                    match next.project_in_equator(vertex, basis_angle(vertex), bit) {
                        Ok(p) => {
                            let mut next_bits = bits;
                            next_bits[depth] = bit;
                            stack.push((next, prob * p, depth + 1, next_bits));
                        }
                        Err(Error::ImpossibleBranch { .. }) => {
                            skipped += 1 << (12 - depth - 1);
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        BranchMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = BTreeSet::new();
            while picked.len() < count.min(1 << 12) {
                picked.insert(rng.gen_range(0..1u16 << 12));
            }
            for mask in picked {
                let mut state = base.clone();
                let mut prob = 1.0f64;
                let mut bits = [false; 10];
                let mut dead = false;
                for (depth, &vertex) in MEASUREMENT_ORDER[..10].iter().enumerate() {
                    let bit = mask & (1 << vertex) != 0;
                    bits[depth] = bit;
                    match state.project_in_equator(vertex, basis_angle(vertex), bit) {
                        Ok(p) => prob *= p,
                        Err(Error::ImpossibleBranch { .. }) => {
                            dead = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if dead {
                    skipped += 1;
                    continue;
                }
                let signs = if extract_signs {
                    extract_eigen_signs(&state)?
                } else {
                    None
                };
                let in_bits = (
                    mask & (1 << IN_CONTROL) != 0,
                    mask & (1 << IN_TARGET) != 0,
                );
                match evaluate_branch(&state, &bits, in_bits, prob, &ctx, signs) {
                    Ok(branch) => {
                        probability_sum += branch.probability;
                        branches.push(branch);
                    }
                    Err(Error::ImpossibleBranch { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }

    let min_fidelity = branches
        .iter()
        .map(|b| b.fidelity)
        .fold(f64::INFINITY, f64::min);
    let all_pass = branches.iter().all(|b| b.pass) && !branches.is_empty();
    Ok(BranchReport {
        branches,
        skipped_zero_probability: skipped,
        probability_sum,
        min_fidelity,
        all_pass,
    })
}

/// Eigenvalue signs of X0 XR XS, Z0 ZR, X6 XS and Z6 ZR ZS on the state
/// after the internal measurements. Returns None when any operator fails
/// to have a +/-1 expectation.
fn extract_eigen_signs(state: &StateVector) -> Result<Option<ExtractedSigns>> {
    use Pauli::*;
    let lambda_x = eigen_sign(
        state,
        &[(IN_CONTROL, X), (OUT_CONTROL, X), (OUT_TARGET, X)],
    )?;
    let lambda_z = eigen_sign(state, &[(IN_CONTROL, Z), (OUT_CONTROL, Z)])?;
    let mu_x = eigen_sign(state, &[(IN_TARGET, X), (OUT_TARGET, X)])?;
    let mu_z = eigen_sign(
        state,
        &[(IN_TARGET, Z), (OUT_CONTROL, Z), (OUT_TARGET, Z)],
    )?;
    Ok(
        match (lambda_x, lambda_z, mu_x, mu_z) {
            (Some(lambda_x), Some(lambda_z), Some(mu_x), Some(mu_z)) => Some(ExtractedSigns {
                lambda_x,
                lambda_z,
                mu_x,
                mu_z,
            }),
            _ => None,
        },
    )
}

/// A seeded random normalized two-qubit state.
pub fn random_two_qubit_state(seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..4)
        .map(|_| {
            num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .collect();
    StateVector::from_amplitudes(amps).expect("random amplitudes are nonzero")
}
