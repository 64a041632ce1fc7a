//! Measurement patterns for the supported gates.
//!
//! A [`Pattern`] is the pure-math description of one gate: per-round basis
//! angles, entanglement links, byproduct-update sources, adaptive-setting
//! sources and gate-boundary actions. The compiler turns patterns into
//! program words; the verifier and the tests use the same tables as an
//! oracle.
//!
//! Three patterns are supported:
//!
//! * the arbitrary one-qubit gate `U = Rx(zeta) Rz(eta) Rx(xi)`, four
//!   cluster qubits on one row;
//! * the two-row CNOT, twelve cluster qubits (control row then target row)
//!   with a single vertical link in column 3;
//! * the identity wire of any even length, used standalone and as padding.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// One gate placed on circuit rows.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    /// `U = Rx(zeta) Rz(eta) Rx(xi)`, rightmost factor applied first.
    OneQubit {
        row: usize,
        xi: f64,
        eta: f64,
        zeta: f64,
    },
    /// Nearest-neighbour CNOT; rows must differ by exactly 1.
    Cnot {
        control_row: usize,
        target_row: usize,
    },
    /// Even-length identity wire.
    Identity { row: usize, length: usize },
}

impl GateSpec {
    /// Rows the gate occupies, in pattern-row order (control first for CNOT).
    pub fn rows(&self) -> Vec<usize> {
        match *self {
            GateSpec::OneQubit { row, .. } | GateSpec::Identity { row, .. } => vec![row],
            GateSpec::Cnot {
                control_row,
                target_row,
            } => vec![control_row, target_row],
        }
    }

    /// Number of measurement rounds the gate takes.
    pub fn length(&self) -> usize {
        match *self {
            GateSpec::OneQubit { .. } => 4,
            GateSpec::Cnot { .. } => 6,
            GateSpec::Identity { length, .. } => length,
        }
    }

    pub fn validate(&self, n_rows: usize) -> Result<()> {
        for row in self.rows() {
            if row >= n_rows {
                return Err(Error::RowOutOfRange { row, n_rows });
            }
        }
        match *self {
            GateSpec::Cnot {
                control_row,
                target_row,
            } => {
                if control_row.abs_diff(target_row) != 1 {
                    return Err(Error::NonAdjacentCnot(control_row, target_row));
                }
                Ok(())
            }
            GateSpec::Identity { length, .. } => {
                if length < 2 || !length.is_multiple_of(2) {
                    return Err(Error::BadIdentityLength(length));
                }
                Ok(())
            }
            GateSpec::OneQubit { .. } => Ok(()),
        }
    }
}

/// One x/z byproduct bit pair. In trace files the pair prints as `xz`
/// with z as the least significant bit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ByproductPair {
    pub x: bool,
    pub z: bool,
}

impl ByproductPair {
    pub fn new(x: bool, z: bool) -> Self {
        ByproductPair { x, z }
    }
}

impl std::fmt::Display for ByproductPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", u8::from(self.x), u8::from(self.z))
    }
}

/// Which rows' current-round measurements feed a byproduct register.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ByproductSources {
    pub own: bool,
    pub partner: bool,
}

impl ByproductSources {
    pub const NONE: Self = ByproductSources {
        own: false,
        partner: false,
    };
    pub const OWN: Self = ByproductSources {
        own: true,
        partner: false,
    };
    pub const PARTNER: Self = ByproductSources {
        own: false,
        partner: true,
    };
    pub const BOTH: Self = ByproductSources {
        own: true,
        partner: true,
    };
}

/// Sources of the adaptive setting registered at one round (for the next
/// round's measurement): shift-register slots plus stored byproduct bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdaptiveMask {
    /// Bit `i` selects the measurement made `i` rounds ago (slot m_i).
    pub slots: u8,
    pub use_stored_x: bool,
    pub use_stored_z: bool,
}

/// Everything one row does in one pattern round.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoundRule {
    /// Basis angle theta; the measurement angle is phi = (-1)^s theta.
    pub theta: f64,
    /// Basis-select z flag: true selects an XY-plane measurement, false a
    /// computational-basis measurement.
    pub basis_xy: bool,
    /// Adaptive mask registered this round, consumed next round.
    pub adaptive: AdaptiveMask,
    pub x_sources: ByproductSources,
    pub z_sources: ByproductSources,
    /// Constants XORed into (x, z) at this round's X_r edge.
    pub add_constants: Option<(bool, bool)>,
}

/// A full measurement pattern. Row 0 is the control row for the CNOT.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub length: usize,
    /// Per-row, per-round rules; all rows share `length`.
    pub rows: Vec<Vec<RoundRule>>,
    /// (local round, upper local row) pairs carrying a vertical CZ link.
    pub vertical_links: Vec<(usize, usize)>,
    /// Snapshot the byproduct registers on the round before the gate.
    pub pre_store: bool,
    /// Run the CNOT commutation correction on the round before the gate.
    pub pre_commutation: bool,
}

impl Pattern {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

/// Negate an angle, avoiding -0.0 in emitted tables.
fn neg(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        -a
    }
}

/// Adaptive sources for the measurement of pattern round `consumer`,
/// converted to the shift-register mask registered at round `consumer - 1`.
fn adaptive_mask(
    consumer: usize,
    measurement_sources: &[usize],
    use_stored_x: bool,
    use_stored_z: bool,
) -> AdaptiveMask {
    let register_round = consumer - 1;
    let mut slots = 0u8;
    for &src in measurement_sources {
        assert!(src < consumer, "adaptive source must be an earlier round");
        let slot = register_round - src;
        assert!(slot < 3, "adaptive source outside the 3-slot shift register");
        slots |= 1 << slot;
    }
    AdaptiveMask {
        slots,
        use_stored_x,
        use_stored_z,
    }
}

/// Pattern for `U = Rx(zeta) Rz(eta) Rx(xi)`.
///
/// Four rounds at angles `[0, -xi, -eta, -zeta]`. Byproducts alternate
/// z (rounds 0, 2) and x (rounds 1, 3). Adaptive settings:
/// `s0 = 0`, `s1 = m0 ^ z`, `s2 = m1 ^ x`, `s3 = m0 ^ m2 ^ z`, where
/// (x, z) are the byproducts stored before the gate.
pub fn one_qubit_pattern(xi: f64, eta: f64, zeta: f64) -> Pattern {
    let thetas = [0.0, neg(xi), neg(eta), neg(zeta)];
    let mut rules: Vec<RoundRule> = thetas
        .iter()
        .map(|&theta| RoundRule {
            theta,
            basis_xy: true,
            ..RoundRule::default()
        })
        .collect();
    rules[0].z_sources = ByproductSources::OWN;
    rules[1].x_sources = ByproductSources::OWN;
    rules[2].z_sources = ByproductSources::OWN;
    rules[3].x_sources = ByproductSources::OWN;
    // s_(j+1) registered at round j.
    rules[0].adaptive = adaptive_mask(1, &[0], false, true);
    rules[1].adaptive = adaptive_mask(2, &[1], true, false);
    rules[2].adaptive = adaptive_mask(3, &[0, 2], false, true);
    Pattern {
        length: 4,
        rows: vec![rules],
        vertical_links: Vec::new(),
        pre_store: true,
        pre_commutation: false,
    }
}

/// Two-row CNOT pattern: control row measured at
/// `[0, pi/2, pi/2, 0, pi/2, pi/2]`, target row at X throughout, one
/// vertical link in column 3, no adaptive settings. Byproduct updates
/// spread the two-row update rules over the rounds in which each
/// measurement happens, with the constant landing on the control row's
/// z register in column 2.
pub fn cnot_pattern() -> Pattern {
    let control_thetas = [0.0, FRAC_PI_2, FRAC_PI_2, 0.0, FRAC_PI_2, FRAC_PI_2];
    let mut control: Vec<RoundRule> = control_thetas
        .iter()
        .map(|&theta| RoundRule {
            theta,
            basis_xy: true,
            ..RoundRule::default()
        })
        .collect();
    let mut target: Vec<RoundRule> = (0..6)
        .map(|_| RoundRule {
            theta: 0.0,
            basis_xy: true,
            ..RoundRule::default()
        })
        .collect();

    // Control: z' = z ^ m0 ^ m2 ^ m3 ^ m4 ^ m6 ^ m8 ^ 1, x' = x ^ m1 ^ m2 ^ m4 ^ m5.
    control[0].z_sources = ByproductSources::BOTH; // m0, m6
    control[1].x_sources = ByproductSources::OWN; // m1
    control[2].x_sources = ByproductSources::OWN; // m2
    control[2].z_sources = ByproductSources::BOTH; // m2, m8
    control[2].add_constants = Some((false, true)); // the +1 into z
    control[3].z_sources = ByproductSources::OWN; // m3
    control[4].x_sources = ByproductSources::OWN; // m4
    control[4].z_sources = ByproductSources::OWN; // m4
    control[5].x_sources = ByproductSources::OWN; // m5

    // Target: z' = z ^ m6 ^ m8 ^ m10, x' = x ^ m1 ^ m2 ^ m7 ^ m9 ^ m11.
    target[0].z_sources = ByproductSources::OWN; // m6
    target[1].x_sources = ByproductSources::BOTH; // m7, m1
    target[2].x_sources = ByproductSources::PARTNER; // m2
    target[2].z_sources = ByproductSources::OWN; // m8
    target[3].x_sources = ByproductSources::OWN; // m9
    target[4].z_sources = ByproductSources::OWN; // m10
    target[5].x_sources = ByproductSources::OWN; // m11

    Pattern {
        length: 6,
        rows: vec![control, target],
        vertical_links: vec![(3, 0)],
        pre_store: false,
        pre_commutation: true,
    }
}

/// Identity wire of any even length: all-X measurements with byproduct
/// updates alternating z (even local rounds) and x (odd local rounds).
pub fn identity_pattern(length: usize) -> Result<Pattern> {
    if length < 2 || !length.is_multiple_of(2) {
        return Err(Error::BadIdentityLength(length));
    }
    let rules = (0..length)
        .map(|j| RoundRule {
            theta: 0.0,
            basis_xy: true,
            z_sources: if j % 2 == 0 {
                ByproductSources::OWN
            } else {
                ByproductSources::NONE
            },
            x_sources: if j % 2 == 1 {
                ByproductSources::OWN
            } else {
                ByproductSources::NONE
            },
            ..RoundRule::default()
        })
        .collect();
    Ok(Pattern {
        length,
        rows: vec![rules],
        vertical_links: Vec::new(),
        pre_store: false,
        pre_commutation: false,
    })
}

/// Pattern for a gate spec.
pub fn pattern_for(spec: &GateSpec) -> Result<Pattern> {
    match *spec {
        GateSpec::OneQubit { xi, eta, zeta, .. } => Ok(one_qubit_pattern(xi, eta, zeta)),
        GateSpec::Cnot { .. } => Ok(cnot_pattern()),
        GateSpec::Identity { length, .. } => identity_pattern(length),
    }
}

// ---- pure byproduct / adaptive rules, used as test oracles ----

/// One-qubit-gate byproduct update: z' = z ^ m0 ^ m2, x' = x ^ m1 ^ m3.
pub fn u_byproduct(b: ByproductPair, m: [bool; 4]) -> ByproductPair {
    ByproductPair {
        x: b.x ^ m[1] ^ m[3],
        z: b.z ^ m[0] ^ m[2],
    }
}

/// CNOT byproduct update over the full twelve outcomes (m\[0..6\] control
/// row, m\[6..12\] target row), including the constant 1 into z_c.
pub fn cnot_byproduct(
    bc: ByproductPair,
    bt: ByproductPair,
    m: [bool; 12],
) -> (ByproductPair, ByproductPair) {
    let bc2 = ByproductPair {
        x: bc.x ^ m[1] ^ m[2] ^ m[4] ^ m[5],
        z: bc.z ^ m[0] ^ m[2] ^ m[3] ^ m[4] ^ m[6] ^ m[8] ^ true,
    };
    let bt2 = ByproductPair {
        x: bt.x ^ m[1] ^ m[2] ^ m[7] ^ m[9] ^ m[11],
        z: bt.z ^ m[6] ^ m[8] ^ m[10],
    };
    (bc2, bt2)
}

/// CNOT commutation correction: z_c' = z_c ^ z_t, x_t' = x_t ^ x_c,
/// the other two bits unchanged.
pub fn cnot_commutation(
    bc: ByproductPair,
    bt: ByproductPair,
) -> (ByproductPair, ByproductPair) {
    (
        ByproductPair {
            x: bc.x,
            z: bc.z ^ bt.z,
        },
        ByproductPair {
            x: bt.x ^ bc.x,
            z: bt.z,
        },
    )
}

/// Adaptive settings of the one-qubit gate from the stored byproducts and
/// the first three outcomes: (s0, s1, s2, s3).
pub fn u_adaptive(stored: ByproductPair, m0: bool, m1: bool, m2: bool) -> [bool; 4] {
    [
        false,
        m0 ^ stored.z,
        m1 ^ stored.x,
        m0 ^ m2 ^ stored.z,
    ]
}
