//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // ---- state vector ----
    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("two-qubit gate requires distinct qubits, got {0} twice")]
    DuplicateQubit(usize),

    #[error("{n_qubits} qubits need 2^{n_qubits} amplitudes, exceeding the cap of {cap} amplitudes")]
    AmplitudeCapExceeded { n_qubits: usize, cap: usize },

    #[error("state dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),

    #[error("amplitude vector length {0} is not a power of two")]
    BadAmplitudeCount(usize),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("both measurement branches are numerically degenerate (p0={p0:.3e}, p1={p1:.3e})")]
    DegenerateBranches { p0: f64, p1: f64 },

    #[error("forced measurement branch has probability {prob:.3e} (below {floor:.0e})")]
    ImpossibleBranch { prob: f64, floor: f64 },

    #[error("qubit {qubit} is still entangled: residual norm^2 {residual:.3e} on the discarded branch")]
    ResidualEntanglement { qubit: usize, residual: f64 },

    #[error("cannot remove the only qubit of a state")]
    CannotRemoveLastQubit,

    // ---- Pauli strings ----
    #[error("Pauli string length {len} does not match the {n_qubits}-qubit state")]
    PauliLengthMismatch { len: usize, n_qubits: usize },

    #[error("expectation of a +/-1-phase Pauli string came out complex (imaginary part {0:.3e})")]
    NonRealExpectation(f64),

    #[error("expectation of a +/-i-phase Pauli string is purely imaginary; not representable as a real eigenvalue")]
    AntiHermitianPhase,

    // ---- controller ----
    #[error("program word field {field} value {value:#x} exceeds its {width}-bit width")]
    FieldOverflow {
        field: &'static str,
        value: u8,
        width: u32,
    },

    #[error("invalid program word {word:#06x}: C bits 1 and 4 are mutually exclusive")]
    InvalidProgram { word: u16 },

    #[error("commutation partner of row {row} is out of range")]
    PartnerOutOfRange { row: usize },

    #[error("X_s on row {row} with no program word loaded this round")]
    MissingProgramWord { row: usize },

    #[error("X_p on row {row} overwrote a program word that was never consumed")]
    UnconsumedProgramWord { row: usize },

    #[error("controller round arrays disagree: {rows} rows, {words} words, {measurements} measurements")]
    RoundLengthMismatch {
        rows: usize,
        words: usize,
        measurements: usize,
    },

    // ---- patterns and compiler ----
    #[error("identity pattern length must be even and >= 2, got {0}")]
    BadIdentityLength(usize),

    #[error("cnot rows must be adjacent, got {0} and {1}")]
    NonAdjacentCnot(usize, usize),

    #[error("row {row} out of range for a circuit of {n_rows} rows")]
    RowOutOfRange { row: usize, n_rows: usize },

    #[error("layer {layer}: row {row} is assigned more than one gate")]
    RowConflict { layer: usize, row: usize },

    #[error("layer {layer}: row {row} needs odd padding of {residue} rounds")]
    OddPadding {
        layer: usize,
        row: usize,
        residue: usize,
    },

    // ---- text formats ----
    #[error("circuit parse error at line {line}, column {column}: {msg}")]
    CircuitParse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("trace parse error at line {line}: {msg}")]
    TraceParse { line: usize, msg: String },

    #[error("ROM parse error at line {line}: {msg}")]
    RomParse { line: usize, msg: String },

    #[error("angle table parse error at line {line}: {msg}")]
    TableParse { line: usize, msg: String },

    #[error("forced-outcome file error at line {line}: {msg}")]
    OutcomeParse { line: usize, msg: String },

    #[error("forced outcomes cover {given} rows x {rounds} rounds; image needs {want_rows} x {want_rounds}")]
    OutcomeShapeMismatch {
        given: usize,
        rounds: usize,
        want_rows: usize,
        want_rounds: usize,
    },

    // ---- simulator ----
    #[error("image has {n_rows} rows, above the simulator cap of {cap} rows ({live} qubits live)")]
    RowCapExceeded {
        n_rows: usize,
        cap: usize,
        live: usize,
    },

    #[error("state norm drifted to {norm} during round {round}")]
    NormDrift { round: usize, norm: f64 },

    // ---- verifier ----
    #[error("cluster vertex {0} is not in the graph")]
    UnknownVertex(usize),

    #[error("cluster of {0} vertices exceeds the 14-qubit verifier cap")]
    ClusterTooLarge(usize),

    #[error("IN state must have exactly 2 qubits, got {0}")]
    BadInputState(usize),

    // ---- timing ----
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("mode index must be >= 1, got {0}")]
    BadModeIndex(f64),

    #[error("clock phases must satisfy 0 < phase_s < phase_r < 360, got {phase_s} and {phase_r}")]
    BadClockPhases { phase_s: f64, phase_r: f64 },

    #[error("timing budget entries must be non-negative")]
    NegativeBudget,

    #[error("logic time {t_logic:.4e} s consumes the whole {period:.4e} s period")]
    InfeasibleBudget { t_logic: f64, period: f64 },

    #[error("pin count needs at least one row")]
    NoRows,

    // ---- io ----
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attach a path to a raw I/O error.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
