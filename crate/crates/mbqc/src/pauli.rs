//! Pauli strings with exact phase tracking.
//!
//! A [`PauliString`] is a scalar phase in {+1, +i, -1, -i} times one Pauli
//! letter per qubit. Phases are tracked as an integer power of i, never as
//! floating-point numbers, so products of stabilizer operators keep their
//! signs exactly.

use std::fmt;

use num_complex::Complex64;

/// One Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Single-qubit product `self * rhs` as (power of i, resulting letter).
    fn multiply(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) => (0, p),
            (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A phase in {+1, +i, -1, -i} times a tensor product of Pauli letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    /// Power of i, modulo 4.
    phase_pow: u8,
    letters: Vec<Pauli>,
}

impl PauliString {
    /// The identity string on `n` qubits, phase +1.
    pub fn identity(n: usize) -> Self {
        PauliString {
            phase_pow: 0,
            letters: vec![Pauli::I; n],
        }
    }

    /// A string with phase +1 from explicit letters.
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString {
            phase_pow: 0,
            letters,
        }
    }

    /// A string on `n` qubits that is the identity except at the given positions.
    pub fn from_ops(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in ops {
            letters[q] = p;
        }
        PauliString {
            phase_pow: 0,
            letters,
        }
    }

    /// Same string with an extra factor of i^`pow`.
    pub fn with_phase_pow(mut self, pow: u8) -> Self {
        self.phase_pow = (self.phase_pow + pow) % 4;
        self
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Phase as a power of i, in 0..4.
    pub fn phase_pow(&self) -> u8 {
        self.phase_pow
    }

    /// Phase as a complex number.
    pub fn phase(&self) -> Complex64 {
        match self.phase_pow {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// True when the phase is +1 or -1, so the string is Hermitian.
    pub fn is_hermitian_phase(&self) -> bool {
        self.phase_pow.is_multiple_of(2)
    }

    /// Operator product `self * rhs`, tracking the phase exactly.
    ///
    /// Panics if the lengths differ; strings are only multiplied within one
    /// cluster, where lengths agree by construction.
    pub fn multiply(&self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.len(), rhs.len(), "Pauli string length mismatch");
        let mut phase_pow = (self.phase_pow + rhs.phase_pow) % 4;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(&a, &b)| {
                let (pow, p) = a.multiply(b);
                phase_pow = (phase_pow + pow) % 4;
                p
            })
            .collect();
        PauliString { phase_pow, letters }
    }

    /// Bit masks used when applying the string to a state vector:
    /// (flip mask over qubit positions, i-power contributions).
    ///
    /// Qubit `q` maps to bit `n-1-q` of a basis index, matching
    /// [`crate::state::StateVector`].
    pub(crate) fn masks(&self) -> PauliMasks {
        let n = self.len();
        let mut flip = 0usize;
        let mut y = 0usize;
        let mut z = 0usize;
        let mut base_pow = self.phase_pow as u32;
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    y |= bit;
                    base_pow += 1;
                }
                Pauli::Z => z |= bit,
            }
        }
        PauliMasks {
            flip,
            y,
            z,
            base_pow: (base_pow % 4) as u8,
        }
    }
}

pub(crate) struct PauliMasks {
    pub flip: usize,
    pub y: usize,
    pub z: usize,
    pub base_pow: u8,
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase_pow {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{}", sign)?;
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}
