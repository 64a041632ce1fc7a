//! Dense state-vector engine.
//!
//! Provides the rotations, entangling gates and projective measurements that
//! the cluster simulation and the verifier are built on. Amplitudes are a
//! dense `Vec<Complex64>` of length 2^n; qubit 0 is the most significant bit
//! of a basis index, so ket strings read left to right (`|10>` is index 2 of
//! a two-qubit state).
//!
//! Global phase is never normalized away; comparisons go through
//! [`StateVector::fidelity_up_to_phase`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Default cap on the amplitude vector length (2^24 amplitudes, ~256 MiB).
pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 24;

/// Forced projections below this probability are rejected as impossible.
pub const BRANCH_PROBABILITY_FLOOR: f64 = 1e-12;

/// Residual norm^2 allowed on the discarded branch when removing a qubit.
pub const RESIDUAL_ENTANGLEMENT_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex amplitude array over `n_qubits` qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Uniform superposition |+...+> on `n` qubits, under the default cap.
    pub fn plus_state(n: usize) -> Result<Self> {
        Self::plus_state_capped(n, DEFAULT_AMPLITUDE_CAP)
    }

    /// Uniform superposition with an explicit amplitude cap.
    pub fn plus_state_capped(n: usize, cap: usize) -> Result<Self> {
        Self::check_cap(n, cap)?;
        let len = 1usize << n;
        let a = Complex64::new((len as f64).sqrt().recip(), 0.0);
        Ok(StateVector {
            n_qubits: n,
            amps: vec![a; len],
        })
    }

    /// Computational basis state |bits> (bit 0 of the slice = qubit 0).
    pub fn basis_state(bits: &[bool]) -> Result<Self> {
        let n = bits.len();
        Self::check_cap(n, DEFAULT_AMPLITUDE_CAP)?;
        let mut index = 0usize;
        for &b in bits {
            index = (index << 1) | usize::from(b);
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Build from raw amplitudes; the length must be a power of two and the
    /// vector is renormalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadAmplitudeCount(len));
        }
        let mut s = StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = s.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        let scale = norm.recip();
        for a in &mut s.amps {
            *a *= scale;
        }
        Ok(s)
    }

    fn check_cap(n: usize, cap: usize) -> Result<()> {
        if n < 1 || n >= usize::BITS as usize || (1usize << n) > cap {
            return Err(Error::AmplitudeCapExceeded { n_qubits: n, cap });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// sqrt of the summed squared magnitudes.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn mask(&self, q: usize) -> Result<usize> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(1usize << (self.n_qubits - 1 - q))
    }

    /// Apply a 2x2 unitary [[a, b], [c, d]] to qubit `q`.
    fn apply_one_qubit(&mut self, q: usize, m: [Complex64; 4]) -> Result<()> {
        let mask = self.mask(q)?;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a0 = self.amps[i];
                let a1 = self.amps[j];
                self.amps[i] = m[0] * a0 + m[1] * a1;
                self.amps[j] = m[2] * a0 + m[3] * a1;
            }
        }
        Ok(())
    }

    /// Rotation about x: exp(-i angle X / 2).
    pub fn apply_rx(&mut self, q: usize, angle: f64) -> Result<()> {
        let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
        self.apply_one_qubit(
            q,
            [
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
        )
    }

    /// Rotation about y: exp(-i angle Y / 2).
    pub fn apply_ry(&mut self, q: usize, angle: f64) -> Result<()> {
        let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
        self.apply_one_qubit(
            q,
            [
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        )
    }

    /// Rotation about z: exp(-i angle Z / 2).
    pub fn apply_rz(&mut self, q: usize, angle: f64) -> Result<()> {
        let half = angle / 2.0;
        let e_minus = Complex64::new(half.cos(), -half.sin());
        let e_plus = Complex64::new(half.cos(), half.sin());
        let mask = self.mask(q)?;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & mask == 0 { e_minus } else { e_plus };
        }
        Ok(())
    }

    pub fn apply_x(&mut self, q: usize) -> Result<()> {
        let mask = self.mask(q)?;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                self.amps.swap(i, i | mask);
            }
        }
        Ok(())
    }

    pub fn apply_z(&mut self, q: usize) -> Result<()> {
        let mask = self.mask(q)?;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask != 0 {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Controlled-Z: negates exactly the amplitudes with both qubits set.
    pub fn apply_cz(&mut self, q1: usize, q2: usize) -> Result<()> {
        if q1 == q2 {
            return Err(Error::DuplicateQubit(q1));
        }
        let m1 = self.mask(q1)?;
        let m2 = self.mask(q2)?;
        let both = m1 | m2;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & both == both {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Controlled-NOT: flips `target` where `control` is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        if control == target {
            return Err(Error::DuplicateQubit(control));
        }
        let cm = self.mask(control)?;
        let tm = self.mask(target)?;
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
        Ok(())
    }

    /// Probability of reading 1 on qubit `q`.
    pub fn probability_one(&self, q: usize) -> Result<f64> {
        let mask = self.mask(q)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Computational-basis measurement. Outcome is 1 iff `draw` < p(1);
    /// the state collapses and is renormalized.
    pub fn measure_z(&mut self, q: usize, draw: f64) -> Result<bool> {
        let p1 = self.probability_one(q)?;
        let p0 = self.norm().powi(2) - p1;
        if p0 < BRANCH_PROBABILITY_FLOOR && p1 < BRANCH_PROBABILITY_FLOOR {
            return Err(Error::DegenerateBranches { p0, p1 });
        }
        // A branch below the floor cannot be renormalized; take the other one.
        let outcome = if p1 < BRANCH_PROBABILITY_FLOOR {
            false
        } else if p0 < BRANCH_PROBABILITY_FLOOR {
            true
        } else {
            draw < p1
        };
        self.project_z(q, outcome)?;
        Ok(outcome)
    }

    /// Project qubit `q` onto `outcome` and renormalize, returning the
    /// probability of that branch. Used for forced-outcome replays.
    pub fn project_z(&mut self, q: usize, outcome: bool) -> Result<f64> {
        let mask = self.mask(q)?;
        let want = if outcome { mask } else { 0 };
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if p < BRANCH_PROBABILITY_FLOOR {
            return Err(Error::ImpossibleBranch {
                prob: p,
                floor: BRANCH_PROBABILITY_FLOOR,
            });
        }
        let scale = p.sqrt().recip();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == want {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(p)
    }

    /// Measurement along the equator angle `phi`: apply Rz(pi/2 - phi) then
    /// Rx(pi/2), then measure in the computational basis. Outcome 0 is the
    /// +1 eigenstate of cos(phi) X + sin(phi) Y.
    pub fn measure_in_equator(&mut self, q: usize, phi: f64, draw: f64) -> Result<bool> {
        self.rotate_equator_to_z(q, phi)?;
        self.measure_z(q, draw)
    }

    /// Forced-outcome variant of [`Self::measure_in_equator`]; returns the
    /// branch probability.
    pub fn project_in_equator(&mut self, q: usize, phi: f64, outcome: bool) -> Result<f64> {
        self.rotate_equator_to_z(q, phi)?;
        self.project_z(q, outcome)
    }

    fn rotate_equator_to_z(&mut self, q: usize, phi: f64) -> Result<()> {
        self.apply_rz(q, std::f64::consts::FRAC_PI_2 - phi)?;
        self.apply_rx(q, std::f64::consts::FRAC_PI_2)
    }

    /// Drop a qubit that is in a definite |0> or |1> product state, e.g.
    /// after measurement. Fails if the discarded branch still carries more
    /// than [`RESIDUAL_ENTANGLEMENT_TOL`] of squared norm.
    pub fn remove_qubit(&mut self, q: usize) -> Result<()> {
        if self.n_qubits == 1 {
            return Err(Error::CannotRemoveLastQubit);
        }
        let mask = self.mask(q)?;
        let p1 = self.probability_one(q)?;
        let keep_one = p1 > 0.5;
        let residual = if keep_one {
            self.norm().powi(2) - p1
        } else {
            p1
        };
        if residual > RESIDUAL_ENTANGLEMENT_TOL {
            return Err(Error::ResidualEntanglement { qubit: q, residual });
        }
        let want = if keep_one { mask } else { 0 };
        let mut kept = Vec::with_capacity(self.amps.len() / 2);
        for (i, a) in self.amps.iter().enumerate() {
            if i & mask == want {
                kept.push(*a);
            }
        }
        let norm = kept.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let scale = norm.recip();
        for a in &mut kept {
            *a *= scale;
        }
        self.amps = kept;
        self.n_qubits -= 1;
        Ok(())
    }

    /// Append `n` fresh qubits in |+>, at the end of the qubit ordering.
    pub fn append_plus_qubits(&mut self, n: usize, cap: usize) -> Result<()> {
        let total = self.n_qubits + n;
        Self::check_cap(total, cap)?;
        let block = 1usize << n;
        let scale = Complex64::new((block as f64).sqrt().recip(), 0.0);
        let mut amps = Vec::with_capacity(self.amps.len() * block);
        for a in &self.amps {
            amps.extend(std::iter::repeat_n(*a * scale, block));
        }
        self.amps = amps;
        self.n_qubits = total;
        Ok(())
    }

    /// Apply a phase-tracked Pauli string to the state.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.len() != self.n_qubits {
            return Err(Error::PauliLengthMismatch {
                len: p.len(),
                n_qubits: self.n_qubits,
            });
        }
        let masks = p.masks();
        let phases = [
            Complex64::new(1.0, 0.0),
            I,
            Complex64::new(-1.0, 0.0),
            -I,
        ];
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let pow = masks.base_pow as u32
                + 2 * (i & masks.y).count_ones()
                + 2 * (i & masks.z).count_ones();
            out[i ^ masks.flip] = phases[(pow % 4) as usize] * a;
        }
        self.amps = out;
        Ok(())
    }

    /// <self|other>.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// <self|P|self> for a +/-1-phase Pauli string, as a real number.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian_phase() {
            return Err(Error::AntiHermitianPhase);
        }
        let mut applied = self.clone();
        applied.apply_pauli(p)?;
        let value = self.inner_product(&applied)?;
        if value.im.abs() > 1e-10 {
            return Err(Error::NonRealExpectation(value.im));
        }
        Ok(value.re)
    }

    /// |<self|other>|: 1 means equal up to a global phase.
    pub fn fidelity_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm().min(1.0))
    }
}
