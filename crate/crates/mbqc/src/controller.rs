//! Cycle-accurate functional model of the per-row digital control unit.
//!
//! Each measurement round runs three clock events in order:
//!
//! * `X_p` latches the round's 16-bit program word;
//! * `X_s` shifts the new measurement outcome into a 3-slot shift register,
//!   XOR-updates the byproduct registers from the masked neighbourhood
//!   outcomes, and registers the adaptive output `s` consumed by the *next*
//!   round's measurement;
//! * `X_r` applies the C-field actions: CNOT commutation corrections between
//!   partner rows, constant insertion, and the stored-byproduct snapshot.
//!
//! The model is functional and registered-value only: latch/amplifier delays
//! and logic hazards on `s` are out of scope (delays live in
//! [`crate::timing`]).
//!
//! # Program word layout
//!
//! `P = C A_b A_m B_x B_z` over 16 bits:
//!
//! ```text
//! bit  15 14 13 12 11 | 10    9    | 8    7    6    | 5   4   3   | 2   1   0
//!      C4 C3 C2 C1 C0 | Ab1   Ab0  | Am0  Am1  Am2  | Bx2 Bx1 Bx0 | Bz2 Bz1 Bz0
//!           (x_s sel = Ab1, z_s sel = Ab0; Am0 = most recent outcome;
//!            Bx2/Bz2 = row above, Bx1/Bz1 = this row, Bx0/Bz0 = row below)
//! ```
//!
//! C-field bits: 0 store, 1 commutation (2 = this row is the control,
//! 3 = partner is above), 4 add constants (2 = z constant, 3 = x constant).
//! Bits 1 and 4 are mutually exclusive.

use crate::error::{Error, Result};
use crate::pattern::ByproductPair;

/// Decoded fields of a program word. Mask fields use logical bit indexing
/// (`a_m` bit 0 = most recent measurement, `b_x` bit 0 = row below),
/// independent of the physical packing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WordFields {
    /// 5-bit commutation-correction control.
    pub c: u8,
    /// 2-bit stored-byproduct mask: bit 1 selects x_s, bit 0 selects z_s.
    pub a_b: u8,
    /// 3-bit shift-register mask: bit i selects the outcome i rounds back.
    pub a_m: u8,
    /// 3-bit x-byproduct mask: bit 2 above, bit 1 current, bit 0 below.
    pub b_x: u8,
    /// 3-bit z-byproduct mask, same layout as `b_x`.
    pub b_z: u8,
}

impl WordFields {
    pub fn store(&self) -> bool {
        self.c & 0b00001 != 0
    }
    pub fn commutation(&self) -> bool {
        self.c & 0b00010 != 0
    }
    pub fn is_control(&self) -> bool {
        self.c & 0b00100 != 0
    }
    pub fn partner_above(&self) -> bool {
        self.c & 0b01000 != 0
    }
    pub fn add_constants(&self) -> bool {
        self.c & 0b10000 != 0
    }
    pub fn constant_z(&self) -> bool {
        self.c & 0b00100 != 0
    }
    pub fn constant_x(&self) -> bool {
        self.c & 0b01000 != 0
    }
}

/// A 16-bit program word.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ProgramWord(pub u16);

/// Reverse the low 3 bits of a mask (logical index 0 packs into the
/// physical MSB of its field).
fn rev3(m: u8) -> u16 {
    (u16::from(m & 0b001) << 2) | u16::from(m & 0b010) | (u16::from(m & 0b100) >> 2)
}

impl ProgramWord {
    /// Pack fields into a word; fails if any field exceeds its width.
    pub fn encode(f: WordFields) -> Result<Self> {
        let check = |name, value: u8, width: u32| {
            if u32::from(value) >> width != 0 {
                Err(Error::FieldOverflow {
                    field: name,
                    value,
                    width,
                })
            } else {
                Ok(())
            }
        };
        check("C", f.c, 5)?;
        check("A_b", f.a_b, 2)?;
        check("A_m", f.a_m, 3)?;
        check("B_x", f.b_x, 3)?;
        check("B_z", f.b_z, 3)?;
        let raw = (u16::from(f.c) << 11)
            | (u16::from(f.a_b) << 9)
            | (rev3(f.a_m) << 6)
            | (u16::from(f.b_x) << 3)
            | u16::from(f.b_z);
        Ok(ProgramWord(raw))
    }

    /// Unpack the word into its fields. Total over all 2^16 words;
    /// `encode(decode(w)) == w` always.
    pub fn decode(self) -> WordFields {
        let raw = self.0;
        WordFields {
            c: ((raw >> 11) & 0b11111) as u8,
            a_b: ((raw >> 9) & 0b11) as u8,
            a_m: rev3(((raw >> 6) & 0b111) as u8) as u8,
            b_x: ((raw >> 3) & 0b111) as u8,
            b_z: (raw & 0b111) as u8,
        }
    }

    pub fn raw(self) -> u16 {
        self.0
    }
}

impl std::fmt::Display for ProgramWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:04x}", self.0)
    }
}

/// Register state of one row's control unit.
#[derive(Debug, Clone, Default)]
pub struct RowController {
    /// Past three measurement outcomes; slot 0 is the most recent.
    shift: [bool; 3],
    byproduct: ByproductPair,
    stored: ByproductPair,
    s_out: bool,
    word: Option<ProgramWord>,
    word_consumed: bool,
}

impl RowController {
    /// All registers zero, nothing loaded.
    pub fn reset(&mut self) {
        *self = RowController::default();
    }

    /// `X_p`: latch the round's program word. In strict mode, loading over
    /// a word that was never consumed by `X_s` is a protocol violation.
    pub fn on_xp(&mut self, word: ProgramWord, strict: bool, row: usize) -> Result<()> {
        if strict && self.word.is_some() && !self.word_consumed {
            return Err(Error::UnconsumedProgramWord { row });
        }
        self.word = Some(word);
        self.word_consumed = false;
        Ok(())
    }

    /// `X_s`: shift in the outcome, update byproducts from the masked
    /// neighbourhood, register the adaptive output.
    ///
    /// `m_below`/`m_above` are this round's outcomes of the adjacent rows;
    /// a missing neighbour reads as 0. In strict mode a round with no
    /// loaded word is an error; otherwise the all-zero word is assumed.
    pub fn on_xs(
        &mut self,
        m: bool,
        m_below: bool,
        m_above: bool,
        strict: bool,
        row: usize,
    ) -> Result<()> {
        let word = match self.word {
            Some(w) => w,
            None if strict => return Err(Error::MissingProgramWord { row }),
            None => ProgramWord(0),
        };
        self.word_consumed = true;
        let f = word.decode();

        self.shift = [m, self.shift[0], self.shift[1]];

        let masked = |mask: u8| {
            ((mask & 0b001 != 0) && m_below)
                ^ ((mask & 0b010 != 0) && m)
                ^ ((mask & 0b100 != 0) && m_above)
        };
        self.byproduct.x ^= masked(f.b_x);
        self.byproduct.z ^= masked(f.b_z);

        let mut s = false;
        for i in 0..3 {
            s ^= (f.a_m & (1 << i) != 0) && self.shift[i];
        }
        s ^= (f.a_b & 0b10 != 0) && self.stored.x;
        s ^= (f.a_b & 0b01 != 0) && self.stored.z;
        self.s_out = s;
        Ok(())
    }

    /// Registered adaptive output, the basis sign for the next round.
    pub fn s_out(&self) -> bool {
        self.s_out
    }

    pub fn byproduct(&self) -> ByproductPair {
        self.byproduct
    }

    pub fn stored(&self) -> ByproductPair {
        self.stored
    }

    pub fn shift(&self) -> [bool; 3] {
        self.shift
    }
}

/// Per-row snapshot taken after `X_s` and before `X_r`, matching what the
/// trace file records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundRecord {
    /// Adaptive output registered this round (consumed next round).
    pub s: bool,
    pub byproduct: ByproductPair,
    pub stored: ByproductPair,
}

/// The control units of all rows, stepped together one round at a time.
#[derive(Debug, Clone)]
pub struct ControllerArray {
    rows: Vec<RowController>,
    strict: bool,
}

impl ControllerArray {
    pub fn new(n_rows: usize) -> Self {
        ControllerArray {
            rows: vec![RowController::default(); n_rows],
            strict: false,
        }
    }

    /// Strict mode turns clock-protocol violations into errors.
    pub fn new_strict(n_rows: usize) -> Self {
        ControllerArray {
            rows: vec![RowController::default(); n_rows],
            strict: true,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &RowController {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut RowController {
        &mut self.rows[i]
    }

    pub fn reset(&mut self) {
        for r in &mut self.rows {
            r.reset();
        }
    }

    /// Current byproduct registers of every row.
    pub fn byproducts(&self) -> Vec<ByproductPair> {
        self.rows.iter().map(|r| r.byproduct).collect()
    }

    /// `X_r` for every row: commutation correction, then constants, then
    /// the stored-register snapshot. Partner registers are read from a
    /// pre-edge snapshot, so the order rows are visited cannot matter.
    pub fn on_xr(&mut self, words: &[ProgramWord]) -> Result<()> {
        if words.len() != self.rows.len() {
            return Err(Error::RoundLengthMismatch {
                rows: self.rows.len(),
                words: words.len(),
                measurements: 0,
            });
        }
        let pre: Vec<ByproductPair> = self.byproducts();
        for (i, word) in words.iter().enumerate() {
            let f = word.decode();
            if f.commutation() && f.add_constants() {
                return Err(Error::InvalidProgram { word: word.raw() });
            }
            let row = &mut self.rows[i];
            if f.commutation() {
                let partner = if f.partner_above() {
                    i.checked_sub(1).ok_or(Error::PartnerOutOfRange { row: i })?
                } else {
                    i + 1
                };
                if partner >= pre.len() {
                    return Err(Error::PartnerOutOfRange { row: i });
                }
                if f.is_control() {
                    row.byproduct.z ^= pre[partner].z;
                } else {
                    row.byproduct.x ^= pre[partner].x;
                }
            }
            if f.add_constants() {
                row.byproduct.z ^= f.constant_z();
                row.byproduct.x ^= f.constant_x();
            }
            if f.store() {
                row.stored = row.byproduct;
            }
        }
        Ok(())
    }

    /// Run one full round (`X_p`, `X_s` with cross-row visibility, `X_r`)
    /// and return the per-row records taken between `X_s` and `X_r`.
    pub fn step_round(
        &mut self,
        words: &[ProgramWord],
        measurements: &[bool],
    ) -> Result<Vec<RoundRecord>> {
        let n = self.rows.len();
        if words.len() != n || measurements.len() != n {
            return Err(Error::RoundLengthMismatch {
                rows: n,
                words: words.len(),
                measurements: measurements.len(),
            });
        }
        for (i, row) in self.rows.iter_mut().enumerate() {
            row.on_xp(words[i], self.strict, i)?;
        }
        for (i, row) in self.rows.iter_mut().enumerate() {
            let m_below = if i + 1 < n { measurements[i + 1] } else { false };
            let m_above = if i > 0 { measurements[i - 1] } else { false };
            row.on_xs(measurements[i], m_below, m_above, self.strict, i)?;
        }
        let records = self
            .rows
            .iter()
            .map(|r| RoundRecord {
                s: r.s_out,
                byproduct: r.byproduct,
                stored: r.stored,
            })
            .collect();
        self.on_xr(words)?;
        Ok(records)
    }
}
