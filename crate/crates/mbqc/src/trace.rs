//! Per-round trace records and their text format.
//!
//! The trace file doubles as hardware-testbench stimulus (program word and
//! measurement outcome per row and round) and expected output (adaptive
//! setting, byproduct and stored-byproduct registers). Byproducts are
//! recorded between the `X_s` and `X_r` edges, so a round's record shows
//! the registers before any gate-boundary correction of the same round.
//!
//! Format: `#nqubits=`, `#seed=` and `#rounds=` header lines, then one
//! tab-separated record per row and round:
//!
//! ```text
//! round  row  m  P  theta  s  b  sb
//! ```
//!
//! with `P` as four lowercase hex digits, `theta` with six fractional
//! digits, and `b`/`sb` as two bit characters printed x-then-z (the least
//! significant bit of a byproduct pair is z).

use std::fmt::Write as _;

use crate::compiler::ProgramImage;
use crate::controller::{ControllerArray, ProgramWord};
use crate::error::{Error, Result};
use crate::pattern::ByproductPair;

/// One row's record for one measurement round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub round: usize,
    pub row: usize,
    /// Measurement outcome of this round.
    pub m: bool,
    /// Program word driving this round.
    pub word: ProgramWord,
    /// Table angle theta (the applied angle is phi = (-1)^s theta with the
    /// s registered one round earlier).
    pub theta: f64,
    /// Adaptive output registered at this round's X_s.
    pub s: bool,
    /// Byproduct registers after X_s, before X_r.
    pub byproduct: ByproductPair,
    /// Stored byproduct registers after X_s, before X_r.
    pub stored: ByproductPair,
}

/// A complete trace with its reproducibility headers.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub n_qubits: usize,
    pub seed: u64,
    pub rounds: usize,
    pub records: Vec<TraceRecord>,
}

fn bit(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

impl Trace {
    /// Render the trace; `read(write(t)) == t` whenever every theta is
    /// representable with six fractional digits.
    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "#nqubits={}", self.n_qubits).unwrap();
        writeln!(out, "#seed={}", self.seed).unwrap();
        writeln!(out, "#rounds={}", self.rounds).unwrap();
        for r in &self.records {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.6}\t{}\t{}\t{}",
                r.round,
                r.row,
                bit(r.m),
                r.word,
                r.theta,
                bit(r.s),
                r.byproduct,
                r.stored,
            )
            .unwrap();
        }
        out
    }

    /// Parse a trace file.
    pub fn read(text: &str) -> Result<Trace> {
        let err = |line: usize, msg: String| Error::TraceParse { line, msg };
        let mut n_qubits = None;
        let mut seed = None;
        let mut rounds = None;
        let mut records = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = rest
                    .split_once('=')
                    .ok_or_else(|| err(line_no, format!("bad header '{line}'")))?;
                match key {
                    "nqubits" => {
                        n_qubits = Some(value.parse().map_err(|_| {
                            err(line_no, format!("bad nqubits value '{value}'"))
                        })?)
                    }
                    "seed" => {
                        seed = Some(
                            value
                                .parse()
                                .map_err(|_| err(line_no, format!("bad seed value '{value}'")))?,
                        )
                    }
                    "rounds" => {
                        rounds = Some(value.parse().map_err(|_| {
                            err(line_no, format!("bad rounds value '{value}'"))
                        })?)
                    }
                    other => return Err(err(line_no, format!("unknown header '{other}'"))),
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 8 {
                return Err(err(
                    line_no,
                    format!("expected 8 fields, found {}", fields.len()),
                ));
            }
            let parse_bit = |s: &str, what: &str| -> Result<bool> {
                match s {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(err(line_no, format!("bad {what} bit '{s}'"))),
                }
            };
            let parse_pair = |s: &str, what: &str| -> Result<ByproductPair> {
                let b: Vec<char> = s.chars().collect();
                if b.len() != 2 || !b.iter().all(|c| *c == '0' || *c == '1') {
                    return Err(err(line_no, format!("bad {what} pair '{s}'")));
                }
                Ok(ByproductPair::new(b[0] == '1', b[1] == '1'))
            };
            let round = fields[0]
                .parse()
                .map_err(|_| err(line_no, format!("bad round '{}'", fields[0])))?;
            let row = fields[1]
                .parse()
                .map_err(|_| err(line_no, format!("bad row '{}'", fields[1])))?;
            let m = parse_bit(fields[2], "m")?;
            if fields[3].len() != 4 {
                return Err(err(line_no, format!("bad program word '{}'", fields[3])));
            }
            let word = u16::from_str_radix(fields[3], 16)
                .map_err(|_| err(line_no, format!("bad program word '{}'", fields[3])))?;
            let theta: f64 = fields[4]
                .parse()
                .map_err(|_| err(line_no, format!("bad theta '{}'", fields[4])))?;
            let s = parse_bit(fields[5], "s")?;
            let byproduct = parse_pair(fields[6], "byproduct")?;
            let stored = parse_pair(fields[7], "stored byproduct")?;
            records.push(TraceRecord {
                round,
                row,
                m,
                word: ProgramWord(word),
                theta,
                s,
                byproduct,
                stored,
            });
        }

        Ok(Trace {
            n_qubits: n_qubits.ok_or_else(|| err(1, "missing #nqubits header".into()))?,
            seed: seed.ok_or_else(|| err(1, "missing #seed header".into()))?,
            rounds: rounds.ok_or_else(|| err(1, "missing #rounds header".into()))?,
            records,
        })
    }
}

/// Check a forced-outcome matrix against an image's shape.
pub fn check_outcome_shape(image: &ProgramImage, outcomes: &[Vec<bool>]) -> Result<()> {
    let rounds = outcomes.first().map(Vec::len).unwrap_or(0);
    if outcomes.len() != image.n_rows
        || outcomes.iter().any(|row| row.len() != image.total_rounds)
    {
        return Err(Error::OutcomeShapeMismatch {
            given: outcomes.len(),
            rounds,
            want_rows: image.n_rows,
            want_rounds: image.total_rounds,
        });
    }
    Ok(())
}

/// Replay an image's program through the controller array alone, with the
/// given outcomes standing in for the quantum measurements. This is the
/// classical half of the simulator and the source of testbench stimulus.
pub fn replay_controller(
    image: &ProgramImage,
    outcomes: &[Vec<bool>],
) -> Result<Vec<TraceRecord>> {
    check_outcome_shape(image, outcomes)?;
    let n = image.n_rows;
    let mut controllers = ControllerArray::new(n);
    let mut records = Vec::with_capacity(n * image.total_rounds);
    #[allow(clippy::needless_range_loop)] // round indexes three parallel tables
    for round in 0..image.total_rounds {
        let words: Vec<ProgramWord> = (0..n).map(|r| image.words[r][round]).collect();
        let ms: Vec<bool> = (0..n).map(|r| outcomes[r][round]).collect();
        let recs = controllers.step_round(&words, &ms)?;
        for (row, rec) in recs.iter().enumerate() {
            records.push(TraceRecord {
                round,
                row,
                m: ms[row],
                word: words[row],
                theta: image.theta[row][round],
                s: rec.s,
                byproduct: rec.byproduct,
                stored: rec.stored,
            });
        }
    }
    Ok(records)
}

/// Render testbench stimulus for an image: a controller-only replay over
/// the given outcomes (all-zero outcomes when none are supplied).
pub fn emit_trace_stimulus(image: &ProgramImage, outcomes: Option<&[Vec<bool>]>) -> Result<String> {
    let zeros;
    let outcomes = match outcomes {
        Some(o) => o,
        None => {
            zeros = vec![vec![false; image.total_rounds]; image.n_rows];
            &zeros
        }
    };
    let records = replay_controller(image, outcomes)?;
    Ok(Trace {
        n_qubits: image.n_rows,
        seed: 0,
        rounds: image.total_rounds,
        records,
    }
    .write())
}

/// Parse a forced-outcome file: one whitespace-separated line of bits per
/// row, `#` comments allowed.
pub fn parse_outcome_matrix(text: &str) -> Result<Vec<Vec<bool>>> {
    let mut rows = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut bits = Vec::new();
        for tok in line.split_whitespace() {
            match tok {
                "0" => bits.push(false),
                "1" => bits.push(true),
                other => {
                    return Err(Error::OutcomeParse {
                        line: line_no,
                        msg: format!("expected 0 or 1, found '{other}'"),
                    })
                }
            }
        }
        rows.push(bits);
    }
    Ok(rows)
}
