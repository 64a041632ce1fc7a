//! Circuit-to-program compiler.
//!
//! Translates a [`Circuit`] into per-row program-word streams, basis-angle
//! tables and the vertical-link schedule, and emits the ROM and angle-table
//! text formats consumed by hardware testbenches.
//!
//! Word placement follows the registered-output semantics of the control
//! unit: the A-masks that produce the adaptive setting for measurement `k`
//! sit in the word of round `k - 1`, B-masks sit in the word of the round
//! whose measurement they process, and C actions sit at gate boundaries
//! (commutation and store bits on the last round before the gate they
//! prepare; the CNOT constant inside the gate). Boundary actions are
//! omitted for gates starting at round 0, where the reset zeros make them
//! no-ops.

use std::fmt::Write as _;

use crate::controller::{ProgramWord, WordFields};
use crate::error::{Error, Result};
use crate::pattern::{pattern_for, ByproductSources, GateSpec};

/// A circuit: `n_rows` logical qubits and ordered layers of gates.
/// Within a layer every row carries at most one gate; rows not mentioned
/// are padded with identity wires by [`layout`].
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_rows: usize,
    pub layers: Vec<Vec<GateSpec>>,
}

impl Circuit {
    pub fn new(n_rows: usize) -> Self {
        Circuit {
            n_rows,
            layers: Vec::new(),
        }
    }

    /// Append a layer, validating gate specs and row uniqueness.
    pub fn push_layer(&mut self, gates: Vec<GateSpec>) -> Result<()> {
        let layer = self.layers.len();
        let mut seen = vec![false; self.n_rows];
        for gate in &gates {
            gate.validate(self.n_rows)?;
            for row in gate.rows() {
                if seen[row] {
                    return Err(Error::RowConflict { layer, row });
                }
                seen[row] = true;
            }
        }
        self.layers.push(gates);
        Ok(())
    }

    /// Parse the line-oriented circuit IR:
    ///
    /// ```text
    /// qubits N
    /// u <row> <xi> <eta> <zeta>
    /// cnot <control> <target>
    /// id <row> <length>
    /// ```
    ///
    /// `#` starts a comment; each gate line is one layer.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let tokens = tokenize(line);
            if tokens.is_empty() {
                continue;
            }
            let err = |column: usize, msg: String| Error::CircuitParse {
                line: line_no,
                column,
                msg,
            };
            let (col0, keyword) = tokens[0];
            match keyword {
                "qubits" => {
                    if circuit.is_some() {
                        return Err(err(col0, "duplicate qubits line".into()));
                    }
                    let (_, n) = parse_token::<usize>(&tokens, 1, line_no, "row count")?;
                    if n == 0 {
                        return Err(err(col0, "qubits must be at least 1".into()));
                    }
                    expect_len(&tokens, 2, line_no)?;
                    circuit = Some(Circuit::new(n));
                }
                "u" | "cnot" | "id" => {
                    let circuit = circuit
                        .as_mut()
                        .ok_or_else(|| err(col0, "gate before the qubits line".into()))?;
                    let gate = match keyword {
                        "u" => {
                            expect_len(&tokens, 5, line_no)?;
                            let (_, row) = parse_token::<usize>(&tokens, 1, line_no, "row")?;
                            let (_, xi) = parse_token::<f64>(&tokens, 2, line_no, "xi")?;
                            let (_, eta) = parse_token::<f64>(&tokens, 3, line_no, "eta")?;
                            let (_, zeta) = parse_token::<f64>(&tokens, 4, line_no, "zeta")?;
                            GateSpec::OneQubit { row, xi, eta, zeta }
                        }
                        "cnot" => {
                            expect_len(&tokens, 3, line_no)?;
                            let (_, c) = parse_token::<usize>(&tokens, 1, line_no, "control")?;
                            let (_, t) = parse_token::<usize>(&tokens, 2, line_no, "target")?;
                            GateSpec::Cnot {
                                control_row: c,
                                target_row: t,
                            }
                        }
                        _ => {
                            expect_len(&tokens, 3, line_no)?;
                            let (_, row) = parse_token::<usize>(&tokens, 1, line_no, "row")?;
                            let (_, len) = parse_token::<usize>(&tokens, 2, line_no, "length")?;
                            GateSpec::Identity { row, length: len }
                        }
                    };
                    gate.validate(circuit.n_rows).map_err(|e| err(col0, e.to_string()))?;
                    circuit
                        .push_layer(vec![gate])
                        .map_err(|e| err(col0, e.to_string()))?;
                }
                other => {
                    return Err(err(col0, format!("unknown keyword '{other}'")));
                }
            }
        }
        circuit.ok_or_else(|| Error::CircuitParse {
            line: text.lines().count() + 1,
            column: 1,
            msg: "missing qubits line".into(),
        })
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in line.split_whitespace() {
        let col = line[offset..].find(part).unwrap() + offset;
        out.push((col + 1, part));
        offset = col + part.len();
    }
    out
}

fn expect_len(tokens: &[(usize, &str)], want: usize, line: usize) -> Result<()> {
    if tokens.len() != want {
        return Err(Error::CircuitParse {
            line,
            column: tokens.last().map(|t| t.0).unwrap_or(1),
            msg: format!("expected {} fields, found {}", want, tokens.len()),
        });
    }
    Ok(())
}

fn parse_token<T: std::str::FromStr>(
    tokens: &[(usize, &str)],
    idx: usize,
    line: usize,
    what: &str,
) -> Result<(usize, T)> {
    let &(col, tok) = tokens.get(idx).ok_or(Error::CircuitParse {
        line,
        column: tokens.last().map(|t| t.0).unwrap_or(1),
        msg: format!("missing {what}"),
    })?;
    let value = tok.parse::<T>().map_err(|_| Error::CircuitParse {
        line,
        column: col,
        msg: format!("cannot parse {what} from '{tok}'"),
    })?;
    Ok((col, value))
}

/// One gate placed within an aligned layer.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedGate {
    pub spec: GateSpec,
    /// Offset from the start of the layer.
    pub local_start: usize,
}

/// A layer in which every row is covered for the full layer length.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedLayer {
    pub length: usize,
    pub gates: Vec<AlignedGate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignedCircuit {
    pub n_rows: usize,
    pub layers: Vec<AlignedLayer>,
}

/// Pad every layer with identity wires so that all rows run for the layer's
/// length (the longest pattern in the layer). Padding follows each gate.
pub fn layout(circuit: &Circuit) -> Result<AlignedCircuit> {
    let mut layers = Vec::with_capacity(circuit.layers.len());
    for (layer_idx, gates) in circuit.layers.iter().enumerate() {
        let mut seen = vec![false; circuit.n_rows];
        let mut length = 0;
        for gate in gates {
            gate.validate(circuit.n_rows)?;
            for row in gate.rows() {
                if seen[row] {
                    return Err(Error::RowConflict {
                        layer: layer_idx,
                        row,
                    });
                }
                seen[row] = true;
            }
            length = length.max(gate.length());
        }
        if length == 0 {
            // a layer of no gates contributes no rounds
            layers.push(AlignedLayer {
                length: 0,
                gates: Vec::new(),
            });
            continue;
        }
        let mut aligned = Vec::new();
        for gate in gates {
            let glen = gate.length();
            aligned.push(AlignedGate {
                spec: gate.clone(),
                local_start: 0,
            });
            if glen < length {
                let residue = length - glen;
                let row = gate.rows()[0];
                if residue % 2 != 0 {
                    return Err(Error::OddPadding {
                        layer: layer_idx,
                        row,
                        residue,
                    });
                }
                for row in gate.rows() {
                    aligned.push(AlignedGate {
                        spec: GateSpec::Identity {
                            row,
                            length: residue,
                        },
                        local_start: glen,
                    });
                }
            }
        }
        for (row, covered) in seen.iter().enumerate() {
            if !covered {
                if length % 2 != 0 {
                    return Err(Error::OddPadding {
                        layer: layer_idx,
                        row,
                        residue: length,
                    });
                }
                aligned.push(AlignedGate {
                    spec: GateSpec::Identity { row, length },
                    local_start: 0,
                });
            }
        }
        layers.push(AlignedLayer {
            length,
            gates: aligned,
        });
    }
    Ok(AlignedCircuit {
        n_rows: circuit.n_rows,
        layers,
    })
}

/// Compiled program: word, angle and basis streams for every row, plus the
/// vertical-link schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramImage {
    pub n_rows: usize,
    pub total_rounds: usize,
    /// `words[row][round]`.
    pub words: Vec<Vec<ProgramWord>>,
    /// `theta[row][round]` in radians.
    pub theta: Vec<Vec<f64>>,
    /// Basis-select z flag per row and round; true = XY measurement.
    pub basis_xy: Vec<Vec<bool>>,
    /// (round, upper row) pairs, sorted by round.
    pub vertical_links: Vec<(usize, usize)>,
    /// Whether the emitted files carry a trailing computational-basis
    /// readout round (all-zero word, theta 0, basis flag 0).
    pub readout_round: bool,
}

fn sources_mask(src: ByproductSources, partner_above: bool) -> u8 {
    let mut mask = 0;
    if src.own {
        mask |= 0b010;
    }
    if src.partner {
        mask |= if partner_above { 0b100 } else { 0b001 };
    }
    mask
}

/// Compile a circuit into a [`ProgramImage`]. The circuit is aligned with
/// [`layout`] first; compilation is pure and deterministic.
pub fn compile(circuit: &Circuit) -> Result<ProgramImage> {
    let aligned = layout(circuit)?;
    let n = circuit.n_rows;
    let total_rounds: usize = aligned.layers.iter().map(|l| l.length).sum();

    let mut fields = vec![vec![WordFields::default(); total_rounds]; n];
    let mut theta = vec![vec![0.0f64; total_rounds]; n];
    let mut basis_xy = vec![vec![false; total_rounds]; n];
    let mut vertical_links = Vec::new();

    let mut base = 0usize;
    for layer in &aligned.layers {
        for placed in &layer.gates {
            let start = base + placed.local_start;
            let pattern = pattern_for(&placed.spec)?;
            let rows = placed.spec.rows();

            for (local_row, &row) in rows.iter().enumerate() {
                let partner_above = rows
                    .get(1 - local_row)
                    .map(|&p| p < row)
                    .unwrap_or(false);
                for (j, rule) in pattern.rows[local_row].iter().enumerate() {
                    let round = start + j;
                    theta[row][round] = rule.theta;
                    basis_xy[row][round] = rule.basis_xy;
                    let f = &mut fields[row][round];
                    f.a_m = rule.adaptive.slots;
                    f.a_b = (u8::from(rule.adaptive.use_stored_x) << 1)
                        | u8::from(rule.adaptive.use_stored_z);
                    f.b_x = sources_mask(rule.x_sources, partner_above);
                    f.b_z = sources_mask(rule.z_sources, partner_above);
                    if let Some((cx, cz)) = rule.add_constants {
                        f.c |= 0b10000 | (u8::from(cz) << 2) | (u8::from(cx) << 3);
                    }
                }
            }

            // Gate-boundary C actions on the preceding round's words.
            if start > 0 {
                if pattern.pre_store {
                    let row = rows[0];
                    debug_assert_eq!(fields[row][start - 1].c & 0b00001, 0);
                    fields[row][start - 1].c |= 0b00001;
                }
                if pattern.pre_commutation {
                    for (local_row, &row) in rows.iter().enumerate() {
                        let partner = rows[1 - local_row];
                        let mut c = 0b00010;
                        if local_row == 0 {
                            c |= 0b00100; // this row is the control
                        }
                        if partner < row {
                            c |= 0b01000; // partner above
                        }
                        debug_assert_eq!(fields[row][start - 1].c & 0b11110, 0);
                        fields[row][start - 1].c |= c;
                    }
                }
            }

            for &(local_round, upper_local) in &pattern.vertical_links {
                let upper = rows[upper_local].min(rows[1 - upper_local]);
                vertical_links.push((start + local_round, upper));
            }
        }
        base += layer.length;
    }
    vertical_links.sort_unstable();

    let mut words = Vec::with_capacity(n);
    for row_fields in fields {
        let row_words: Result<Vec<ProgramWord>> =
            row_fields.into_iter().map(ProgramWord::encode).collect();
        words.push(row_words?);
    }

    Ok(ProgramImage {
        n_rows: n,
        total_rounds,
        words,
        theta,
        basis_xy,
        vertical_links,
        readout_round: false,
    })
}

impl ProgramImage {
    /// Copy of the image with the trailing computational-basis readout
    /// round marked for emission.
    pub fn with_readout_round(mut self) -> Self {
        self.readout_round = true;
        self
    }

    /// ROM text: one section per row, header `qubit <i>`, then one
    /// lowercase 4-digit hex word per line. The readout round, when
    /// marked, appends an all-zero word to every section.
    pub fn rom_text(&self) -> String {
        let mut out = String::new();
        for (row, words) in self.words.iter().enumerate() {
            writeln!(out, "qubit {row}").unwrap();
            for w in words {
                writeln!(out, "{w}").unwrap();
            }
            if self.readout_round {
                writeln!(out, "0000").unwrap();
            }
        }
        out
    }

    /// Angle-table text: per-row `<theta>TAB<basis>` lines plus the
    /// vertical-link schedule.
    pub fn table_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "#nqubits={}", self.n_rows).unwrap();
        writeln!(out, "#rounds={}", self.total_rounds).unwrap();
        writeln!(out, "#readout={}", u8::from(self.readout_round)).unwrap();
        for row in 0..self.n_rows {
            writeln!(out, "qubit {row}").unwrap();
            for k in 0..self.total_rounds {
                writeln!(
                    out,
                    "{}\t{}",
                    self.theta[row][k],
                    u8::from(self.basis_xy[row][k])
                )
                .unwrap();
            }
            if self.readout_round {
                writeln!(out, "0\t0").unwrap();
            }
        }
        writeln!(out, "links").unwrap();
        for &(round, upper) in &self.vertical_links {
            writeln!(out, "{round}\t{upper}").unwrap();
        }
        out
    }

    /// Rebuild an image from its two emitted files.
    pub fn from_texts(rom: &str, table: &str) -> Result<ProgramImage> {
        let parsed = parse_table(table)?;
        let words = parse_rom(rom)?;
        let expected_rounds = parsed.total_rounds + usize::from(parsed.readout_round);
        if words.len() != parsed.n_rows {
            return Err(Error::RomParse {
                line: 1,
                msg: format!(
                    "ROM has {} row sections, angle table describes {}",
                    words.len(),
                    parsed.n_rows
                ),
            });
        }
        let mut trimmed = Vec::with_capacity(words.len());
        for (row, mut row_words) in words.into_iter().enumerate() {
            if row_words.len() != expected_rounds {
                return Err(Error::RomParse {
                    line: 1,
                    msg: format!(
                        "qubit {} has {} words, expected {}",
                        row,
                        row_words.len(),
                        expected_rounds
                    ),
                });
            }
            if parsed.readout_round {
                let w = row_words.pop().unwrap();
                if w.raw() != 0 {
                    return Err(Error::RomParse {
                        line: 1,
                        msg: format!("qubit {row} readout word is {w}, expected 0000"),
                    });
                }
            }
            trimmed.push(row_words);
        }
        Ok(ProgramImage {
            n_rows: parsed.n_rows,
            total_rounds: parsed.total_rounds,
            words: trimmed,
            theta: parsed.theta,
            basis_xy: parsed.basis_xy,
            vertical_links: parsed.vertical_links,
            readout_round: parsed.readout_round,
        })
    }
}

/// Parse ROM text into per-row word lists.
pub fn parse_rom(text: &str) -> Result<Vec<Vec<ProgramWord>>> {
    let mut rows: Vec<Vec<ProgramWord>> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("qubit ") {
            let row: usize = rest.trim().parse().map_err(|_| Error::RomParse {
                line: line_no,
                msg: format!("bad row index '{rest}'"),
            })?;
            if row != rows.len() {
                return Err(Error::RomParse {
                    line: line_no,
                    msg: format!("expected section 'qubit {}', found 'qubit {row}'", rows.len()),
                });
            }
            rows.push(Vec::new());
        } else {
            let row = rows.last_mut().ok_or(Error::RomParse {
                line: line_no,
                msg: "word before the first qubit header".into(),
            })?;
            if line.len() != 4 || !line.chars().all(|c| c.is_ascii_hexdigit()) {
                return Err(Error::RomParse {
                    line: line_no,
                    msg: format!("expected a 4-digit hex word, found '{line}'"),
                });
            }
            let raw = u16::from_str_radix(line, 16).unwrap();
            row.push(ProgramWord(raw));
        }
    }
    Ok(rows)
}

struct ParsedTable {
    n_rows: usize,
    total_rounds: usize,
    readout_round: bool,
    theta: Vec<Vec<f64>>,
    basis_xy: Vec<Vec<bool>>,
    vertical_links: Vec<(usize, usize)>,
}

fn parse_table(text: &str) -> Result<ParsedTable> {
    let mut n_rows = None;
    let mut rounds = None;
    let mut readout = None;
    let mut theta: Vec<Vec<f64>> = Vec::new();
    let mut basis: Vec<Vec<bool>> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut in_links = false;

    let err = |line: usize, msg: String| Error::TableParse { line, msg };

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
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("bad header value '{value}'")))?;
            match key {
                "nqubits" => n_rows = Some(value),
                "rounds" => rounds = Some(value),
                "readout" => readout = Some(value != 0),
                other => return Err(err(line_no, format!("unknown header '{other}'"))),
            }
            continue;
        }
        if line == "links" {
            in_links = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("qubit ") {
            let row: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("bad row index '{rest}'")))?;
            if row != theta.len() {
                return Err(err(line_no, format!("out-of-order section 'qubit {row}'")));
            }
            theta.push(Vec::new());
            basis.push(Vec::new());
            continue;
        }
        let mut parts = line.split_whitespace();
        let a = parts.next().ok_or_else(|| err(line_no, "empty row".into()))?;
        let b = parts
            .next()
            .ok_or_else(|| err(line_no, "missing second field".into()))?;
        if parts.next().is_some() {
            return Err(err(line_no, "too many fields".into()));
        }
        if in_links {
            let round = a
                .parse()
                .map_err(|_| err(line_no, format!("bad link round '{a}'")))?;
            let upper = b
                .parse()
                .map_err(|_| err(line_no, format!("bad link row '{b}'")))?;
            links.push((round, upper));
        } else {
            let t: f64 = a
                .parse()
                .map_err(|_| err(line_no, format!("bad angle '{a}'")))?;
            let flag: u8 = b
                .parse()
                .map_err(|_| err(line_no, format!("bad basis flag '{b}'")))?;
            let row = theta
                .last_mut()
                .ok_or_else(|| err(line_no, "angle before the first qubit header".into()))?;
            row.push(t);
            basis.last_mut().unwrap().push(flag != 0);
        }
    }

    let n_rows = n_rows.ok_or_else(|| err(1, "missing #nqubits header".into()))?;
    let total_rounds = rounds.ok_or_else(|| err(1, "missing #rounds header".into()))?;
    let readout_round = readout.ok_or_else(|| err(1, "missing #readout header".into()))?;
    if theta.len() != n_rows {
        return Err(err(
            1,
            format!("found {} qubit sections, header says {}", theta.len(), n_rows),
        ));
    }
    let expected = total_rounds + usize::from(readout_round);
    for (row, t) in theta.iter_mut().enumerate() {
        if t.len() != expected {
            return Err(err(
                1,
                format!(
                    "qubit {} has {} angle rows, expected {}",
                    row,
                    t.len(),
                    expected
                ),
            ));
        }
        if readout_round {
            t.pop();
            basis[row].pop();
        }
    }
    Ok(ParsedTable {
        n_rows,
        total_rounds,
        readout_round,
        theta,
        basis_xy: basis,
        vertical_links: links,
    })
}
