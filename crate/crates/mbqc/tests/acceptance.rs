//! Acceptance suite: one test per release criterion, each printing a
//! pass line (visible with `--nocapture`) once its assertions hold.
//!
//! Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mbqc::compiler::{compile, Circuit};
use mbqc::controller::ProgramWord;
use mbqc::pattern::{ByproductPair, GateSpec};
use mbqc::simulator::{corrected_readout, simulate_circuit, verify_equivalence};
use mbqc::state::StateVector;
use mbqc::timing::{analog_budget, delay_line_length, pin_count, PhotonicParams};
use mbqc::trace::{replay_controller, Trace, TraceRecord};
use mbqc::verifier::{
    check_correl_products, enumerate_branches, random_two_qubit_state, BranchMode,
};

/// Golden two-qubit example: U(0.1, 0.2, 0.3) on row 0 plus a length-4
/// identity on row 1, then CNOT with row 0 as control.
fn golden_circuit() -> Circuit {
    let mut c = Circuit::new(2);
    c.push_layer(vec![GateSpec::OneQubit {
        row: 0,
        xi: 0.1,
        eta: 0.2,
        zeta: 0.3,
    }])
    .unwrap();
    c.push_layer(vec![GateSpec::Cnot {
        control_row: 0,
        target_row: 1,
    }])
    .unwrap();
    c
}

fn golden_outcomes() -> Vec<Vec<bool>> {
    let row0 = [0, 1, 1, 0, 1, 0, 0, 1, 1, 1];
    let row1 = [0, 1, 0, 1, 0, 1, 0, 1, 0, 0];
    vec![
        row0.iter().map(|&b| b == 1).collect(),
        row1.iter().map(|&b| b == 1).collect(),
    ]
}

const GOLDEN_WORDS_ROW0: [u16; 10] = [
    0x0302, 0x0510, 0x0342, 0x3010, 0x0003, 0x0010, 0xa013, 0x0002, 0x0012, 0x0010,
];
const GOLDEN_WORDS_ROW1: [u16; 10] = [
    0x0002, 0x0010, 0x0002, 0x5010, 0x0002, 0x0030, 0x0022, 0x0010, 0x0002, 0x0010,
];
const GOLDEN_S0: [u8; 10] = [0, 1, 1, 0, 0, 0, 0, 0, 0, 0];
const GOLDEN_S1: [u8; 10] = [0; 10];
const GOLDEN_B0: [&str; 10] = ["00", "10", "11", "11", "10", "10", "10", "10", "01", "11"];
const GOLDEN_B1: [&str; 10] = ["00", "10", "10", "00", "10", "00", "00", "10", "10", "10"];

#[test]
fn acceptance_1_golden_program_reproduction() {
    let started = Instant::now();
    let image = compile(&golden_circuit()).unwrap();
    assert_eq!(image.total_rounds, 10);
    let row0: Vec<u16> = image.words[0].iter().map(|w| w.raw()).collect();
    let row1: Vec<u16> = image.words[1].iter().map(|w| w.raw()).collect();
    assert_eq!(row0, GOLDEN_WORDS_ROW0, "row-0 program words");
    assert_eq!(row1, GOLDEN_WORDS_ROW1, "row-1 program words");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1: PASS - golden program words bit-exact ({elapsed:?})");
}

#[test]
fn acceptance_2_golden_trace_replay() {
    let started = Instant::now();
    let result = simulate_circuit(&golden_circuit(), 0, Some(&golden_outcomes())).unwrap();
    for rec in &result.run.trace {
        let (s, b) = if rec.row == 0 {
            (GOLDEN_S0[rec.round], GOLDEN_B0[rec.round])
        } else {
            (GOLDEN_S1[rec.round], GOLDEN_B1[rec.round])
        };
        assert_eq!(
            u8::from(rec.s),
            s,
            "s entry at round {} row {}",
            rec.round,
            rec.row
        );
        assert_eq!(
            rec.byproduct.to_string(),
            b,
            "b entry at round {} row {}",
            rec.round,
            rec.row
        );
    }
    assert_eq!(
        result.run.byproducts,
        vec![
            ByproductPair::new(true, true),
            ByproductPair::new(true, false)
        ],
        "final byproducts"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 2: PASS - golden trace replay bit-exact ({elapsed:?})");
}

fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n_rows = rng.gen_range(1..=4usize);
    let n_layers = rng.gen_range(1..=4usize);
    let mut circuit = Circuit::new(n_rows);
    for _ in 0..n_layers {
        let angle = |rng: &mut ChaCha8Rng| {
            // uniform in (-pi, pi]
            let a: f64 = rng.gen_range(-PI..PI);
            if a == -PI {
                PI
            } else {
                a
            }
        };
        let kind = rng.gen_range(0..3);
        let gate = if kind == 0 || n_rows == 1 {
            GateSpec::OneQubit {
                row: rng.gen_range(0..n_rows),
                xi: angle(rng),
                eta: angle(rng),
                zeta: angle(rng),
            }
        } else if kind == 1 {
            let upper = rng.gen_range(0..n_rows - 1);
            let control_first: bool = rng.gen();
            GateSpec::Cnot {
                control_row: if control_first { upper } else { upper + 1 },
                target_row: if control_first { upper + 1 } else { upper },
            }
        } else {
            GateSpec::Identity {
                row: rng.gen_range(0..n_rows),
                length: 2 * rng.gen_range(1..=3usize),
            }
        };
        circuit.push_layer(vec![gate]).unwrap();
    }
    circuit
}

#[test]
fn acceptance_3_oracle_equivalence() {
    let started = Instant::now();

    let seeds: Vec<u64> = (0..200).collect();
    let report = verify_equivalence(&golden_circuit(), &seeds).unwrap();
    assert!(
        report.min_fidelity >= 1.0 - 1e-9,
        "golden circuit min fidelity {}",
        report.min_fidelity
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x3a);
    let mut worst = 1.0f64;
    for index in 0..50 {
        let circuit = random_circuit(&mut rng);
        let seeds = [index as u64, 1000 + index as u64];
        let report = verify_equivalence(&circuit, &seeds).unwrap();
        assert!(
            report.min_fidelity >= 1.0 - 1e-9,
            "random circuit {index} min fidelity {}",
            report.min_fidelity
        );
        worst = worst.min(report.min_fidelity);
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "criterion 3: PASS - corrected MBQC matches the gate model, worst fidelity {worst:.2e} low bound ({elapsed:?})"
    );
}

#[test]
fn acceptance_4_cnot_stabilizer_products() {
    let started = Instant::now();
    let report = check_correl_products().unwrap();
    for eq in &report.equations {
        assert!(eq.symbolic_ok, "{} product string mismatch", eq.label);
        assert!(
            (eq.expectation - 1.0).abs() < 1e-10,
            "{} expectation {}",
            eq.label,
            eq.expectation
        );
    }
    assert_eq!(report.equations[0].computed.phase_pow(), 2, "E1 sign");
    for eq in &report.equations[1..] {
        assert_eq!(eq.computed.phase_pow(), 0, "{} sign", eq.label);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 4: PASS - correlation products match with signs ({elapsed:?})");
}

#[test]
fn acceptance_5_theorem_branch_enumeration() {
    let started = Instant::now();
    let inputs: Vec<(String, StateVector)> = vec![
        ("|++>".into(), StateVector::plus_state(2).unwrap()),
        (
            "|10>".into(),
            StateVector::basis_state(&[true, false]).unwrap(),
        ),
        ("random-1".into(), random_two_qubit_state(101)),
        ("random-2".into(), random_two_qubit_state(202)),
        ("random-3".into(), random_two_qubit_state(303)),
    ];
    for (name, input) in &inputs {
        let report = enumerate_branches(input, BranchMode::All).unwrap();
        assert!(
            report.min_fidelity >= 1.0 - 1e-9,
            "{name}: min branch fidelity {}",
            report.min_fidelity
        );
        assert!(report.all_pass, "{name}: branch failures");
        assert!(
            (report.probability_sum - 1.0).abs() < 1e-9,
            "{name}: probability sum {}",
            report.probability_sum
        );
        assert_eq!(
            report.branches.len() + report.skipped_zero_probability,
            4096,
            "{name}: branch count"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");

    let sampled_started = Instant::now();
    let sampled = enumerate_branches(
        &StateVector::plus_state(2).unwrap(),
        BranchMode::Sample {
            count: 256,
            seed: 9,
        },
    )
    .unwrap();
    assert!(sampled.all_pass);
    let sampled_elapsed = sampled_started.elapsed();
    assert!(sampled_elapsed.as_secs_f64() < 30.0, "took {sampled_elapsed:?}");
    println!(
        "criterion 5: PASS - all reachable branches satisfy OUT = B*CNOT*IN ({elapsed:?} full, {sampled_elapsed:?} sampled)"
    );
}

#[test]
fn acceptance_6_timing_figures() {
    let started = Instant::now();
    let period = 150e6f64.recip();
    assert!((period - 6.67e-9).abs() < 0.01e-9, "period {period}");
    let length = delay_line_length(150e6, &PhotonicParams::default()).unwrap();
    assert!((length - 0.833).abs() < 0.01, "delay line {length}");
    let budget = analog_budget(150e6, 5.08e-9).unwrap();
    assert!((budget - 1.59e-9).abs() < 0.01e-9, "analog budget {budget}");
    assert_eq!(pin_count(1, false).unwrap(), 8);
    assert_eq!(pin_count(20, false).unwrap(), 84);
    assert_eq!(pin_count(600, true).unwrap(), 1200);
    let elapsed = started.elapsed();
    println!("criterion 6: PASS - timing figures reproduced ({elapsed:?})");
}

/// Diff of two controller replays: which recorded bits flipped.
#[derive(PartialEq, Debug, Clone)]
struct ReplayDiff {
    s: Vec<(usize, usize)>,
    bx: Vec<(usize, usize)>,
    bz: Vec<(usize, usize)>,
    stored: Vec<(usize, usize)>,
}

fn diff_replays(a: &[TraceRecord], b: &[TraceRecord]) -> ReplayDiff {
    let mut d = ReplayDiff {
        s: Vec::new(),
        bx: Vec::new(),
        bz: Vec::new(),
        stored: Vec::new(),
    };
    for (x, y) in a.iter().zip(b) {
        let at = (x.round, x.row);
        if x.s != y.s {
            d.s.push(at);
        }
        if x.byproduct.x != y.byproduct.x {
            d.bx.push(at);
        }
        if x.byproduct.z != y.byproduct.z {
            d.bz.push(at);
        }
        if x.stored != y.stored {
            d.stored.push(at);
        }
    }
    d
}

#[test]
fn acceptance_7_property_suites() {
    let started = Instant::now();

    // encode/decode bijection over all 65536 words
    for raw in 0..=u16::MAX {
        let word = ProgramWord(raw);
        assert_eq!(ProgramWord::encode(word.decode()).unwrap(), word);
    }

    // GF(2) single-bit-flip propagation: the flip diff is independent of
    // the base outcomes, and for the golden program a flip of row 0's
    // round-1 outcome flips the round-1 adaptive output (consumed by the
    // round-2 measurement), row 0's x register from round 1 on, and row
    // 1's x register from round 4 on (through the commutation correction).
    let image = compile(&golden_circuit()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut reference_diff: Option<ReplayDiff> = None;
    for _ in 0..10 {
        let base: Vec<Vec<bool>> = (0..2)
            .map(|_| (0..10).map(|_| rng.gen()).collect())
            .collect();
        let mut flipped = base.clone();
        flipped[0][1] = !flipped[0][1];
        let d = diff_replays(
            &replay_controller(&image, &base).unwrap(),
            &replay_controller(&image, &flipped).unwrap(),
        );
        match &reference_diff {
            None => reference_diff = Some(d),
            Some(reference) => assert_eq!(&d, reference, "diff depends on base outcomes"),
        }
    }
    let d = reference_diff.unwrap();
    assert_eq!(d.s, vec![(1, 0)]);
    let expected_bx: Vec<(usize, usize)> = (1..10)
        .map(|round| (round, 0))
        .chain((4..10).map(|round| (round, 1)))
        .collect();
    let mut got_bx = d.bx.clone();
    got_bx.sort_by_key(|&(round, row)| (row, round));
    assert_eq!(got_bx, expected_bx);
    assert!(d.bz.is_empty());
    assert!(d.stored.is_empty());

    // trace round-trip identity over random traces (angles on the printed
    // 1e-6 grid)
    for case in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let rounds = rng.gen_range(0..6usize);
        let n_qubits = rng.gen_range(1..4usize);
        let mut records = Vec::new();
        for round in 0..rounds {
            for row in 0..n_qubits {
                records.push(TraceRecord {
                    round,
                    row,
                    m: rng.gen(),
                    word: ProgramWord(rng.gen()),
                    theta: {
                        // a value on the printed 1e-6 grid: parse the
                        // 6-digit decimal so write -> read is a fixed point
                        let micro = rng.gen_range(-3_141_592..=3_141_592i32);
                        format!("{:.6}", f64::from(micro) * 1e-6).parse().unwrap()
                    },
                    s: rng.gen(),
                    byproduct: ByproductPair::new(rng.gen(), rng.gen()),
                    stored: ByproductPair::new(rng.gen(), rng.gen()),
                });
            }
        }
        let trace = Trace {
            n_qubits,
            seed: rng.gen(),
            rounds,
            records,
        };
        assert_eq!(Trace::read(&trace.write()).unwrap(), trace);
    }

    // norm preservation per operation
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut state = StateVector::plus_state(4).unwrap();
    for step in 0..500 {
        let q = rng.gen_range(0..4);
        match step % 6 {
            0 => state.apply_rx(q, rng.gen_range(-PI..PI)).unwrap(),
            1 => state.apply_ry(q, rng.gen_range(-PI..PI)).unwrap(),
            2 => state.apply_rz(q, rng.gen_range(-PI..PI)).unwrap(),
            3 => state.apply_x(q).unwrap(),
            4 => state.apply_z(q).unwrap(),
            _ => {
                let r = (q + 1) % 4;
                state.apply_cz(q, r).unwrap();
            }
        }
        assert!((state.norm() - 1.0).abs() <= 1e-12, "step {step}");
    }

    // z-byproduct readout invariance
    let result = simulate_circuit(&golden_circuit(), 5, None).unwrap();
    let mut z_flipped = result.run.byproducts.clone();
    for b in &mut z_flipped {
        b.z = !b.z;
    }
    for seed in 0..50 {
        assert_eq!(
            corrected_readout(&result.run.final_state, &result.run.byproducts, seed).unwrap(),
            corrected_readout(&result.run.final_state, &z_flipped, seed).unwrap()
        );
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 7: PASS - property suites hold ({elapsed:?})");
}
