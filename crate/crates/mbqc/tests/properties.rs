//! Property tests over the crate's stated invariants.

use proptest::prelude::*;

use mbqc::compiler::{compile, Circuit};
use mbqc::controller::ProgramWord;
use mbqc::pattern::{
    cnot_byproduct, cnot_commutation, u_byproduct, ByproductPair, GateSpec,
};
use mbqc::pauli::{Pauli, PauliString};
use mbqc::state::StateVector;
use mbqc::timing::{delay_line_length, phase_legality, ClockPlan, PhotonicParams, TimingBudget};
use mbqc::trace::{replay_controller, Trace, TraceRecord};

fn arb_pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![
        Just(Pauli::I),
        Just(Pauli::X),
        Just(Pauli::Y),
        Just(Pauli::Z)
    ]
}

fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
        "norm too small",
        |pairs| {
            let amps = pairs
                .iter()
                .map(|&(re, im)| num_complex::Complex64::new(re, im))
                .collect();
            StateVector::from_amplitudes(amps).ok()
        },
    )
}

proptest! {
    #[test]
    fn pauli_square_is_phase_squared(letters in proptest::collection::vec(arb_pauli(), 1..8),
                                     pow in 0u8..4) {
        let p = PauliString::new(letters.clone()).with_phase_pow(pow);
        let sq = p.multiply(&p);
        let identity = PauliString::identity(letters.len());
        prop_assert_eq!(sq.letters(), identity.letters());
        prop_assert_eq!(sq.phase_pow(), (2 * pow) % 4);
    }

    #[test]
    fn unitaries_preserve_norm(state in arb_state(3),
                               ops in proptest::collection::vec((0usize..3, 0usize..3, -3.2f64..3.2), 1..40)) {
        let mut s = state;
        for (kind, q, angle) in ops {
            match kind {
                0 => s.apply_rx(q, angle).unwrap(),
                1 => s.apply_ry(q, angle).unwrap(),
                _ => s.apply_rz(q, angle).unwrap(),
            }
            prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn rotations_compose_additively(state in arb_state(2), axis in 0usize..3,
                                    a in -3.2f64..3.2, b in -3.2f64..3.2) {
        let apply = |s: &mut StateVector, angle: f64| match axis {
            0 => s.apply_rx(0, angle).unwrap(),
            1 => s.apply_ry(0, angle).unwrap(),
            _ => s.apply_rz(0, angle).unwrap(),
        };
        let mut two = state.clone();
        apply(&mut two, b);
        apply(&mut two, a);
        let mut one = state;
        apply(&mut one, a + b);
        prop_assert!((two.fidelity_up_to_phase(&one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_operations_commute(state in arb_state(3), a in -3.2f64..3.2, b in -3.2f64..3.2) {
        let mut xy = state.clone();
        xy.apply_rx(0, a).unwrap();
        xy.apply_rz(2, b).unwrap();
        let mut yx = state;
        yx.apply_rz(2, b).unwrap();
        yx.apply_rx(0, a).unwrap();
        for (p, q) in xy.amplitudes().iter().zip(yx.amplitudes()) {
            prop_assert!((p - q).norm() <= 1e-14);
        }
    }

    #[test]
    fn word_decode_encode_round_trips(raw in any::<u16>()) {
        let word = ProgramWord(raw);
        prop_assert_eq!(ProgramWord::encode(word.decode()).unwrap(), word);
    }

    #[test]
    fn byproduct_updates_are_affine(m1 in proptest::collection::vec(any::<bool>(), 12),
                                    m2 in proptest::collection::vec(any::<bool>(), 12),
                                    bc in any::<(bool, bool)>(),
                                    bt in any::<(bool, bool)>()) {
        // the register delta produced by an outcome vector is independent
        // of the starting registers
        let m1: [bool; 12] = m1.try_into().unwrap();
        let m2: [bool; 12] = m2.try_into().unwrap();
        let zero = ByproductPair::default();
        let start_c = ByproductPair::new(bc.0, bc.1);
        let start_t = ByproductPair::new(bt.0, bt.1);
        for m in [m1, m2] {
            let (dc, dt) = cnot_byproduct(zero, zero, m);
            let (fc, ft) = cnot_byproduct(start_c, start_t, m);
            prop_assert_eq!(fc.x ^ start_c.x, dc.x);
            prop_assert_eq!(fc.z ^ start_c.z, dc.z);
            prop_assert_eq!(ft.x ^ start_t.x, dt.x);
            prop_assert_eq!(ft.z ^ start_t.z, dt.z);

            let u = u_byproduct(start_c, [m[0], m[1], m[2], m[3]]);
            let du = u_byproduct(zero, [m[0], m[1], m[2], m[3]]);
            prop_assert_eq!(u.x ^ start_c.x, du.x);
            prop_assert_eq!(u.z ^ start_c.z, du.z);
        }
        // commutation is an involution on the mixed bits
        let (cc, ct) = cnot_commutation(start_c, start_t);
        let (cc2, ct2) = cnot_commutation(cc, ct);
        prop_assert_eq!((cc2, ct2), (start_c, start_t));
    }

    #[test]
    fn controller_flip_diffs_are_base_independent(
        words in proptest::collection::vec(any::<u16>(), 6),
        base1 in proptest::collection::vec(any::<bool>(), 6),
        base2 in proptest::collection::vec(any::<bool>(), 6),
        flip_round in 0usize..6,
    ) {
        // single-row program with only store/constant C actions (no
        // commutation partners on one row)
        let words: Vec<ProgramWord> = words
            .into_iter()
            .map(|raw| {
                let mut f = ProgramWord(raw).decode();
                f.c &= 0b11101; // drop the commutation bit
                ProgramWord::encode(f).unwrap()
            })
            .collect();
        let image = single_row_image(&words);
        let run = |base: &[bool], flip: Option<usize>| {
            let mut m = vec![base.to_vec()];
            if let Some(k) = flip {
                m[0][k] = !m[0][k];
            }
            replay_controller(&image, &m).unwrap()
        };
        let diff = |a: &[TraceRecord], b: &[TraceRecord]| -> Vec<(bool, bool, bool, bool, bool)> {
            a.iter()
                .zip(b)
                .map(|(x, y)| (
                    x.s != y.s,
                    x.byproduct.x != y.byproduct.x,
                    x.byproduct.z != y.byproduct.z,
                    x.stored.x != y.stored.x,
                    x.stored.z != y.stored.z,
                ))
                .collect()
        };
        let d1 = diff(&run(&base1, None), &run(&base1, Some(flip_round)));
        let d2 = diff(&run(&base2, None), &run(&base2, Some(flip_round)));
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn compiled_rounds_add_up(layer_kinds in proptest::collection::vec(0usize..3, 0..5)) {
        let mut circuit = Circuit::new(2);
        let mut expected = 0usize;
        for kind in layer_kinds {
            let (gate, len) = match kind {
                0 => (GateSpec::OneQubit { row: 0, xi: 0.3, eta: -0.1, zeta: 0.9 }, 4),
                1 => (GateSpec::Cnot { control_row: 0, target_row: 1 }, 6),
                _ => (GateSpec::Identity { row: 1, length: 8 }, 8),
            };
            circuit.push_layer(vec![gate]).unwrap();
            expected += len;
        }
        let image = compile(&circuit).unwrap();
        prop_assert_eq!(image.total_rounds, expected);
        for row in &image.words {
            prop_assert_eq!(row.len(), expected);
        }
    }

    #[test]
    fn trace_files_round_trip(rounds in 0usize..5, n_qubits in 1usize..4,
                              seed in any::<u64>(),
                              bits in proptest::collection::vec(any::<u32>(), 0..60),
                              micros in proptest::collection::vec(-3_141_592i32..=3_141_592, 0..60)) {
        let mut records = Vec::new();
        let mut source = bits.iter().cycle();
        let mut angles = micros.iter().cycle();
        for round in 0..rounds {
            for row in 0..n_qubits {
                let r = *source.next().unwrap_or(&0);
                let micro = *angles.next().unwrap_or(&0);
                let theta: f64 = format!("{:.6}", f64::from(micro) * 1e-6).parse().unwrap();
                records.push(TraceRecord {
                    round,
                    row,
                    m: r & 1 != 0,
                    word: ProgramWord((r >> 8) as u16),
                    theta,
                    s: r & 2 != 0,
                    byproduct: ByproductPair::new(r & 4 != 0, r & 8 != 0),
                    stored: ByproductPair::new(r & 16 != 0, r & 32 != 0),
                });
            }
        }
        let trace = Trace { n_qubits, seed, rounds, records };
        prop_assert_eq!(Trace::read(&trace.write()).unwrap(), trace);
    }

    #[test]
    fn delay_line_is_monotone(f1 in 1e6f64..1e9, ratio in 1.01f64..10.0, neff in 1.0f64..4.0) {
        let p = PhotonicParams::with_mode_index(neff).unwrap();
        let l1 = delay_line_length(f1, &p).unwrap();
        let l2 = delay_line_length(f1 * ratio, &p).unwrap();
        prop_assert!(l2 < l1);
        let denser = PhotonicParams::with_mode_index(neff + 0.5).unwrap();
        prop_assert!(delay_line_length(f1, &denser).unwrap() < l1);
    }

    #[test]
    fn legality_never_improves_with_slower_analog(
        f in 5e7f64..5e8,
        phase_s in 10.0f64..200.0,
        window in 10.0f64..150.0,
        t_co in 0.0f64..5e-9,
        t_su in 0.0f64..5e-9,
        extra in 1e-12f64..5e-9,
    ) {
        let plan = ClockPlan::new(f, phase_s, phase_s + window).unwrap();
        let a = phase_legality(&plan, &TimingBudget::new(t_co, t_su, 1e-9).unwrap());
        let b = phase_legality(&plan, &TimingBudget::new(t_co + extra, t_su + extra, 1e-9).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(y.margin <= x.margin + 1e-18);
            if !x.pass {
                prop_assert!(!y.pass);
            }
        }
    }
}

fn single_row_image(words: &[ProgramWord]) -> mbqc::ProgramImage {
    mbqc::ProgramImage {
        n_rows: 1,
        total_rounds: words.len(),
        words: vec![words.to_vec()],
        theta: vec![vec![0.0; words.len()]],
        basis_xy: vec![vec![true; words.len()]],
        vertical_links: Vec::new(),
        readout_round: false,
    }
}
