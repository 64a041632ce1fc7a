//! Dual-simulation sweep: run random circuits through the cluster
//! simulator and check the corrected output against the gate model.
//!
//! ```bash
//! cargo run --release --example equivalence_sweep
//! ```

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mbqc::simulator::verify_equivalence;
use mbqc::{Circuit, GateSpec};

fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n_rows = rng.gen_range(1..=4usize);
    let mut circuit = Circuit::new(n_rows);
    for _ in 0..rng.gen_range(1..=4usize) {
        let kind = rng.gen_range(0..3);
        let gate = if kind == 0 || n_rows == 1 {
            GateSpec::OneQubit {
                row: rng.gen_range(0..n_rows),
                xi: rng.gen_range(-PI..PI),
                eta: rng.gen_range(-PI..PI),
                zeta: rng.gen_range(-PI..PI),
            }
        } else if kind == 1 {
            let upper = rng.gen_range(0..n_rows - 1);
            GateSpec::Cnot {
                control_row: upper,
                target_row: upper + 1,
            }
        } else {
            GateSpec::Identity {
                row: rng.gen_range(0..n_rows),
                length: 2 * rng.gen_range(1..=3usize),
            }
        };
        circuit.push_layer(vec![gate]).expect("rows are valid");
    }
    circuit
}

fn main() -> mbqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 1.0f64;
    for index in 0..50 {
        let circuit = random_circuit(&mut rng);
        let seeds: Vec<u64> = (0..4).map(|k| index * 10 + k).collect();
        let report = verify_equivalence(&circuit, &seeds)?;
        worst = worst.min(report.min_fidelity);
        println!(
            "circuit {index:2}: rows={} layers={} min fidelity {:.12}",
            circuit.n_rows,
            circuit.layers.len(),
            report.min_fidelity
        );
    }
    println!("\nworst fidelity over the sweep: {worst:.12}");
    assert!(worst >= 1.0 - 1e-9);
    Ok(())
}
