//! Corrected-readout statistics: Monte Carlo over many seeded runs of one
//! circuit, compared against the gate model's Born probabilities.
//!
//! The x byproduct bits flip the final readout; the z bits shift phases
//! only and drop out of the distribution.
//!
//! ```bash
//! cargo run --release --example readout_statistics
//! ```

use mbqc::simulator::{corrected_readout, run_gate_model, run_mbqc};
use mbqc::{compile, Circuit, GateSpec};

fn main() -> mbqc::Result<()> {
    let mut circuit = Circuit::new(2);
    circuit.push_layer(vec![GateSpec::OneQubit {
        row: 0,
        xi: 0.1,
        eta: 0.2,
        zeta: 0.3,
    }])?;
    circuit.push_layer(vec![GateSpec::Cnot {
        control_row: 0,
        target_row: 1,
    }])?;
    let image = compile(&circuit)?;

    let reference = run_gate_model(&circuit)?;
    let born: Vec<f64> = reference.amplitudes().iter().map(|a| a.norm_sqr()).collect();

    let trials = 20_000u64;
    let mut counts = [0usize; 4];
    for seed in 0..trials {
        let run = run_mbqc(&image, seed, None)?;
        let bits = corrected_readout(&run.final_state, &run.byproducts, !seed)?;
        counts[(usize::from(bits[0]) << 1) | usize::from(bits[1])] += 1;
    }

    println!("outcome  gate-model p  corrected-readout frequency");
    for (index, &p) in born.iter().enumerate() {
        println!(
            "  |{}{}>     {:.6}      {:.6}",
            index >> 1,
            index & 1,
            p,
            counts[index] as f64 / trials as f64
        );
    }
    Ok(())
}
