//! Compile a small circuit into program words and basis-angle tables.
//!
//! ```bash
//! cargo run --example compile_program
//! ```

use mbqc::{compile, Circuit, GateSpec};

fn main() -> mbqc::Result<()> {
    // U(0.1, 0.2, 0.3) on row 0, then CNOT with row 0 as control; row 1 is
    // padded with an identity wire while the one-qubit gate runs.
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
    println!(
        "{} rows, {} rounds, vertical links at {:?}\n",
        image.n_rows, image.total_rounds, image.vertical_links
    );

    println!("program ROM:\n{}", image.rom_text());
    println!("angle table:\n{}", image.table_text());

    // every word decodes back into its mask fields
    let word = image.words[0][6];
    let fields = word.decode();
    println!(
        "word {word} decodes to C={:05b} A_b={:02b} A_m={:03b} B_x={:03b} B_z={:03b}",
        fields.c, fields.a_b, fields.a_m, fields.b_x, fields.b_z
    );
    Ok(())
}
