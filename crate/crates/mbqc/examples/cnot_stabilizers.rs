//! Check the two-row CNOT pattern against its stabilizer algebra: the
//! four correlation-operator product identities (with exact signs) and a
//! branch-by-branch run of the teleportation theorem.
//!
//! ```bash
//! cargo run --release --example cnot_stabilizers
//! ```

use mbqc::verifier::{
    check_correl_products, enumerate_branches, link_placements_satisfying_products, BranchMode,
};
use mbqc::StateVector;

fn main() -> mbqc::Result<()> {
    let report = check_correl_products()?;
    println!("correlation-operator products:");
    for eq in &report.equations {
        println!(
            "  {}: {} (expectation {:+.12}) {}",
            eq.label,
            eq.computed,
            eq.expectation,
            if eq.pass() { "pass" } else { "FAIL" }
        );
    }

    let placements = link_placements_satisfying_products()?;
    println!("\nvertical-link columns satisfying all four products: {placements:?}");

    let plus = StateVector::plus_state(2)?;
    let sampled = enumerate_branches(
        &plus,
        BranchMode::Sample {
            count: 256,
            seed: 1,
        },
    )?;
    println!(
        "\nsampled branches on |++>: {} checked, {} passed, min fidelity {:.12}",
        sampled.branches.len(),
        sampled.branches.iter().filter(|b| b.pass).count(),
        sampled.min_fidelity
    );

    let full = enumerate_branches(&StateVector::basis_state(&[true, false])?, BranchMode::All)?;
    println!(
        "full enumeration on |10>: {} branches, {} skipped, probability sum {:.9}, min fidelity {:.12}",
        full.branches.len(),
        full.skipped_zero_probability,
        full.probability_sum,
        full.min_fidelity
    );
    Ok(())
}
