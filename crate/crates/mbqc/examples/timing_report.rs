//! Photonic timing budgets: delay-line length, analog slack, clock-phase
//! legality and pin-count scaling.
//!
//! ```bash
//! cargo run --example timing_report
//! ```

use mbqc::timing::{
    analog_budget, delay_line_length, phase_legality, pin_count, ClockPlan, PhotonicParams,
    TimingBudget,
};

fn main() -> mbqc::Result<()> {
    let params = PhotonicParams::default();

    println!("photonic clock sweep (mode index {}):", params.n_eff);
    for f in [100e6, 150e6, 190e6, 220e6] {
        println!(
            "  {:>4.0} MHz: period {:.3} ns, delay line {:.3} m",
            f / 1e6,
            1e9 / f,
            delay_line_length(f, &params)?
        );
    }

    // at 150 MHz the digital logic consumes 5.08 ns of the 6.67 ns period
    let slack = analog_budget(150e6, 5.08e-9)?;
    println!("\nanalog input+output budget at 150 MHz: {:.3} ns", slack * 1e9);

    // 190 MHz plan with the sample/reset phases at 220 and 300 degrees
    let plan = ClockPlan::new(190e6, 220.0, 300.0)?;
    let budget = TimingBudget::new(2.0e-9, 0.8e-9, 1.15e-9)?;
    println!("\nlegality at 190 MHz, phases 220/300 degrees:");
    for check in phase_legality(&plan, &budget) {
        println!(
            "  {:<20} required {:>8.3} ns, available {:>8.3} ns, margin {:>8.3} ns  {}",
            check.name,
            check.required * 1e9,
            check.available * 1e9,
            check.margin * 1e9,
            if check.pass { "pass" } else { "FAIL" }
        );
    }

    println!("\nI/O pads:");
    for rows in [1, 20, 600] {
        println!(
            "  {rows:>3} rows: {:>4} parallel, {:>4} serial-byproduct",
            pin_count(rows, false)?,
            pin_count(rows, true)?
        );
    }
    Ok(())
}
