//! Closed-form timing budgets of the photonic control loop.
//!
//! The photonic clock period bounds everything the classical system does
//! between two photon arrivals: input amplification (clock-to-out `t_co`),
//! the internal sample-to-reset window between the `X_s` and `X_r` edges,
//! and the output setup `t_su` of the analog drive. Measured FPGA delays
//! are inputs here, not outputs; the module evaluates plan feasibility and
//! the derived photonic quantities.

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default waveguide mode index.
pub const DEFAULT_MODE_INDEX: f64 = 2.4;

/// Waveguide parameters for the delay line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonicParams {
    /// Effective mode index, >= 1.
    pub n_eff: f64,
    /// Speed of light, m/s.
    pub c: f64,
}

impl Default for PhotonicParams {
    fn default() -> Self {
        PhotonicParams {
            n_eff: DEFAULT_MODE_INDEX,
            c: SPEED_OF_LIGHT,
        }
    }
}

impl PhotonicParams {
    pub fn with_mode_index(n_eff: f64) -> Result<Self> {
        if n_eff < 1.0 || n_eff.is_nan() {
            return Err(Error::BadModeIndex(n_eff));
        }
        Ok(PhotonicParams {
            n_eff,
            ..PhotonicParams::default()
        })
    }
}

/// Photonic clock frequency with the internal clock phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockPlan {
    f_p: f64,
    phase_s_deg: f64,
    phase_r_deg: f64,
}

impl ClockPlan {
    /// 0 < phase_s < phase_r < 360 and f_p > 0.
    pub fn new(f_p: f64, phase_s_deg: f64, phase_r_deg: f64) -> Result<Self> {
        if f_p <= 0.0 || f_p.is_nan() {
            return Err(Error::NonPositiveFrequency(f_p));
        }
        if !(0.0 < phase_s_deg && phase_s_deg < phase_r_deg && phase_r_deg < 360.0) {
            return Err(Error::BadClockPhases {
                phase_s: phase_s_deg,
                phase_r: phase_r_deg,
            });
        }
        Ok(ClockPlan {
            f_p,
            phase_s_deg,
            phase_r_deg,
        })
    }

    pub fn frequency(&self) -> f64 {
        self.f_p
    }

    /// Photonic clock period T_p = 1 / f_p.
    pub fn period(&self) -> f64 {
        self.f_p.recip()
    }

    pub fn phase_s_deg(&self) -> f64 {
        self.phase_s_deg
    }

    pub fn phase_r_deg(&self) -> f64 {
        self.phase_r_deg
    }
}

/// Measured delay inputs: input clock-to-out, output setup, and the
/// internal X_s-to-X_r processing requirement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingBudget {
    pub t_co: f64,
    pub t_su: f64,
    pub t_internal: f64,
}

impl TimingBudget {
    pub fn new(t_co: f64, t_su: f64, t_internal: f64) -> Result<Self> {
        if t_co < 0.0 || t_su < 0.0 || t_internal < 0.0 {
            return Err(Error::NegativeBudget);
        }
        Ok(TimingBudget {
            t_co,
            t_su,
            t_internal,
        })
    }
}

/// Length of the delay line separating adjacent cluster columns:
/// c / (n_eff * f_p).
pub fn delay_line_length(f_p: f64, params: &PhotonicParams) -> Result<f64> {
    if f_p <= 0.0 || f_p.is_nan() {
        return Err(Error::NonPositiveFrequency(f_p));
    }
    if params.n_eff < 1.0 || params.n_eff.is_nan() {
        return Err(Error::BadModeIndex(params.n_eff));
    }
    Ok(params.c / (params.n_eff * f_p))
}

/// Time left for input and output analog processing once the logic has
/// taken `t_logic` of the period: 1/f_p - t_logic.
pub fn analog_budget(f_p: f64, t_logic: f64) -> Result<f64> {
    if f_p <= 0.0 || f_p.is_nan() {
        return Err(Error::NonPositiveFrequency(f_p));
    }
    let period = f_p.recip();
    if t_logic >= period {
        return Err(Error::InfeasibleBudget { t_logic, period });
    }
    Ok(period - t_logic)
}

/// One legality check with its margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegalityCheck {
    pub name: &'static str,
    pub required: f64,
    pub available: f64,
    pub margin: f64,
    pub pass: bool,
}

fn check(name: &'static str, required: f64, available: f64) -> LegalityCheck {
    let margin = available - required;
    LegalityCheck {
        name,
        required,
        available,
        margin,
        pass: margin >= 0.0,
    }
}

/// Evaluate a clock plan against measured delays. Violations are data,
/// not errors:
///
/// * `input_clock_to_out` - the latched measurement must settle before
///   X_s: t_co <= (phase_s / 360) T_p;
/// * `internal_window` - the X_s-to-X_r window covers the internal
///   processing: t_internal <= ((phase_r - phase_s) / 360) T_p;
/// * `reset_hold` - X_r lands before the next X_p with non-negative hold:
///   (1 - phase_r / 360) T_p >= 0;
/// * `analog_total` - input plus output analog time fits the period left
///   over by the internal window: t_co + t_su <= T_p - t_internal.
pub fn phase_legality(plan: &ClockPlan, budget: &TimingBudget) -> Vec<LegalityCheck> {
    let period = plan.period();
    let s_window = plan.phase_s_deg / 360.0 * period;
    let sr_window = (plan.phase_r_deg - plan.phase_s_deg) / 360.0 * period;
    let hold = period - plan.phase_r_deg / 360.0 * period;
    vec![
        check("input_clock_to_out", budget.t_co, s_window),
        check("internal_window", budget.t_internal, sr_window),
        check("reset_hold", 0.0, hold),
        check(
            "analog_total",
            budget.t_co + budget.t_su,
            period - budget.t_internal,
        ),
    ]
}

/// I/O pad count: 4N + 4 in the parallel design (per row: m, s and two
/// byproduct lines, plus clock, lock, reset and enable), or 2N when the
/// byproducts are read over a slow serial interface.
pub fn pin_count(n_rows: usize, serial_byproducts: bool) -> Result<usize> {
    if n_rows == 0 {
        return Err(Error::NoRows);
    }
    Ok(if serial_byproducts {
        2 * n_rows
    } else {
        4 * n_rows + 4
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delay_line_at_150_mhz() {
        let len = delay_line_length(150e6, &PhotonicParams::default()).unwrap();
        assert!((len - 0.833).abs() < 0.01, "length {len}");
    }

    #[test]
    fn delay_line_free_space_and_linearity() {
        let free = delay_line_length(150e6, &PhotonicParams::with_mode_index(1.0).unwrap())
            .unwrap();
        assert!((free - SPEED_OF_LIGHT / 150e6).abs() < 1e-9);
        let base = delay_line_length(150e6, &PhotonicParams::default()).unwrap();
        let double = delay_line_length(300e6, &PhotonicParams::default()).unwrap();
        assert!((double - base / 2.0).abs() < 1e-12);
    }

    #[test]
    fn delay_line_monotonicity() {
        let p = PhotonicParams::default();
        let mut prev = f64::INFINITY;
        for f in [50e6, 100e6, 150e6, 200e6, 400e6] {
            let len = delay_line_length(f, &p).unwrap();
            assert!(len < prev);
            prev = len;
        }
        let lo = delay_line_length(150e6, &PhotonicParams::with_mode_index(1.5).unwrap()).unwrap();
        let hi = delay_line_length(150e6, &PhotonicParams::with_mode_index(3.0).unwrap()).unwrap();
        assert!(hi < lo);
    }

    #[test]
    fn analog_budget_at_150_mhz() {
        let budget = analog_budget(150e6, 5.08e-9).unwrap();
        assert!((budget - 1.59e-9).abs() < 0.01e-9, "budget {budget}");
    }

    #[test]
    fn analog_budget_identity_and_bounds() {
        let f = 190e6;
        for t_logic in [0.0, 1e-9, 4e-9] {
            let b = analog_budget(f, t_logic).unwrap();
            assert_eq!(b + t_logic, f.recip());
        }
        assert!((analog_budget(150e6, 0.0).unwrap() - 150e6f64.recip()).abs() < 1e-18);
        let period = 150e6f64.recip();
        assert!(matches!(
            analog_budget(150e6, period),
            Err(Error::InfeasibleBudget { .. })
        ));
        assert!(matches!(
            analog_budget(0.0, 1e-9),
            Err(Error::NonPositiveFrequency(_))
        ));
    }

    #[test]
    fn internal_window_at_190_mhz() {
        // 80 degrees of a 190 MHz period; the module reports the computed
        // 1.170 ns rather than reconciling published rounding.
        let plan = ClockPlan::new(190e6, 220.0, 300.0).unwrap();
        let budget = TimingBudget::new(0.0, 0.0, 0.0).unwrap();
        let checks = phase_legality(&plan, &budget);
        let window = checks
            .iter()
            .find(|c| c.name == "internal_window")
            .unwrap()
            .available;
        assert!((window - 1.152e-9).abs() < 0.05e-9, "window {window}");
        assert!((window - (80.0 / 360.0) / 190e6).abs() < 1e-15);
    }

    #[test]
    fn equal_phases_are_rejected() {
        assert!(matches!(
            ClockPlan::new(150e6, 220.0, 220.0),
            Err(Error::BadClockPhases { .. })
        ));
    }

    #[test]
    fn generous_plan_passes_all_checks() {
        let plan = ClockPlan::new(100e6, 180.0, 300.0).unwrap();
        let budget = TimingBudget::new(0.0, 0.0, 0.0).unwrap();
        assert!(phase_legality(&plan, &budget).iter().all(|c| c.pass));
    }

    #[test]
    fn legality_is_monotone_in_tco_and_tsu() {
        let plan = ClockPlan::new(190e6, 220.0, 300.0).unwrap();
        let tight = TimingBudget::new(3.0e-9, 1.5e-9, 1.2e-9).unwrap();
        let tighter = TimingBudget::new(3.5e-9, 2.0e-9, 1.2e-9).unwrap();
        let a = phase_legality(&plan, &tight);
        let b = phase_legality(&plan, &tighter);
        for (x, y) in a.iter().zip(&b) {
            assert!(y.margin <= x.margin + 1e-18);
            if !x.pass {
                assert!(!y.pass);
            }
        }
    }

    #[test]
    fn pin_counts() {
        assert_eq!(pin_count(1, false).unwrap(), 8);
        assert_eq!(pin_count(20, false).unwrap(), 84);
        assert_eq!(pin_count(600, true).unwrap(), 1200);
        assert!(matches!(pin_count(0, false), Err(Error::NoRows)));
    }
}
