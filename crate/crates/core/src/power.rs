//! From a beacon's power budget to its radiated transmit power.

use serde::{Deserialize, Serialize};

use crate::schemes::SchemeKind;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    /// Budgeted power per beacon, W.
    pub budget: f64,
    /// Power amplifier efficiency.
    pub amp_efficiency: f64,
    /// Fixed circuit consumption, W.
    pub circuit: f64,
    /// Base-band consumption of one RF chain, W.
    pub rf_chain: f64,
}

impl PowerBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.budget > 0.0 && self.budget.is_finite()) {
            return Err(Error::invalid("budget", "must be finite and > 0"));
        }
        if !(self.amp_efficiency > 0.0 && self.amp_efficiency <= 1.0) {
            return Err(Error::invalid("amp_efficiency", "must lie in (0, 1]"));
        }
        if !(self.circuit >= 0.0 && self.circuit.is_finite()) {
            return Err(Error::invalid("circuit", "must be finite and >= 0"));
        }
        if !(self.rf_chain >= 0.0 && self.rf_chain.is_finite()) {
            return Err(Error::invalid("rf_chain", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Servo motor driving the RAB rotation through PWM pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorParams {
    /// Pulse width that homes the shaft at -pi/2, s.
    pub pulse_min: f64,
    /// Pulse width for the shaft at +pi/2, s.
    pub pulse_max: f64,
    /// PWM period, s.
    pub duty_cycle: f64,
    pub supply_voltage: f64,
    pub working_current: f64,
    /// Normalized transmission block, s.
    pub block: f64,
}

impl Default for MotorParams {
    /// Micro SG90 hobby servo on a 1 s block.
    fn default() -> Self {
        MotorParams {
            pulse_min: 1e-3,
            pulse_max: 2e-3,
            duty_cycle: 20e-3,
            supply_voltage: 5.0,
            working_current: 0.25,
            block: 1.0,
        }
    }
}

impl MotorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.pulse_min > 0.0) {
            return Err(Error::invalid("pulse_min", "must be > 0"));
        }
        if !(self.pulse_max > self.pulse_min) {
            return Err(Error::invalid("pulse_max", "must exceed pulse_min"));
        }
        if !(self.duty_cycle >= self.pulse_max) {
            return Err(Error::invalid("duty_cycle", "must be >= pulse_max"));
        }
        if !(self.supply_voltage > 0.0) {
            return Err(Error::invalid("supply_voltage", "must be > 0"));
        }
        if !(self.working_current > 0.0) {
            return Err(Error::invalid("working_current", "must be > 0"));
        }
        if !(self.block >= self.duty_cycle && self.block.is_finite()) {
            return Err(Error::invalid("block", "must be finite and >= duty_cycle"));
        }
        Ok(())
    }

    /// Width of the pulse that drives rotation step `step` of `q`.
    pub fn pulse_width(&self, step: usize, q: usize) -> f64 {
        self.pulse_min + step as f64 * (self.pulse_max - self.pulse_min) / q as f64
    }
}

/// Ideal system: the whole budget is radiated.
pub fn transmit_power_ideal(budget: &PowerBudget) -> f64 {
    budget.budget
}

// Sums like 10 - 165 * 0.06 - 0.1 land a few ulps off zero; treat them as zero.
fn positive_or_deficit(available: f64, scale: f64) -> Result<f64> {
    if available > 1e-12 * scale {
        Ok(available)
    } else {
        Err(Error::InsufficientBudget {
            available,
            deficit: -available,
        })
    }
}

/// Practical system for the single-motor-free schemes. AA_IS pays one RF
/// chain per antenna; the others run a single chain.
pub fn transmit_power_practical(budget: &PowerBudget, scheme: SchemeKind, q: usize) -> Result<f64> {
    budget.validate()?;
    let chains = match scheme {
        SchemeKind::AaIs => q as f64,
        SchemeKind::Sa | SchemeKind::AaSsI | SchemeKind::AaSsII => 1.0,
        SchemeKind::Rab => {
            return Err(Error::invalid(
                "scheme",
                "RAB power goes through transmit_power_rab",
            ));
        }
        SchemeKind::FullCsi => return Err(Error::NotImplemented("the FULL_CSI precoder")),
    };
    let available =
        budget.amp_efficiency * (budget.budget - chains * budget.rf_chain - budget.circuit);
    positive_or_deficit(available, budget.budget)
}

/// Average servo power over a block: the homing pulse plus one pulse per
/// rotation step, each repeated at the PWM rate.
pub fn motor_power(motor: &MotorParams, q: usize) -> Result<f64> {
    motor.validate()?;
    if q < 2 {
        return Err(Error::SchemeConstraint(format!(
            "the rotating array needs >= 2 antennas, got {q}"
        )));
    }
    let qf = q as f64;
    let pulses = (qf + 1.0) * (motor.pulse_min + (motor.pulse_max - motor.pulse_min) / 2.0);
    Ok(pulses / motor.duty_cycle * motor.supply_voltage * motor.working_current)
}

/// Largest number of rotation steps that fits in one block.
pub fn rab_max_antennas(motor: &MotorParams) -> usize {
    // guard against 1.0 / 0.02 = 49.999...
    let ratio = motor.block / motor.duty_cycle;
    (ratio * (1.0 + 1e-12)).floor() as usize
}

pub fn transmit_power_rab(budget: &PowerBudget, motor: &MotorParams, q: usize) -> Result<f64> {
    budget.validate()?;
    let max = rab_max_antennas(motor);
    if q > max {
        return Err(Error::SchemeConstraint(format!(
            "{q} rotation steps do not fit in one block; at most {max}"
        )));
    }
    let motor_w = motor_power(motor, q)?;
    let available = budget.amp_efficiency * (budget.budget - budget.rf_chain - motor_w);
    positive_or_deficit(available, budget.budget)
}

/// Which consumption model maps the budget to transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerSystem {
    #[default]
    Ideal,
    Practical,
}

/// Transmit power of one beacon running `scheme` on `q` antennas.
pub fn transmit_power(
    system: PowerSystem,
    budget: &PowerBudget,
    motor: &MotorParams,
    scheme: SchemeKind,
    q: usize,
) -> Result<f64> {
    scheme.check(q)?;
    match (system, scheme) {
        (PowerSystem::Ideal, _) => {
            budget.validate()?;
            Ok(transmit_power_ideal(budget))
        }
        (PowerSystem::Practical, SchemeKind::Rab) => transmit_power_rab(budget, motor, q),
        (PowerSystem::Practical, _) => transmit_power_practical(budget, scheme, q),
    }
}
