//! First-order radio energy model.
//!
//! Transmitting `k` bits over `d` meters costs `E_elect*k + eps_fs*k*d^2`
//! below the crossover distance `d0 = sqrt(eps_fs / eps_mp)` and
//! `E_elect*k + eps_mp*k*d^4` at or above it. Receiving costs `E_elect*k`,
//! and aggregating costs `E_DA*k` per message.
//!
//! Node batteries are book-kept in whole femtojoules ([`Energy`]) so that
//! per-round audits balance exactly; the formulas themselves work in joules.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioParams {
    /// Electronics energy, J/bit.
    pub e_elect: f64,
    /// Data aggregation energy, J/bit/message.
    pub e_da: f64,
    /// Free-space amplifier, J/bit/m^2.
    pub eps_fs: f64,
    /// Multipath amplifier, J/bit/m^4.
    pub eps_mp: f64,
    pub packet_bits: u64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            e_elect: 50e-9,
            e_da: 5e-9,
            eps_fs: 10e-12,
            eps_mp: 0.0013e-12,
            packet_bits: 4000,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.e_elect, self.e_da, self.eps_fs, self.eps_mp]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !all_positive || self.packet_bits == 0 {
            return Err(SimError::config(format!("radio parameters must be positive: {self:?}")));
        }
        let d0 = self.crossover_distance();
        if !(d0.is_finite() && d0 > 0.0) {
            return Err(SimError::config("crossover distance is not finite"));
        }
        Ok(())
    }

    /// Free-space / multipath crossover distance in meters.
    pub fn crossover_distance(&self) -> f64 {
        (self.eps_fs / self.eps_mp).sqrt()
    }
}

/// Energy to transmit `bits` over `d` meters, in joules.
pub fn tx_energy(p: &RadioParams, bits: u64, d: f64) -> Result<f64> {
    if !d.is_finite() || d < 0.0 {
        return Err(SimError::Domain(format!("transmission distance must be >= 0, got {d}")));
    }
    let k = bits as f64;
    let amp = if d < p.crossover_distance() {
        p.eps_fs * k * d * d
    } else {
        p.eps_mp * k * d * d * d * d
    };
    Ok(p.e_elect * k + amp)
}

/// Energy to receive `bits`, in joules.
pub fn rx_energy(p: &RadioParams, bits: u64) -> f64 {
    p.e_elect * bits as f64
}

/// Energy to aggregate `n_messages` packets of `bits` each, in joules.
pub fn aggregation_energy(p: &RadioParams, bits: u64, n_messages: u64) -> f64 {
    p.e_da * bits as f64 * n_messages as f64
}

const FJ_PER_J: f64 = 1e15;

/// Battery quantity in whole femtojoules.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Energy(u64);

impl Energy {
    pub const ZERO: Energy = Energy(0);

    /// Rounds `joules` to the nearest femtojoule.
    pub fn from_joules(joules: f64) -> Self {
        debug_assert!(joules >= 0.0 && joules.is_finite());
        Energy((joules * FJ_PER_J).round() as u64)
    }

    pub const fn from_femtojoules(fj: u64) -> Self {
        Energy(fj)
    }

    pub const fn femtojoules(self) -> u64 {
        self.0
    }

    pub fn joules(self) -> f64 {
        self.0 as f64 / FJ_PER_J
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_sub(self, other: Energy) -> Option<Energy> {
        self.0.checked_sub(other.0).map(Energy)
    }

    pub fn times(self, n: u64) -> Energy {
        Energy(self.0 * n)
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        Energy(self.0 + rhs.0)
    }
}

impl AddAssign for Energy {
    fn add_assign(&mut self, rhs: Energy) {
        self.0 += rhs.0;
    }
}

impl Sum for Energy {
    fn sum<I: Iterator<Item = Energy>>(iter: I) -> Energy {
        iter.fold(Energy::ZERO, Add::add)
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} J", self.joules())
    }
}

/// Per-packet costs pre-quantized for one run.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CostTable {
    radio: RadioParams,
    rx: Energy,
    aggregate: Energy,
}

impl CostTable {
    pub(crate) fn new(radio: RadioParams) -> Self {
        let k = radio.packet_bits;
        CostTable {
            radio,
            rx: Energy::from_joules(rx_energy(&radio, k)),
            aggregate: Energy::from_joules(aggregation_energy(&radio, k, 1)),
        }
    }

    pub(crate) fn tx(&self, d: f64) -> Energy {
        // distances come from finite positions, so this cannot fail
        Energy::from_joules(tx_energy(&self.radio, self.radio.packet_bits, d).unwrap_or(f64::INFINITY))
    }

    pub(crate) fn rx(&self) -> Energy {
        self.rx
    }

    pub(crate) fn aggregate(&self, messages: u64) -> Energy {
        self.aggregate.times(messages)
    }
}
