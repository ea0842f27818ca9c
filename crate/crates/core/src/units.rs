//! Conversion between SI inputs and the internal natural units.
//!
//! Internally ħ = 1, rates are measured in units of the half-linewidth γ and
//! lengths in units of the resonant absorption length `L_abs = c γ / g²n`.
//! Raw SI rates span more than ten orders of magnitude; this keeps all
//! intermediate quantities close to unity.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalUnits {
    /// Rate unit γ in rad/s.
    pub rate: f64,
    /// Length unit L_abs in m.
    pub length: f64,
}

impl NaturalUnits {
    pub fn new(gamma: f64, g_sqrt_n: f64, c: f64) -> Self {
        NaturalUnits {
            rate: gamma,
            length: c * gamma / (g_sqrt_n * g_sqrt_n),
        }
    }

    pub fn time(&self) -> f64 {
        1.0 / self.rate
    }

    pub fn rate_to_natural(&self, x: f64) -> f64 {
        x / self.rate
    }
    pub fn rate_to_si(&self, x: f64) -> f64 {
        x * self.rate
    }
    pub fn length_to_natural(&self, x: f64) -> f64 {
        x / self.length
    }
    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length
    }
    pub fn wavenumber_to_natural(&self, k: f64) -> f64 {
        k * self.length
    }
    pub fn velocity_to_natural(&self, v: f64) -> f64 {
        v / (self.length * self.rate)
    }
    pub fn velocity_to_si(&self, v: f64) -> f64 {
        v * self.length * self.rate
    }
    /// Mass carries units of time / length² when ħ = 1.
    pub fn mass_to_si(&self, m: f64) -> f64 {
        m / (self.rate * self.length * self.length)
    }
    pub fn mass_to_natural(&self, m: f64) -> f64 {
        m * self.rate * self.length * self.length
    }
    /// C₆ carries units of rate × length⁶.
    pub fn c6_to_natural(&self, c6: f64) -> f64 {
        c6 / (self.rate * self.length.powi(6))
    }
    pub fn time_to_natural(&self, t: f64) -> f64 {
        t * self.rate
    }
    pub fn time_to_si(&self, t: f64) -> f64 {
        t / self.rate
    }
}
