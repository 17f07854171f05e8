//! Physical constants (CODATA 2018, SI). Single definition site.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817_646_156_4e-34;

/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Mass of a ⁷Li atom, kg.
pub const LITHIUM_7_MASS: f64 = 7.016_003_436_6 * ATOMIC_MASS_UNIT;

/// Converts an ordinary frequency in Hz to angular frequency in rad/s.
pub fn hz_to_angular(f: f64) -> f64 {
    2.0 * std::f64::consts::PI * f
}
