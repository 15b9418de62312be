//! CODATA 2018 values in SI units.

/// Fundamental constants used by the material models and the force prefactors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Speed of light in vacuum [m/s].
    pub c: f64,
    /// Vacuum permittivity [F/m].
    pub eps0: f64,
    /// Elementary charge [C].
    pub electron_charge: f64,
    /// Electron rest mass [kg].
    pub electron_mass: f64,
}

pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    c: C,
    eps0: EPS0,
    electron_charge: ELECTRON_CHARGE,
    electron_mass: ELECTRON_MASS,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA
    }
}
