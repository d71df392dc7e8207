//! Physical constants (CODATA exact values) and model-wide fixed parameters.

/// Elementary charge, C.
pub const Q_E: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Avogadro constant, 1/mol.
pub const N_A: f64 = 6.022_140_76e23;
/// Vacuum permittivity, F/m.
pub const EPS_0: f64 = 8.854_187_812_8e-12;

/// Fraction of the dispersed bolus whose passage defines the pulse duration.
pub const BOLUS_CAPTURE_FRACTION: f64 = 0.99;
/// The pulse must last at least this many binding correlation times for the
/// equilibrium statistics to be trusted.
pub const EQUILIBRATION_MARGIN: f64 = 5.0;
/// SNR reported for a zero-mean signal, dB (keeps sweep output finite).
pub const SNR_FLOOR_DB: f64 = -400.0;
