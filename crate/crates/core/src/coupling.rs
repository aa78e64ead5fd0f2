//! Scalar coupling functions between two parallel Hertzian dipoles and the
//! self impedance of a single dipole.
//!
//! The mutual impedance of two dipoles at electrical distance `x = kd` is
//! `Z_mn = R_nn f(x)` with
//!
//! ```text
//! f(x) = 3/2 e^{-jx} (j/x + 1/x² - j/x³)
//! ```
//!
//! The mid and far approximations keep only the first two terms and the
//! first term respectively.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;

/// Impedance of free space in ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730313668;

/// Smallest electrical distance accepted by the coupling functions.
pub const MIN_ELECTRICAL_DISTANCE: f64 = 1e-8;

/// Which coupling function is used for the off-diagonal matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingModel {
    /// Exact Hertzian coupling `f`.
    Hertzian,
    /// `f_mid`: drops the `1/x³` term.
    Mid,
    /// `f_far`: keeps only the `1/x` term.
    Far,
}

impl CouplingModel {
    pub const ALL: [CouplingModel; 3] = [Self::Hertzian, Self::Mid, Self::Far];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hertzian => "hertzian",
            Self::Mid => "mid",
            Self::Far => "far",
        }
    }
}

impl core::str::FromStr for CouplingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hertzian" | "exact" => Ok(Self::Hertzian),
            "mid" => Ok(Self::Mid),
            "far" => Ok(Self::Far),
            _ => Err(Error::InvalidSpec("model must be one of hertzian, mid, far")),
        }
    }
}

impl core::fmt::Display for CouplingModel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_argument(x: f64) -> Result<(), Error> {
    if x.is_finite() && x >= MIN_ELECTRICAL_DISTANCE {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "electrical distance",
            value: x,
            min: MIN_ELECTRICAL_DISTANCE,
        })
    }
}

/// Real part of the Hertzian coupling, `Ψ(x)`.
pub fn psi(x: f64) -> Result<f64, Error> {
    check_argument(x)?;
    let (s, c) = (libm::sin(x), libm::cos(x));
    Ok(1.5 * (s / x + c / (x * x) - s / (x * x * x)))
}

/// Imaginary part of the Hertzian coupling, `Φ(x)`.
pub fn phi(x: f64) -> Result<f64, Error> {
    check_argument(x)?;
    let (s, c) = (libm::sin(x), libm::cos(x));
    Ok(1.5 * (c / x - s / (x * x) - c / (x * x * x)))
}

/// Normalized mutual coupling `f_model(x)` at electrical distance `x`.
pub fn coupling_value(model: CouplingModel, x: f64) -> Result<Complex64, Error> {
    check_argument(x)?;
    Ok(coupling_unchecked(model, x))
}

// One sin/cos pair: e^{-jx} times the bracketed polynomial in 1/x.
pub(crate) fn coupling_unchecked(model: CouplingModel, x: f64) -> Complex64 {
    let (s, c) = (libm::sin(x), libm::cos(x));
    let inv = 1.0 / x;
    let (re, im) = match model {
        CouplingModel::Far => (0.0, inv),
        CouplingModel::Mid => (inv * inv, inv),
        CouplingModel::Hertzian => (inv * inv, inv - inv * inv * inv),
    };
    // (c - js)(re + j im)
    Complex64::new(1.5 * (c * re + s * im), 1.5 * (c * im - s * re))
}

/// Physical inputs of the single-dipole self impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfImpedanceParams {
    wavelength: f64,
    dipole_length: f64,
    field_distance: Option<f64>,
}

impl SelfImpedanceParams {
    /// All lengths in meters. `field_distance` is the `r` of the reactive
    /// term; leave it out to get the purely resistive `Z_nn = R_nn`.
    pub fn new(wavelength: f64, dipole_length: f64, field_distance: Option<f64>) -> Result<Self, Error> {
        positive("wavelength", wavelength)?;
        positive("dipole length", dipole_length)?;
        if let Some(r) = field_distance {
            positive("field distance", r)?;
        }
        Ok(Self {
            wavelength,
            dipole_length,
            field_distance,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn dipole_length(&self) -> f64 {
        self.dipole_length
    }

    pub fn field_distance(&self) -> Option<f64> {
        self.field_distance
    }

    pub fn wave_number(&self) -> f64 {
        2.0 * PI / self.wavelength
    }
}

fn positive(what: &'static str, value: f64) -> Result<(), Error> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value, min: 0.0 })
    }
}

/// Self impedance `R_nn + j X_nn` in ohms.
pub fn self_impedance(params: &SelfImpedanceParams) -> Complex64 {
    let ratio = params.dipole_length / params.wavelength;
    let resistance = FREE_SPACE_IMPEDANCE * (2.0 * PI / 3.0) * ratio * ratio;
    let reactance = match params.field_distance {
        Some(r) => {
            let kr = params.wave_number() * r;
            resistance / (kr * kr * kr)
        }
        None => 0.0,
    };
    Complex64::new(resistance, reactance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_at_pi() {
        let v = psi(PI).unwrap();
        assert!((v + 3.0 / (2.0 * PI * PI)).abs() < 1e-15);
        assert!((v + 0.151982).abs() < 1e-6);
    }

    #[test]
    fn psi_small_argument_limit() {
        // Taylor expansion: Ψ(x) = 1 - x²/5 + O(x⁴)
        let x = 1e-3;
        assert!((psi(x).unwrap() - (1.0 - 0.2 * x * x)).abs() < 1e-9);
    }

    #[test]
    fn phi_at_half_pi() {
        let v = phi(PI / 2.0).unwrap();
        assert!((v + 6.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn phi_small_argument_dominated_by_cubic_term() {
        let x = 1e-3;
        let lead = -1.5 / (x * x * x);
        assert!(((phi(x).unwrap() - lead) / lead).abs() < 1e-5);
    }

    #[test]
    fn phi_at_two_pi() {
        // sin 2π = 0, cos 2π = 1
        let x = 2.0 * PI;
        let expected = 1.5 * (1.0 / x - 1.0 / (x * x * x));
        assert!((phi(x).unwrap() - expected).abs() < 1e-15);
        assert!((phi(x).unwrap() - 0.2326853).abs() < 1e-7);
    }

    #[test]
    fn far_at_half_pi_is_real() {
        let v = coupling_value(CouplingModel::Far, PI / 2.0).unwrap();
        assert!((v.re - 3.0 / PI).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn far_reproduces_printed_entries() {
        let cases = [
            (5.1373, Complex64::new(-0.266018, 0.120367)),
            (1.59932, Complex64::new(0.937517, -0.0267487)),
            (5.1373 + 1.59932, Complex64::new(0.0975391, 0.200163)),
        ];
        for (x, expected) in cases {
            let v = coupling_value(CouplingModel::Far, x).unwrap();
            assert!((v - expected).norm() < 1e-6, "x = {x}: {v}");
        }
    }

    #[test]
    fn hertzian_minus_mid_is_cubic_term() {
        for x in [0.3, 1.0, 4.1, 17.5] {
            let diff = coupling_value(CouplingModel::Hertzian, x).unwrap()
                - coupling_value(CouplingModel::Mid, x).unwrap();
            let expected = Complex64::new(0.0, -1.5) * Complex64::new(0.0, -x).exp() / (x * x * x);
            assert!((diff - expected).norm() < 1e-14 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        for x in [0.0, -1.0, 1e-9, f64::NAN, f64::INFINITY] {
            assert!(psi(x).is_err());
            assert!(phi(x).is_err());
            assert!(coupling_value(CouplingModel::Mid, x).is_err());
        }
    }

    #[test]
    fn self_impedance_resistive() {
        let p = SelfImpedanceParams::new(1.0, 0.01, None).unwrap();
        let z = self_impedance(&p);
        // 376.730313668 · (2π/3) · 1e-4
        assert!((z.re - 0.078_902_212_386_931).abs() < 1e-12);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn self_impedance_reactance_equals_resistance_at_unit_kr() {
        let wavelength = 2.0;
        let r = wavelength / (2.0 * PI);
        let p = SelfImpedanceParams::new(wavelength, 0.02, Some(r)).unwrap();
        let z = self_impedance(&p);
        assert!((z.im - z.re).abs() < 1e-15);
    }

    #[test]
    fn self_impedance_reactance_vanishes_far_away() {
        let p = SelfImpedanceParams::new(1.0, 0.01, Some(1e4)).unwrap();
        assert!(self_impedance(&p).im < 1e-15);
    }

    #[test]
    fn self_impedance_params_validated() {
        assert!(SelfImpedanceParams::new(0.0, 0.01, None).is_err());
        assert!(SelfImpedanceParams::new(1.0, -0.01, None).is_err());
        assert!(SelfImpedanceParams::new(1.0, 0.01, Some(0.0)).is_err());
    }

    #[test]
    fn model_names_round_trip() {
        for m in CouplingModel::ALL {
            assert_eq!(m.name().parse::<CouplingModel>().unwrap(), m);
        }
        assert!("near".parse::<CouplingModel>().is_err());
    }
}
