//! Laser drive parametrizations: raw Rabi frequencies, the angular form,
//! and the Zeno-regime validity check.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// The four complex Rabi frequencies driving the two addressed atoms,
/// in angular-frequency units with hbar = 1.
///
/// `omega0_i` drives the |0> <-> |e> transition of atom `i`, `omega1_i`
/// the |1> <-> |e> transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSet {
    pub omega0_1: C64,
    pub omega0_2: C64,
    pub omega1_1: C64,
    pub omega1_2: C64,
}

impl PulseSet {
    pub fn new(omega0_1: C64, omega0_2: C64, omega1_1: C64, omega1_2: C64) -> Result<Self> {
        let p = Self {
            omega0_1,
            omega0_2,
            omega1_1,
            omega1_2,
        };
        p.validate()?;
        Ok(p)
    }

    /// Shorthand for real-valued drives given as (omega0_1, omega0_2, omega1_2 - omega1_1)
    /// with the atom-1 |1>-drive gauged to zero.
    pub fn from_real_triplet(omega0_1: f64, omega0_2: f64, omega1_diff: f64) -> Result<Self> {
        Self::new(
            C64::new(omega0_1, 0.0),
            C64::new(omega0_2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(omega1_diff, 0.0),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: C64| z.re.is_finite() && z.im.is_finite();
        if [self.omega0_1, self.omega0_2, self.omega1_1, self.omega1_2]
            .into_iter()
            .all(finite)
        {
            Ok(())
        } else {
            Err(Error::NonFinitePulse)
        }
    }

    /// Only the difference of the two |1>-drives enters the effective dynamics.
    pub fn omega1_diff(&self) -> C64 {
        self.omega1_2 - self.omega1_1
    }

    /// Effective drive frequency
    /// omega = sqrt(|O0_1|^2 + |O0_2|^2 + |O1_2 - O1_1|^2).
    pub fn effective_drive(&self) -> f64 {
        (self.omega0_1.norm_sqr() + self.omega0_2.norm_sqr() + self.omega1_diff().norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        [self.omega0_1, self.omega0_2, self.omega1_1, self.omega1_2]
            .into_iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Angular parametrization of a pulse set:
/// omega0_1 = omega e^{i phi1} sin(varphi) cos(theta),
/// omega0_2 = omega e^{i phi2} sin(varphi) sin(theta),
/// omega1_2 - omega1_1 = omega e^{i phi3} cos(varphi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularParams {
    /// Effective drive frequency, nonnegative.
    pub omega: f64,
    /// theta in [0, pi/2].
    pub theta: f64,
    /// varphi in [0, pi/2].
    pub varphi: f64,
    /// Phases in [0, 2 pi).
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

impl AngularParams {
    pub fn new(omega: f64, theta: f64, varphi: f64, phi1: f64, phi2: f64, phi3: f64) -> Result<Self> {
        let p = Self {
            omega,
            theta,
            varphi,
            phi1,
            phi2,
            phi3,
        };
        p.validate()?;
        Ok(p)
    }

    /// Angles only, phases zero.
    pub fn real(omega: f64, theta: f64, varphi: f64) -> Result<Self> {
        Self::new(omega, theta, varphi, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let check = |name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str| {
            if value.is_finite() && (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(Error::OutOfRange { name, value, range })
            }
        };
        check("omega", self.omega, 0.0, f64::INFINITY, "[0, inf)")?;
        if !self.omega.is_finite() {
            return Err(Error::OutOfRange {
                name: "omega",
                value: self.omega,
                range: "[0, inf)",
            });
        }
        check("theta", self.theta, 0.0, half_pi, "[0, pi/2]")?;
        check("varphi", self.varphi, 0.0, half_pi, "[0, pi/2]")?;
        for (name, v) in [("phi1", self.phi1), ("phi2", self.phi2), ("phi3", self.phi3)] {
            if !v.is_finite() || !(0.0..TAU).contains(&v) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "[0, 2pi)",
                });
            }
        }
        Ok(())
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        self.validate()?;
        if self.omega > 0.0 {
            Ok(())
        } else {
            Err(Error::DegenerateDrive)
        }
    }
}

/// Invert the angular parametrization.
///
/// Degenerate angles are resolved canonically: if sin(varphi) = 0 then
/// theta = phi1 = phi2 = 0; if cos(varphi) = 0 then phi3 = 0; if
/// sin(theta) = 0 (resp. cos(theta) = 0) then phi2 = 0 (resp. phi1 = 0).
pub fn to_angular(pulses: &PulseSet) -> Result<AngularParams> {
    pulses.validate()?;
    let omega = pulses.effective_drive();
    if omega <= 0.0 {
        return Err(Error::DegenerateDrive);
    }
    let a1 = pulses.omega0_1.norm();
    let a2 = pulses.omega0_2.norm();
    let ad = pulses.omega1_diff().norm();

    let sin_varphi = (a1 * a1 + a2 * a2).sqrt() / omega;
    let cos_varphi = ad / omega;
    let varphi = sin_varphi.atan2(cos_varphi);

    let (theta, phi1, phi2) = if sin_varphi == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        let theta = a2.atan2(a1);
        let phi1 = if a1 == 0.0 {
            0.0
        } else {
            pulses.omega0_1.arg().rem_euclid(TAU)
        };
        let phi2 = if a2 == 0.0 {
            0.0
        } else {
            pulses.omega0_2.arg().rem_euclid(TAU)
        };
        (theta, phi1, phi2)
    };
    let phi3 = if ad == 0.0 {
        0.0
    } else {
        pulses.omega1_diff().arg().rem_euclid(TAU)
    };

    AngularParams::new(omega, theta, varphi, phi1, phi2, phi3)
}

/// Emit the pulse set for a set of angular parameters, gauging
/// `omega1_1 = 0` (only the difference of the |1>-drives is physical).
pub fn from_angular(params: &AngularParams) -> Result<PulseSet> {
    params.validate()?;
    let phase = |p: f64| C64::new(0.0, p).exp();
    let w = params.omega;
    PulseSet::new(
        phase(params.phi1) * (w * params.varphi.sin() * params.theta.cos()),
        phase(params.phi2) * (w * params.varphi.sin() * params.theta.sin()),
        C64::new(0.0, 0.0),
        phase(params.phi3) * (w * params.varphi.cos()),
    )
}

/// Atom-cavity coupling `g` and cavity decay rate `kappa` defining the
/// quantum-Zeno validity scale min(kappa, g^2/kappa), plus the dimensionless
/// threshold the drive amplitudes must stay below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoRegime {
    pub g: f64,
    pub kappa: f64,
    pub threshold: f64,
}

impl ZenoRegime {
    pub const DEFAULT_THRESHOLD: f64 = 0.1;

    pub fn new(g: f64, kappa: f64, threshold: f64) -> Result<Self> {
        let r = Self { g, kappa, threshold };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidRegime(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidRegime(format!(
                "g must be nonnegative, got {}",
                self.g
            )));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidRegime(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        Ok(())
    }

    /// The scale the Rabi amplitudes are compared against.
    pub fn zeno_scale(&self) -> f64 {
        self.kappa.min(self.g * self.g / self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoReport {
    /// max |Omega| / min(kappa, g^2/kappa).
    pub ratio: f64,
    pub valid: bool,
}

/// Check that the drive amplitudes are small enough for the Zeno projection
/// onto the decoherence-free subspace to be physically justified.
pub fn zeno_regime_check(pulses: &PulseSet, regime: &ZenoRegime) -> Result<ZenoReport> {
    pulses.validate()?;
    regime.validate()?;
    let ratio = pulses.max_abs() / regime.zeno_scale();
    Ok(ZenoReport {
        ratio,
        valid: ratio < regime.threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn non_finite_pulse_rejected() {
        assert!(PulseSet::new(c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(PulseSet::new(c(0.0, f64::INFINITY), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn effective_drive_uses_only_the_difference() {
        let p = PulseSet::new(c(0.0, 0.0), c(0.0, 0.0), c(0.7, 0.0), c(0.7, 0.0)).unwrap();
        assert_eq!(p.effective_drive(), 0.0);
    }

    #[test]
    fn to_angular_symmetric_real_drive() {
        let p = PulseSet::from_real_triplet(1.0, 1.0, 0.0).unwrap();
        let a = to_angular(&p).unwrap();
        assert_abs_diff_eq!(a.omega, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(a.varphi, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(a.theta, FRAC_PI_4, epsilon = 1e-15);
        assert_eq!((a.phi1, a.phi2, a.phi3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn to_angular_pure_difference_drive() {
        let p = PulseSet::from_real_triplet(0.0, 0.0, 0.3).unwrap();
        let a = to_angular(&p).unwrap();
        assert_abs_diff_eq!(a.omega, 0.3, epsilon = 1e-15);
        assert_eq!(a.varphi, 0.0);
        assert_eq!(a.theta, 0.0);
        assert_eq!((a.phi1, a.phi2, a.phi3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn to_angular_imaginary_single_drive() {
        let p = PulseSet::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let a = to_angular(&p).unwrap();
        assert_abs_diff_eq!(a.omega, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.varphi, FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(a.theta, 0.0);
        assert_abs_diff_eq!(a.phi1, FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(a.phi2, 0.0);
        assert_eq!(a.phi3, 0.0);
    }

    #[test]
    fn to_angular_zero_drive_fails() {
        let p = PulseSet::from_real_triplet(0.0, 0.0, 0.0).unwrap();
        assert!(matches!(to_angular(&p), Err(Error::DegenerateDrive)));
    }

    #[test]
    fn from_angular_examples() {
        let a = AngularParams::real(2f64.sqrt(), FRAC_PI_4, FRAC_PI_2).unwrap();
        let p = from_angular(&a).unwrap();
        assert_abs_diff_eq!(p.omega0_1.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.omega0_2.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.omega1_diff().norm(), 0.0, epsilon = 1e-15);

        let a = AngularParams::new(1.0, 0.0, FRAC_PI_2, FRAC_PI_2, 0.0, 0.0).unwrap();
        let p = from_angular(&a).unwrap();
        assert_abs_diff_eq!((p.omega0_1 - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.omega0_2.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zeno_check_examples() {
        let regime = ZenoRegime::new(1.0, 1.0, 0.1).unwrap();
        let small = PulseSet::from_real_triplet(0.01, 0.0, 0.0).unwrap();
        let rep = zeno_regime_check(&small, &regime).unwrap();
        assert_abs_diff_eq!(rep.ratio, 0.01, epsilon = 1e-15);
        assert!(rep.valid);

        let big = PulseSet::from_real_triplet(0.5, 0.0, 0.0).unwrap();
        assert!(!zeno_regime_check(&big, &regime).unwrap().valid);

        let regime = ZenoRegime::new(2.0, 8.0, 0.1).unwrap();
        assert_abs_diff_eq!(regime.zeno_scale(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn zeno_invalid_kappa() {
        assert!(ZenoRegime::new(1.0, 0.0, 0.1).is_err());
        assert!(ZenoRegime::new(1.0, -1.0, 0.1).is_err());
        assert!(ZenoRegime::new(1.0, 1.0, 1.5).is_err());
    }

    proptest! {
        // Non-degenerate interior parameters survive the round trip.
        #[test]
        fn angular_round_trip(
            omega in 1e-3..10.0f64,
            theta in 1e-3..(FRAC_PI_2 - 1e-3),
            varphi in 1e-3..(FRAC_PI_2 - 1e-3),
            phi1 in 1e-3..(2.0 * PI - 1e-3),
            phi2 in 1e-3..(2.0 * PI - 1e-3),
            phi3 in 1e-3..(2.0 * PI - 1e-3),
        ) {
            let a = AngularParams::new(omega, theta, varphi, phi1, phi2, phi3).unwrap();
            let back = to_angular(&from_angular(&a).unwrap()).unwrap();
            prop_assert!((back.omega - a.omega).abs() < 1e-12 * omega.max(1.0));
            prop_assert!((back.theta - a.theta).abs() < 1e-12);
            prop_assert!((back.varphi - a.varphi).abs() < 1e-12);
            for (x, y) in [(back.phi1, a.phi1), (back.phi2, a.phi2), (back.phi3, a.phi3)] {
                let d = (x - y).abs();
                prop_assert!(d.min(TAU - d) < 1e-10);
            }
        }
    }
}
