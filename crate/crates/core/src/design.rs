//! Inverse design of laser parameters for target entanglement, and the
//! entangling-power parameter sweep.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::analysis::{
    entangling_power_closed, makhlin_invariants, weyl_coordinates, WeylPoint, EP_MAX,
};
use crate::error::{Error, Result};
use crate::evolution::holonomy_gate;
use crate::pulses::{from_angular, AngularParams, PulseSet};

const FORWARD_CHECK_TOL: f64 = 1e-9;

/// Fix theta = pi/4 and zero phases; the design targets depend only on
/// sin^8(varphi) sin^4(2 theta), and theta = pi/4 exposes the full range
/// through varphi alone.
fn designed_params(omega: f64, varphi: f64) -> Result<AngularParams> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::DegenerateDrive);
    }
    AngularParams::real(omega, FRAC_PI_4, varphi)
}

/// Laser parameters whose holonomic gate has the requested entangling power.
pub fn design_for_entangling_power(target: f64, omega: f64) -> Result<AngularParams> {
    if !(0.0..=EP_MAX + 1e-15).contains(&target) {
        return Err(Error::OutOfRange {
            name: "target_ep",
            value: target,
            range: "[0, 2/9]",
        });
    }
    let s8 = (1.0 - target / EP_MAX).clamp(0.0, 1.0);
    let varphi = s8.powf(0.125).asin();
    let params = designed_params(omega, varphi)?;
    let inv = makhlin_invariants(holonomy_gate(&params)?.matrix())?;
    let achieved = entangling_power_closed(&inv);
    if (achieved - target).abs() > FORWARD_CHECK_TOL {
        return Err(Error::NumericalContract(format!(
            "designed entangling power {achieved} misses target {target}"
        )));
    }
    Ok(params)
}

/// Laser parameters whose holonomic gate sits at Weyl point (pi/2, c, c).
pub fn design_for_weyl_c(c: f64, omega: f64) -> Result<AngularParams> {
    if !(0.0..=FRAC_PI_2 + 1e-15).contains(&c) {
        return Err(Error::OutOfRange {
            name: "target_c",
            value: c,
            range: "[0, pi/2]",
        });
    }
    let varphi = c.sin().clamp(0.0, 1.0).sqrt().asin();
    let params = designed_params(omega, varphi)?;
    let weyl = weyl_coordinates(holonomy_gate(&params)?.matrix())?;
    let want = WeylPoint {
        c1: FRAC_PI_2,
        c2: c,
        c3: c,
    };
    if weyl.max_deviation(&want) > FORWARD_CHECK_TOL {
        return Err(Error::NumericalContract(format!(
            "designed Weyl point {weyl:?} misses target {want:?}"
        )));
    }
    Ok(params)
}

/// Laser parameters satisfying the perfect-entangler drive condition
/// |O0_1 O0_2| = omega^2 / (2 sqrt(2)), Weyl point (pi/2, pi/4, pi/4).
pub fn design_perfect_entangler(omega: f64) -> Result<AngularParams> {
    let params = design_for_weyl_c(FRAC_PI_4, omega)?;
    let pulses = from_angular(&params)?;
    let product = (pulses.omega0_1 * pulses.omega0_2).norm();
    let want = omega * omega / (2.0 * 2f64.sqrt());
    if (product - want).abs() > 1e-12 * omega * omega {
        return Err(Error::NumericalContract(format!(
            "perfect-entangler drive product {product} misses {want}"
        )));
    }
    Ok(params)
}

/// Free parameters for a drive-pattern table row: the overall scale plus
/// whichever of theta / varphi the row leaves free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRowParams {
    pub omega: f64,
    pub theta: f64,
    pub varphi: f64,
}

impl TableRowParams {
    pub fn scale_only(omega: f64) -> Self {
        Self {
            omega,
            theta: FRAC_PI_4,
            varphi: FRAC_PI_4,
        }
    }
}

/// Pulse set matching the zero/nonzero pattern of the given table row
/// (components (O0_1, O0_2, O1_2 - O1_1)):
/// row 1 (0,0,x), 2 (0,x,0), 3 (x,0,0), 4 (0,x,x), 5 (x,0,x),
/// 6 (x,x,0), 7 (x,x,x).
pub fn table_row_pulses(row: u8, free: &TableRowParams) -> Result<PulseSet> {
    if !(free.omega > 0.0) || !free.omega.is_finite() {
        return Err(Error::DegenerateDrive);
    }
    let interior = |name: &'static str, v: f64, hi: f64, range: &'static str| {
        if v > 0.0 && v < hi && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OutOfRange {
                name,
                value: v,
                range,
            })
        }
    };
    let angular = match row {
        1 => AngularParams::real(free.omega, 0.0, 0.0)?,
        2 => AngularParams::real(free.omega, FRAC_PI_2, FRAC_PI_2)?,
        3 => AngularParams::real(free.omega, 0.0, FRAC_PI_2)?,
        4 => AngularParams::real(
            free.omega,
            FRAC_PI_2,
            interior("varphi", free.varphi, FRAC_PI_2, "(0, pi/2)")?,
        )?,
        5 => AngularParams::real(
            free.omega,
            0.0,
            interior("varphi", free.varphi, FRAC_PI_2, "(0, pi/2)")?,
        )?,
        6 => {
            // the table's Weyl formula (pi/2, 2 theta, 2 theta) needs theta <= pi/4
            if free.theta > FRAC_PI_4 {
                return Err(Error::OutOfRange {
                    name: "theta",
                    value: free.theta,
                    range: "(0, pi/4]",
                });
            }
            AngularParams::real(
                free.omega,
                interior("theta", free.theta, FRAC_PI_2, "(0, pi/4]")?,
                FRAC_PI_2,
            )?
        }
        7 => AngularParams::real(
            free.omega,
            interior("theta", free.theta, FRAC_PI_2, "(0, pi/2)")?,
            interior("varphi", free.varphi, FRAC_PI_2, "(0, pi/2)")?,
        )?,
        _ => {
            return Err(Error::OutOfRange {
                name: "row",
                value: row as f64,
                range: "[1, 7]",
            })
        }
    };
    let pulses = from_angular(&angular)?;
    // the emitted set must actually realize the requested pattern
    let is_zero = |z: crate::C64| z.norm() <= 1e-12 * free.omega;
    let pattern = [
        is_zero(pulses.omega0_1),
        is_zero(pulses.omega0_2),
        is_zero(pulses.omega1_diff()),
    ];
    let want = match row {
        1 => [true, true, false],
        2 => [true, false, true],
        3 => [false, true, true],
        4 => [true, false, false],
        5 => [false, true, false],
        6 => [false, false, true],
        _ => [false, false, false],
    };
    if pattern != want {
        return Err(Error::PatternViolation(row));
    }
    Ok(pulses)
}

/// Grid over (theta, varphi) for the entangling-power sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub theta_range: (f64, f64),
    pub varphi_range: (f64, f64),
    pub n_theta: usize,
    pub n_varphi: usize,
}

impl Default for SweepGrid {
    /// One full period, 101 x 101 nodes.
    fn default() -> Self {
        Self {
            theta_range: (0.0, PI),
            varphi_range: (0.0, PI),
            n_theta: 101,
            n_varphi: 101,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [
            ("theta_range", self.theta_range),
            ("varphi_range", self.varphi_range),
        ] {
            if !(lo.is_finite() && hi.is_finite() && (0.0..=PI).contains(&lo) && lo <= hi)
                || !(0.0..=PI).contains(&hi)
            {
                return Err(Error::OutOfRange {
                    name,
                    value: lo,
                    range: "[0, pi] with lo <= hi",
                });
            }
        }
        for (name, n) in [("n_theta", self.n_theta), ("n_varphi", self.n_varphi)] {
            if n < 2 {
                return Err(Error::OutOfRange {
                    name,
                    value: n as f64,
                    range: "[2, inf)",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub theta: f64,
    pub varphi: f64,
    pub ep: f64,
}

/// Closed-form entangling power (2/9)(1 - sin^8(varphi) sin^4(2 theta)).
pub fn entangling_power_at(theta: f64, varphi: f64) -> f64 {
    EP_MAX * (1.0 - varphi.sin().powi(8) * (2.0 * theta).sin().powi(4))
}

/// Fold an angle from [0, pi] into [0, pi/2]; the entangling power is
/// invariant under this reflection in either argument.
fn fold(angle: f64) -> f64 {
    if angle > FRAC_PI_2 {
        PI - angle
    } else {
        angle
    }
}

/// Evaluate the entangling-power surface over the grid, row-major with
/// theta as the outer index. Every 8th node in each direction is
/// cross-checked against the full holonomy pipeline.
pub fn sweep_entangling_power(grid: &SweepGrid) -> Result<Vec<SweepRecord>> {
    grid.validate()?;
    let node = |i: usize, n: usize, (lo, hi): (f64, f64)| {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    };
    let mut records = Vec::with_capacity(grid.n_theta * grid.n_varphi);
    for i in 0..grid.n_theta {
        let theta = node(i, grid.n_theta, grid.theta_range);
        for j in 0..grid.n_varphi {
            let varphi = node(j, grid.n_varphi, grid.varphi_range);
            let ep = entangling_power_at(theta, varphi);
            if i % 8 == 0 && j % 8 == 0 {
                let params = AngularParams::real(1.0, fold(theta), fold(varphi))?;
                let inv = makhlin_invariants(holonomy_gate(&params)?.matrix())?;
                let pipeline_ep = entangling_power_closed(&inv);
                if (pipeline_ep - ep).abs() > FORWARD_CHECK_TOL {
                    return Err(Error::NumericalContract(format!(
                        "sweep node ({theta}, {varphi}): closed form {ep} vs pipeline {pipeline_ep}"
                    )));
                }
            }
            records.push(SweepRecord { theta, varphi, ep });
        }
    }
    Ok(records)
}
