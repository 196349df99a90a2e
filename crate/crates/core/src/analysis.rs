//! Two-qubit gate classification: Makhlin local invariants, entangling
//! power, Weyl-chamber coordinates, and a perfect-entangler oracle.

use nalgebra::{SMatrix, SVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};
use crate::evolution::holonomy_gate;
use crate::pulses::{from_angular, AngularParams, PulseSet};
use crate::{frobenius_unitarity_deviation, C64, Mat4};

const UNITARITY_TOL: f64 = 1e-10;
const IMAG_RESIDUE_TOL: f64 = 1e-10;
/// Tolerance used when matching Weyl points against named classes.
const CLASS_TOL: f64 = 1e-9;
/// Maximum entangling power of a two-qubit gate.
pub const EP_MAX: f64 = 2.0 / 9.0;

/// Makhlin local invariants (G1, G2) of a two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateInvariants {
    pub g1: C64,
    /// G2 is real for any unitary; stored after checking the residue.
    pub g2: f64,
}

/// Canonical Weyl-chamber point: pi >= c1 >= c2 >= c3 >= 0, c1 + c2 <= pi,
/// and c1 <= pi/2 whenever c3 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl WeylPoint {
    pub fn max_deviation(&self, other: &WeylPoint) -> f64 {
        (self.c1 - other.c1)
            .abs()
            .max((self.c2 - other.c2).abs())
            .max((self.c3 - other.c3).abs())
    }

    /// The [CNOT] class point (pi/2, 0, 0).
    pub fn cnot_class() -> Self {
        WeylPoint {
            c1: FRAC_PI_2,
            c2: 0.0,
            c3: 0.0,
        }
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Matched row of the drive-pattern table together with its predicted
/// entanglement characteristics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRowMatch {
    pub row: u8,
    pub predicted_g1: f64,
    pub predicted_g2: f64,
    pub predicted_ep: f64,
    pub predicted_weyl: WeylPoint,
}

/// Full entanglement classification of a holonomic gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub invariants: GateInvariants,
    pub ep: f64,
    pub ep_mc: McEstimate,
    pub weyl: WeylPoint,
    pub perfect_entangler: bool,
    pub special_perfect_entangler: bool,
    pub table_row: Option<TableRowMatch>,
    pub note: Option<String>,
}

/// Magic (Bell) basis as a change-of-basis matrix; columns are the magic
/// states over the computational basis.
fn magic_basis() -> Mat4 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x * s, 0.0);
    let i = |x: f64| C64::new(0.0, x * s);
    Mat4::from_row_slice(&[
        r(1.0),
        r(0.0),
        r(0.0),
        i(1.0),
        r(0.0),
        i(1.0),
        r(1.0),
        r(0.0),
        r(0.0),
        i(1.0),
        r(-1.0),
        r(0.0),
        r(1.0),
        r(0.0),
        r(0.0),
        i(-1.0),
    ])
}

fn require_unitary(u: &Mat4) -> Result<()> {
    let dev = frobenius_unitarity_deviation(u);
    if dev > UNITARITY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// u in the magic basis, normalized to unit determinant (principal fourth
/// root; the invariants below do not depend on the branch).
fn magic_basis_normalized(u: &Mat4) -> Mat4 {
    let b = magic_basis();
    let ub = b.adjoint() * u * b;
    let det = ub.determinant();
    ub / det.powf(0.25)
}

/// Makhlin local invariants from m = u^T u in the magic basis:
/// G1 = tr^2(m)/16, G2 = (tr^2(m) - tr(m^2))/4.
pub fn makhlin_invariants(u: &Mat4) -> Result<GateInvariants> {
    require_unitary(u)?;
    let ub = magic_basis_normalized(u);
    let m = ub.transpose() * ub;
    let tr = m.trace();
    let tr_sq = (m * m).trace();
    let g1 = tr * tr / C64::new(16.0, 0.0);
    let g2 = (tr * tr - tr_sq) / C64::new(4.0, 0.0);
    if g2.im.abs() >= IMAG_RESIDUE_TOL {
        return Err(Error::SpuriousImaginary(g2.im.abs()));
    }
    Ok(GateInvariants { g1, g2: g2.re })
}

/// Entangling power e_p = (2/9)(1 - |G1|), clamped to [0, 2/9].
pub fn entangling_power_closed(inv: &GateInvariants) -> f64 {
    (EP_MAX * (1.0 - inv.g1.norm())).clamp(0.0, EP_MAX)
}

fn haar_single_qubit_state(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut n = || -> f64 { StandardNormal.sample(rng) };
    let a = C64::new(n(), n());
    let b = C64::new(n(), n());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / norm, b / norm]
}

fn linear_entropy_after(u: &Mat4, q1: [C64; 2], q2: [C64; 2]) -> f64 {
    let psi = SVector::<C64, 4>::from_iterator([
        q1[0] * q2[0],
        q1[0] * q2[1],
        q1[1] * q2[0],
        q1[1] * q2[1],
    ]);
    let out = u * psi;
    // reduced state of qubit 1
    let r00 = out[0].norm_sqr() + out[1].norm_sqr();
    let r11 = out[2].norm_sqr() + out[3].norm_sqr();
    let r01 = out[0] * out[2].conj() + out[1] * out[3].conj();
    let purity = r00 * r00 + r11 * r11 + 2.0 * r01.norm_sqr();
    1.0 - purity
}

/// Statistical oracle for the entangling power: mean linear entropy of the
/// first qubit over Haar-random product inputs. Randomness is derived per
/// sample from a counter-based stream, so the result depends only on the seed.
pub fn entangling_power_mc(u: &Mat4, n_samples: usize, seed: u64) -> Result<McEstimate> {
    require_unitary(u)?;
    if n_samples < 1000 {
        return Err(Error::OutOfRange {
            name: "n_samples",
            value: n_samples as f64,
            range: "[1000, inf)",
        });
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let q1 = haar_single_qubit_state(&mut rng);
        let q2 = haar_single_qubit_state(&mut rng);
        let val = linear_entropy_after(u, q1, q2);
        let delta = val - mean;
        mean += delta / ((i + 1) as f64);
        m2 += delta * (val - mean);
    }
    let var = m2 / ((n_samples - 1) as f64);
    Ok(McEstimate {
        estimate: mean,
        std_error: (var / n_samples as f64).sqrt(),
        n_samples,
        seed,
    })
}

/// Eigenphases of a symmetric unitary matrix m = X + iY: X and Y are
/// commuting real symmetric matrices, simultaneously diagonalized through a
/// real symmetric eigensolve of a generic combination.
fn symmetric_unitary_eigenphases(m: &Mat4) -> Result<[f64; 4]> {
    let x = SMatrix::<f64, 4, 4>::from_fn(|i, j| (m[(i, j)].re + m[(j, i)].re) / 2.0);
    let y = SMatrix::<f64, 4, 4>::from_fn(|i, j| (m[(i, j)].im + m[(j, i)].im) / 2.0);
    for beta in [0.0, FRAC_PI_4, 0.28374, 1.1, 2.03] {
        let z = x * beta.cos() + y * beta.sin();
        let eig = z.symmetric_eigen();
        let v = eig.eigenvectors;
        let mut phases = [0.0; 4];
        for j in 0..4 {
            let col = v.column(j);
            let xq = (col.transpose() * x * col)[(0, 0)];
            let yq = (col.transpose() * y * col)[(0, 0)];
            phases[j] = yq.atan2(xq);
        }
        // accept only if the candidate basis reconstructs m
        let rec = Mat4::from_fn(|i, j| {
            (0..4)
                .map(|k| C64::new(0.0, phases[k]).exp() * (v[(i, k)] * v[(j, k)]))
                .sum()
        });
        if (rec - m).norm() < 1e-10 {
            return Ok(phases);
        }
    }
    Err(Error::NumericalContract(
        "symmetric-unitary eigenphase extraction did not converge".into(),
    ))
}

/// Weyl-chamber coordinates of a two-qubit gate, canonicalized into the
/// chamber pi >= c1 >= c2 >= c3 >= 0, c1 + c2 <= pi, with (c1, 0, 0)
/// resolved toward c1 <= pi/2.
pub fn weyl_coordinates(u: &Mat4) -> Result<WeylPoint> {
    require_unitary(u)?;
    let ub = magic_basis_normalized(u);
    let m = ub.transpose() * ub;
    let mut phis = symmetric_unitary_eigenphases(&m)?;

    // det(m) = 1, so the phase sum is a multiple of 2 pi; shift outliers
    // until the sum is zero.
    let sum: f64 = phis.iter().sum();
    let k = (sum / TAU).round() as i64;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| phis[a].partial_cmp(&phis[b]).unwrap());
    for i in 0..k.unsigned_abs() as usize {
        if k > 0 {
            phis[order[3 - i]] -= TAU;
        } else {
            phis[order[i]] += TAU;
        }
    }
    phis.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut cs = [
        (phis[0] + phis[1]) / 2.0,
        (phis[0] + phis[2]) / 2.0,
        (phis[1] + phis[2]) / 2.0,
    ];
    // canonicalize under the Weyl-group symmetries
    let mut converged = false;
    for _ in 0..20 {
        for c in cs.iter_mut() {
            *c = c.rem_euclid(PI);
        }
        cs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if cs[0] + cs[1] > PI + 1e-15 {
            let (a, b) = (PI - cs[1], PI - cs[0]);
            cs[0] = a;
            cs[1] = b;
            continue;
        }
        converged = true;
        break;
    }
    if !converged {
        return Err(Error::NumericalContract(
            "Weyl canonicalization did not converge".into(),
        ));
    }
    if cs[2] < 1e-10 && cs[0] > FRAC_PI_2 + 1e-10 {
        cs[0] = PI - cs[0];
        cs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    }
    Ok(WeylPoint {
        c1: cs[0],
        c2: cs[1],
        c3: cs[2],
    })
}

/// Closed-form Weyl parameter c = arcsin(2 |O0_1 O0_2| / omega^2); the gate's
/// Weyl point is (pi/2, c, c).
pub fn weyl_c_closed(pulses: &PulseSet) -> Result<f64> {
    pulses.validate()?;
    // omega^2 as the plain sum of squared moduli keeps the argument exact
    // at the arcsin endpoint
    let omega_sq = pulses.omega0_1.norm_sqr()
        + pulses.omega0_2.norm_sqr()
        + pulses.omega1_diff().norm_sqr();
    if omega_sq <= 0.0 {
        return Err(Error::DegenerateDrive);
    }
    let s = 2.0 * (pulses.omega0_1 * pulses.omega0_2).norm() / omega_sq;
    Ok(s.clamp(0.0, 1.0).asin())
}

fn bloch_state(polar: f64, azimuth: f64) -> [C64; 2] {
    [
        C64::new((polar / 2.0).cos(), 0.0),
        C64::new(0.0, azimuth).exp() * (polar / 2.0).sin(),
    ]
}

fn product_concurrence(u: &Mat4, angles: [f64; 4]) -> f64 {
    let q1 = bloch_state(angles[0], angles[1]);
    let q2 = bloch_state(angles[2], angles[3]);
    let psi = SVector::<C64, 4>::from_iterator([
        q1[0] * q2[0],
        q1[0] * q2[1],
        q1[1] * q2[0],
        q1[1] * q2[1],
    ]);
    let out = u * psi;
    2.0 * (out[0] * out[3] - out[1] * out[2]).norm()
}

const GRID_POINTS: usize = 32;
const REFINE_STEPS: usize = 50;

/// Maximum concurrence of u applied to a product state, by dense grid search
/// over the four Bloch angles followed by local pattern refinement.
pub fn max_product_concurrence(u: &Mat4) -> Result<f64> {
    require_unitary(u)?;
    let n = GRID_POINTS;
    let total = n * n * n * n;
    let angles_at = |idx: usize| -> [f64; 4] {
        let i = idx / (n * n * n);
        let j = (idx / (n * n)) % n;
        let k = (idx / n) % n;
        let l = idx % n;
        [
            PI * i as f64 / (n - 1) as f64,
            TAU * j as f64 / n as f64,
            PI * k as f64 / (n - 1) as f64,
            TAU * l as f64 / n as f64,
        ]
    };
    // deterministic regardless of parallel split: ties resolve to lower index
    let (mut best, best_idx) = (0..total)
        .into_par_iter()
        .map(|idx| (product_concurrence(u, angles_at(idx)), idx))
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let mut angles = angles_at(best_idx);
    let mut step = PI / (n - 1) as f64;
    for _ in 0..REFINE_STEPS {
        let mut improved = false;
        for dim in 0..4 {
            for sign in [-1.0, 1.0] {
                let mut cand = angles;
                cand[dim] += sign * step;
                let val = product_concurrence(u, cand);
                if val > best {
                    best = val;
                    angles = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(best.min(1.0))
}

/// True iff some product state is mapped within `tol` of a maximally
/// entangled state.
pub fn is_perfect_entangler(u: &Mat4, tol: f64) -> Result<bool> {
    Ok(max_product_concurrence(u)? >= 1.0 - tol)
}

pub const PERFECT_ENTANGLER_TOL: f64 = 1e-6;

fn table_row_prediction(row: u8, theta: f64, varphi: f64) -> TableRowMatch {
    match row {
        1..=5 => TableRowMatch {
            row,
            predicted_g1: 0.0,
            predicted_g2: 1.0,
            predicted_ep: EP_MAX,
            predicted_weyl: WeylPoint::cnot_class(),
        },
        6 => {
            let s = (2.0 * theta).sin();
            let c = s.abs().clamp(0.0, 1.0).asin();
            TableRowMatch {
                row,
                predicted_g1: -s.powi(4),
                predicted_g2: 2.0 * (4.0 * theta).cos() - 1.0,
                predicted_ep: EP_MAX * (1.0 - s.powi(4)),
                predicted_weyl: WeylPoint {
                    c1: FRAC_PI_2,
                    c2: c,
                    c3: c,
                },
            }
        }
        7 => {
            let s = varphi.sin();
            let c = (s * s).clamp(0.0, 1.0).asin();
            TableRowMatch {
                row,
                predicted_g1: -s.powi(8),
                predicted_g2: 1.0 - 4.0 * s.powi(4),
                predicted_ep: EP_MAX * (1.0 - s.powi(8)),
                predicted_weyl: WeylPoint {
                    c1: FRAC_PI_2,
                    c2: c,
                    c3: c,
                },
            }
        }
        _ => unreachable!("row index validated by caller"),
    }
}

fn match_table_row(params: &AngularParams) -> (Option<TableRowMatch>, Option<String>) {
    let pulses = match from_angular(params) {
        Ok(p) => p,
        Err(_) => return (None, None),
    };
    let omega = params.omega;
    let is_zero = |z: C64| z.norm() <= 1e-9 * omega;
    let pattern = (
        is_zero(pulses.omega0_1),
        is_zero(pulses.omega0_2),
        is_zero(pulses.omega1_diff()),
    );
    let row = match pattern {
        (true, true, false) => 1,
        (true, false, true) => 2,
        (false, true, true) => 3,
        (true, false, false) => 4,
        (false, true, false) => 5,
        (false, false, true) => 6,
        (false, false, false) => 7,
        (true, true, true) => return (None, None),
    };
    if row == 7 && (params.theta - FRAC_PI_4).abs() > 1e-9 {
        return (
            None,
            Some(format!(
                "pulse pattern matches row 7 but theta = {:.6} differs from pi/4; the row's \
                 phi-only formulas do not apply",
                params.theta
            )),
        );
    }
    (
        Some(table_row_prediction(row, params.theta, params.varphi)),
        None,
    )
}

/// Assemble the full classification of the holonomic gate generated by the
/// given parameters.
pub fn classify_gate(
    params: &AngularParams,
    mc_samples: usize,
    seed: u64,
) -> Result<ClassificationReport> {
    let gate = holonomy_gate(params)?;
    let invariants = makhlin_invariants(gate.matrix())?;
    let ep = entangling_power_closed(&invariants);
    let ep_mc = entangling_power_mc(gate.matrix(), mc_samples, seed)?;
    let weyl = weyl_coordinates(gate.matrix())?;
    let perfect_entangler = is_perfect_entangler(gate.matrix(), PERFECT_ENTANGLER_TOL)?;
    let special_perfect_entangler =
        perfect_entangler && weyl.max_deviation(&WeylPoint::cnot_class()) <= CLASS_TOL;
    let (table_row, note) = match_table_row(params);
    Ok(ClassificationReport {
        invariants,
        ep,
        ep_mc,
        weyl,
        perfect_entangler,
        special_perfect_entangler,
        table_row,
        note,
    })
}

#[cfg(test)]
pub(crate) mod test_gates {
    use super::*;

    pub fn cnot() -> Mat4 {
        let mut m = Mat4::zeros();
        let one = C64::new(1.0, 0.0);
        m[(0, 0)] = one;
        m[(1, 1)] = one;
        m[(2, 3)] = one;
        m[(3, 2)] = one;
        m
    }

    pub fn swap() -> Mat4 {
        let mut m = Mat4::zeros();
        let one = C64::new(1.0, 0.0);
        m[(0, 0)] = one;
        m[(1, 2)] = one;
        m[(2, 1)] = one;
        m[(3, 3)] = one;
        m
    }

    pub fn random_su2(rng: &mut impl rand::Rng) -> SMatrix<C64, 2, 2> {
        let mut a = [0.0f64; 4];
        for x in a.iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in a.iter_mut() {
            *x /= n;
        }
        SMatrix::<C64, 2, 2>::from_row_slice(&[
            C64::new(a[0], a[1]),
            C64::new(a[2], a[3]),
            C64::new(-a[2], a[3]),
            C64::new(a[0], -a[1]),
        ])
    }

    pub fn kron2(a: &SMatrix<C64, 2, 2>, b: &SMatrix<C64, 2, 2>) -> Mat4 {
        Mat4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
    }
}
