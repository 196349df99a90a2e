//! Two-atom laser Hamiltonian and its quantum-Zeno projection onto the
//! decoherence-free subspace (DFS).
//!
//! The full product space uses the ordered basis
//! |00>, |01>, |0e>, |10>, |11>, |1e>, |e0>, |e1>, |ee>
//! (single-atom order |0>, |1>, |e>). The DFS uses the ordered basis
//! |00>, |01>, |10>, |11>, |alpha> with |alpha> = (|1e> - |e1>)/sqrt(2).

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::pulses::PulseSet;
use crate::{frobenius_hermiticity_deviation, C64, Mat5, Mat9, Vec9};

pub const TWO_ATOM_LABELS: [&str; 9] = ["00", "01", "0e", "10", "11", "1e", "e0", "e1", "ee"];
pub const DFS_LABELS: [&str; 5] = ["00", "01", "10", "11", "alpha"];

const HERMITICITY_TOL: f64 = 1e-12;

/// Excited-level index in the single-atom order |0>, |1>, |e>.
const EXCITED: usize = 2;

/// Product-basis index of |a b> for single-atom levels a, b.
const fn prod(a: usize, b: usize) -> usize {
    3 * a + b
}

/// Hermitian operator on the two-atom product space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomOperator {
    matrix: Mat9,
}

impl TwoAtomOperator {
    pub fn new(matrix: Mat9) -> Result<Self> {
        let dev = frobenius_hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Mat9 {
        &self.matrix
    }
}

/// Hermitian operator on the DFS, tripod-shaped for laser-driven dynamics:
/// couplings only between |alpha> and {|01>, |10>, |11>}, with |00| fully
/// decoupled.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    matrix: Mat5,
}

impl EffectiveHamiltonian {
    pub fn new(matrix: Mat5) -> Result<Self> {
        let dev = frobenius_hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Mat5 {
        &self.matrix
    }
}

/// Embedding of the five DFS basis vectors into the product space.
#[derive(Debug, Clone, PartialEq)]
pub struct DfsBasis {
    embedding: SMatrix<C64, 9, 5>,
}

impl DfsBasis {
    pub fn standard() -> Self {
        let mut b = SMatrix::<C64, 9, 5>::zeros();
        let one = C64::new(1.0, 0.0);
        b[(prod(0, 0), 0)] = one; // |00>
        b[(prod(0, 1), 1)] = one; // |01>
        b[(prod(1, 0), 2)] = one; // |10>
        b[(prod(1, 1), 3)] = one; // |11>
        let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        b[(prod(1, EXCITED), 4)] = inv_sqrt2; // |alpha> = (|1e> - |e1>)/sqrt(2)
        b[(prod(EXCITED, 1), 4)] = -inv_sqrt2;
        Self { embedding: b }
    }

    /// 9x5 matrix whose columns are the embedded DFS basis vectors.
    pub fn embedding(&self) -> &SMatrix<C64, 9, 5> {
        &self.embedding
    }

    pub fn vector(&self, i: usize) -> Vec9 {
        Vec9::from(self.embedding.column(i))
    }

    /// Rank-5 orthogonal projector P = B B^dagger onto the DFS.
    pub fn projector(&self) -> TwoAtomOperator {
        TwoAtomOperator {
            matrix: self.embedding * self.embedding.adjoint(),
        }
    }
}

/// Laser Hamiltonian H = sum_{i=1,2} sum_{j=0,1} Omega_j^(i) |j><e| on atom i
/// (identity on the other atom), plus Hermitian conjugate.
pub fn build_laser_hamiltonian(pulses: &PulseSet) -> Result<TwoAtomOperator> {
    pulses.validate()?;
    let mut lower = Mat9::zeros();
    // atom 1: Omega_j^(1) |j><e| (x) I
    for (j, amp) in [(0, pulses.omega0_1), (1, pulses.omega1_1)] {
        for k in 0..3 {
            lower[(prod(j, k), prod(EXCITED, k))] += amp;
        }
    }
    // atom 2: I (x) Omega_j^(2) |j><e|
    for (j, amp) in [(0, pulses.omega0_2), (1, pulses.omega1_2)] {
        for k in 0..3 {
            lower[(prod(k, j), prod(k, EXCITED))] += amp;
        }
    }
    let matrix = lower + lower.adjoint();
    Ok(TwoAtomOperator { matrix })
}

/// Orthogonal projector onto the DFS in the standard basis.
pub fn dfs_projector() -> TwoAtomOperator {
    DfsBasis::standard().projector()
}

/// Zeno projection H_eff = P H P, compressed to the 5-dimensional DFS basis.
pub fn project_to_dfs(h: &TwoAtomOperator) -> EffectiveHamiltonian {
    let b = DfsBasis::standard();
    let matrix = b.embedding().adjoint() * h.matrix() * b.embedding();
    // compression of a Hermitian operator; asymmetry is only rounding noise
    EffectiveHamiltonian::new(matrix).expect("compression preserves Hermiticity")
}

/// Tripod effective Hamiltonian written directly from the pulse amplitudes,
/// bypassing the 9x9 intermediate:
/// H_eff = (1/sqrt(2)) ( -O0_1 |01><a| + O0_2 |10><a| + (O1_2 - O1_1) |11><a| ) + H.c.
pub fn effective_hamiltonian_closed_form(pulses: &PulseSet) -> Result<EffectiveHamiltonian> {
    pulses.validate()?;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = Mat5::zeros();
    m[(1, 4)] = -pulses.omega0_1 * inv_sqrt2;
    m[(2, 4)] = pulses.omega0_2 * inv_sqrt2;
    m[(3, 4)] = pulses.omega1_diff() * inv_sqrt2;
    let matrix = m + m.adjoint();
    Ok(EffectiveHamiltonian { matrix })
}
