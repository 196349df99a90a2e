use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pulse set contains a non-finite value")]
    NonFinitePulse,
    #[error("degenerate drive: effective drive frequency is zero")]
    DegenerateDrive,
    #[error("matrix is not Hermitian (Frobenius deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (Frobenius deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid Zeno regime: {0}")]
    InvalidRegime(String),
    #[error("{name} = {value} out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("negative evolution time {0}")]
    NegativeTime(f64),
    #[error("pulse pattern violates table row {0}")]
    PatternViolation(u8),
    #[error("quantity expected real has imaginary residue {0:.3e}")]
    SpuriousImaginary(f64),
    #[error("internal numerical check failed: {0}")]
    NumericalContract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
