use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scan::ScanEntry;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a map or special function.
    Domain {
        what: &'static str,
        value: f64,
    },
    InvalidMesh(String),
    InvalidConfig(String),
    InvalidSpec(String),
    /// Grid dimensions disagree with the mesh.
    Shape {
        expected: usize,
        found: usize,
    },
    /// Block index outside `1..=M+1` (1-based, as documented).
    BlockIndex {
        k: usize,
        mesh_points: usize,
    },
    /// Zero pivot while eliminating the block at 1-based index `k`.
    SingularBlock {
        k: usize,
    },
    /// Coulomb problems need `n − l ≥ 1`.
    QuantumNumbers {
        n: u32,
        l: u32,
    },
    /// No closed form is provided for this state.
    Unsupported {
        n: u32,
        l: u32,
    },
    /// Every guess of a scan failed to converge.
    EmptySelection {
        entries: Vec<ScanEntry>,
    },
    /// A curve with zero amplitude cannot be rescaled.
    ComparisonUndefined,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what}: argument {value} out of domain"),
            Error::InvalidMesh(msg) => write!(f, "invalid mesh: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid relaxation config: {msg}"),
            Error::InvalidSpec(msg) => write!(f, "invalid problem spec: {msg}"),
            Error::Shape { expected, found } => {
                write!(f, "grid has {found} mesh points, mesh has {expected}")
            }
            Error::BlockIndex { k, mesh_points } => {
                write!(f, "block index k={k} outside 1..={}", mesh_points + 1)
            }
            Error::SingularBlock { k } => write!(f, "singular block at k={k}"),
            Error::QuantumNumbers { n, l } => {
                write!(f, "invalid quantum numbers n={n}, l={l}: need n - l >= 1")
            }
            Error::Unsupported { n, l } => write!(f, "no closed form for (n={n}, l={l})"),
            Error::EmptySelection { entries } => {
                write!(f, "none of the {} scanned guesses converged", entries.len())
            }
            Error::ComparisonUndefined => write!(f, "relaxed wavefunction has zero amplitude"),
        }
    }
}

impl core::error::Error for Error {}
