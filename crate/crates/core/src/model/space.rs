use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dot states of the transport qubit.
pub const EMPTY: usize = 0;
pub const LEFT: usize = 1;
pub const RIGHT: usize = 2;

/// Truncated product space of a dot (or qubit) with a Fock ladder.
///
/// Basis index = `dot_state * (n_fock + 1) + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    pub n_fock: usize,
    pub dot_dim: usize,
}

impl HilbertSpace {
    /// Empty, left and right dot states.
    pub fn transport(n_fock: usize) -> Result<Self> {
        Self::new(n_fock, 3)
    }

    /// Two-level qubit without the empty state.
    pub fn qubit(n_fock: usize) -> Result<Self> {
        Self::new(n_fock, 2)
    }

    pub fn new(n_fock: usize, dot_dim: usize) -> Result<Self> {
        if n_fock < 1 {
            return Err(Error::InvalidInput("n_fock must be >= 1".into()));
        }
        if dot_dim != 2 && dot_dim != 3 {
            return Err(Error::InvalidInput(format!("dot_dim must be 2 or 3, got {dot_dim}")));
        }
        Ok(HilbertSpace { n_fock, dot_dim })
    }

    pub fn levels(&self) -> usize {
        self.n_fock + 1
    }

    pub fn dim(&self) -> usize {
        self.dot_dim * self.levels()
    }

    pub fn index(&self, dot: usize, n: usize) -> usize {
        debug_assert!(dot < self.dot_dim && n <= self.n_fock);
        dot * self.levels() + n
    }

    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.levels(), index % self.levels())
    }
}
