//! Enumeration caps guarding the exhaustive searches.

use crate::error::{Error, Result};

/// Hard ceiling for the number of vectors any enumeration may touch.
pub const MAX_VECTORS: u64 = 1 << 26;
/// Hard ceiling for the order of a general linear group that may be enumerated.
pub const MAX_GL: u64 = 1_000_000_000;
/// Hard ceiling for subspace enumeration.
pub const MAX_SUBSPACES: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub vectors: u64,
    pub gl: u64,
    pub subspaces: u64,
    /// Largest `n` for which family classification enumerates parameter spaces.
    pub family_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vectors: 1 << 20,
            gl: 10_000_000,
            subspaces: 1_000_000,
            family_n: 4,
        }
    }
}

impl Caps {
    /// Caps used by the desk-scale verification sweeps, which need GL(4, 3).
    pub fn sweep() -> Self {
        Caps {
            gl: 100_000_000,
            ..Caps::default()
        }
    }

    /// Applies overrides, refusing anything above the hard maxima.
    pub fn with_overrides(
        mut self,
        vectors: Option<u64>,
        gl: Option<u64>,
        subspaces: Option<u64>,
    ) -> Result<Self> {
        if let Some(v) = vectors {
            if v > MAX_VECTORS {
                return Err(Error::CapExceeded { what: "vector cap override", size: v as u128, cap: MAX_VECTORS as u128 });
            }
            self.vectors = v;
        }
        if let Some(g) = gl {
            if g > MAX_GL {
                return Err(Error::CapExceeded { what: "GL cap override", size: g as u128, cap: MAX_GL as u128 });
            }
            self.gl = g;
        }
        if let Some(s) = subspaces {
            if s > MAX_SUBSPACES {
                return Err(Error::CapExceeded { what: "subspace cap override", size: s as u128, cap: MAX_SUBSPACES as u128 });
            }
            self.subspaces = s;
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, size: u128, cap: u64) -> Result<()> {
        if size > cap as u128 {
            Err(Error::CapExceeded { what, size, cap: cap as u128 })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_respect_hard_maxima() {
        let c = Caps::default().with_overrides(Some(1024), None, None).unwrap();
        assert_eq!(c.vectors, 1024);
        assert!(matches!(
            Caps::default().with_overrides(None, Some(MAX_GL + 1), None),
            Err(Error::CapExceeded { .. })
        ));
    }
}
