//! Support-respecting weights on `F_q^n` and the structures built from them.

pub mod caps;
pub mod codes;
pub mod condsum;
pub mod dot;
pub mod error;
pub mod families;
pub mod gf;
pub mod group;
pub mod io;
pub mod lpb;
pub mod oracles;
pub mod perm;
pub mod sweight;
pub mod table1;

pub use caps::Caps;
pub use error::{Error, Result};
pub use gf::{Field, FqMatrix, FqVector, LinearMap, Space};
