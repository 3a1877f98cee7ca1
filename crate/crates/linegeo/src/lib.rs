//! Line geometry of projective 3-space in the Clifford algebra Cl(3,3).

pub mod check;
pub mod cl33;
pub mod error;
pub mod gc4;
pub mod linalg;
pub mod plucker;
pub mod random;
pub mod screw;
pub mod versor;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/clifford.md")]
    mod clifford {}
    #[doc = include_str!("../../../book/src/points-planes.md")]
    mod points_planes {}
    #[doc = include_str!("../../../book/src/plucker.md")]
    mod plucker {}
    #[doc = include_str!("../../../book/src/versors.md")]
    mod versors {}
    #[doc = include_str!("../../../book/src/screws.md")]
    mod screws {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
