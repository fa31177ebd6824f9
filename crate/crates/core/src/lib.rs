//! Edge-based U-MUSCL, CFSR3 and U-MUSCL-SSQ discretizations with a
//! verification harness.

pub mod error;
pub mod flux;
pub mod harness;
pub mod lsq;
pub mod mesh;
pub mod reconstruction;
pub mod rk;
pub mod schemes1d;
pub mod solver2d;

pub use error::{Error, Result};
