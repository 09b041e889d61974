//! Exact computations of stable (twisted) cohomology of mapping class groups
//! as explicit graded modules over `Q[e_1, e_2, ...]`, together with
//! degree-by-degree verification of their structural properties.

pub mod algebra;
pub mod error;
pub mod forms;
pub mod fpgroup;
pub mod linalg;
pub mod modules;
pub mod report;
pub mod stable;

pub use error::{Error, Result};
