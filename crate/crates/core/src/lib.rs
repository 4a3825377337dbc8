pub mod checks;
pub mod cohomology;
pub mod commands;
pub mod corpus;
pub mod degeneracy;
pub mod error;
pub mod fan;
pub mod gkz;
pub mod groebner;
pub mod io;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod polyhedral;
pub mod polytope;
pub mod report;
pub mod series;
pub mod toric;
pub mod triangulation;

pub use error::{Error, Result};
