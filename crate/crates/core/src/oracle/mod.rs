//! Brute-force engines used as ground truth. None of them calls the
//! collector.

pub mod dihedral;
pub mod magnus;
pub mod table;
