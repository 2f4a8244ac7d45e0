//! Hall basic commutators, collection in free nilpotent groups, and the
//! center and capability of nilpotent products of cyclic p-groups.

pub mod hall;
pub mod term;
pub mod collect;
pub mod nilprod;
pub mod oracle;
pub mod analysis;
pub mod cli;
