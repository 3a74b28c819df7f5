pub mod algebra;
pub mod cohomology;
pub mod constructions;
pub mod derivations;
pub mod linalg;
pub mod rational;
pub mod suite;
