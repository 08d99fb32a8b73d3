pub mod complements;
pub mod cycle;
pub mod divisor;
pub mod fan;
pub mod fixtures;
pub mod format;
pub mod intersection;
pub mod linalg;
pub mod morphism;
pub mod par;
pub mod poly;
pub mod polytope;
pub mod ring;
pub mod sampling;
