pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod algebra;
pub mod group;
pub mod wedderburn;
pub mod invariants;
