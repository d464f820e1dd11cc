//! One runner per scenario kind.

pub mod dynamics;
pub mod enumeration;
pub mod extension;
pub mod generation;
pub mod geometry;
pub mod norms;
pub mod orbit;
