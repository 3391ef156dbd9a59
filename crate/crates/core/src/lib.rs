//! Exact algebra and verification tools for the super Poincaré chain from
//! momentum-space symbols to Wess-Zumino component equations.

pub mod algebra_core;
pub mod grassmann;
pub mod linalg;
pub mod scalar;
pub mod spin_geometry;
pub mod poly;
pub mod symbols;
pub mod superfourier;
pub mod sampling;
pub mod components;
pub mod repdecomp;
pub mod report;
