//! Symbolic and truncated-series machinery for the hidden symmetries of the
//! self-dual Yang-Mills equations in the Yang J-formulation and in the
//! Parkes-Leznov X-formulation.

pub mod algebra;
pub mod config;
pub mod corpus;
pub mod frechet;
pub mod hierarchy;
pub mod jetexpr;
pub mod recursion;
pub mod series;
pub mod verify;
