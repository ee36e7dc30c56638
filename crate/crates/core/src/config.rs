//! Session-wide configuration shared by every module.

use std::sync::OnceLock;

use crate::algebra::LieBasis;

/// Default truncation degree of the series oracle.
pub const DEFAULT_DEGREE: usize = 6;

/// Default cap on `m + n` for symbolic level checks.
pub const SYMBOLIC_LEVEL_CAP: usize = 2;

/// Default cap on `m + n` for oracle level checks.
pub const ORACLE_LEVEL_CAP: usize = 3;

static BASIS: OnceLock<LieBasis> = OnceLock::new();

/// Fixes the matrix dimension of the session. Must run before the basis is
/// first used; returns `false` if a different dimension is already active.
pub fn init_dimension(n: usize) -> bool {
    BASIS.get_or_init(|| LieBasis::sl(n)).n() == n
}

/// The session Lie basis (sl(2) unless [`init_dimension`] chose otherwise).
pub fn lie_basis() -> &'static LieBasis {
    BASIS.get_or_init(|| LieBasis::sl(2))
}

/// Truncation degree, honouring the `SDYM_DEFAULT_DEGREE` override.
pub fn default_degree() -> usize {
    std::env::var("SDYM_DEFAULT_DEGREE").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_DEGREE)
}
