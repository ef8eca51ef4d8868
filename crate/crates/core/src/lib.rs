//! Sum-rank metric codes built from skew polynomial quotients
//! `F_{q^m}[x; θ] / (H_Λ)`, together with the ring invariants (idealisers,
//! centralisers, centres) used to tell such codes apart.

pub mod codes;
pub mod config;
pub mod gf;
pub mod invariants;
pub mod linalg;
pub mod quot;
pub mod skew;
pub mod srmat;
pub mod suites;
