//! Exact computation of r-point Seshadri constants, symplectic packing
//! constants, and nef/effective-cone generators for blowups of P1 x P1 at r
//! very general points.
//!
//! Everything numeric is exact (arbitrary-precision rationals and quadratic
//! surds); the only floating-point surface is the high-precision chart
//! [`dynamics::phi_r`] and the cross-check [`oracle`], neither of which any
//! exact result depends on.
//!
//! Module map:
//! - [`exact`]: rationals and quadratic surds `a + b*sqrt(s)`.
//! - [`lattice`]: the rank-3 symmetric intersection lattice, the full blowup
//!   lattice, symmetrization, and ample bundles.
//! - [`dynamics`]: the blow-down-and-swap isometry `T_r`, its eigen-data, the
//!   bidirectional p/m/q integer sequences, and the generator families
//!   `xi_n`, `C_n`.
//! - [`seshadri`]: Seshadri constants `epsilon_r(L)`, exact where the theory
//!   gives exact values and certified bounds elsewhere.
//! - [`packing`]: symplectic packing constants `nu_r(L)`, full-packing
//!   decisions, and the unusual-r solver.
//! - [`nefgen`]: certified inner square-zero nef classes via reflections,
//!   the `xi(e,r)` family, isometry orbits, and pullbacks.
//! - [`oracle`]: independent brute-force cross-checks (nef-duality minima,
//!   float re-evaluation, table regeneration).

pub mod dynamics;
pub mod exact;
pub mod lattice;
pub mod nefgen;
pub mod oracle;
pub mod packing;
pub mod seshadri;

pub use exact::{Rational, Surd};
pub use lattice::{AmpleBundle, FullClass, SymClass};
