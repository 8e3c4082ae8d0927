//! Exact rational polyhedra: halfspaces, linear programming, Fourier–Motzkin
//! projection, oracle-driven facet enumeration, redundancy removal and
//! low-dimensional vertex extraction.

mod fm;
mod halfspace;
mod hull;
mod lp;
mod polytope;
mod rational;

pub use fm::{fm_eliminate, FmOptions, DEFAULT_ROW_CAP};
pub use halfspace::{Halfspace, Relation};
pub use hull::{down_closed_facets, HULL_FACET_CAP};
pub use lp::{lp_solve, lp_solve_nonneg, maximize, LpOutcome, MaxOutcome, Sense};
pub use polytope::{contains, remove_redundant, vertices, Containment, Polytope};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
