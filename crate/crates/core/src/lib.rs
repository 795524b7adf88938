//! Possibility capacities, t-normed integrals, max-`*` measures and max-`*`
//! convexity on finite spaces.
//!
//! Everything lives on finite models: a [`FiniteSpace`] of labelled points,
//! capacities as dense tables indexed by subset bitmasks, and normal forms
//! `V_i lambda_i * delta_{x_i}` as sorted term lists. Values are either exact
//! rationals ([`Exact`]) or floats compared with a fixed tolerance
//! ([`Approx`]).
//!
//! ```
//! use tnormed::{integrate, Exact, FiniteSpace, PossibilityDistribution, TNorm, UnitFunction};
//!
//! let q = |n, d| Exact::new(n, d);
//! let x = FiniteSpace::new(["a", "b", "c"])?;
//! let d = PossibilityDistribution::new(x.clone(), vec![q(1, 1), q(1, 2), q(1, 4)])?;
//! let f = UnitFunction::new(x, vec![q(1, 5), q(4, 5), q(1, 1)])?;
//! let r = integrate(&d.capacity(), &f, &TNorm::Product);
//! assert_eq!(r.value, q(2, 5));
//! # Ok::<(), tnormed::Error>(())
//! ```
//!
//! The [`verify`] module runs seeded law-verification suites over all of
//! the above and produces serializable reports.

pub mod capacity;
pub mod convexity;
pub mod error;
pub mod integral;
pub mod model;
pub mod possibility;
pub mod report;
pub mod space;
pub mod star;
pub mod tnorm;
pub mod unit;
pub mod verify;
mod variant;

pub use capacity::{Capacity, PossibilityDistribution};
pub use convexity::{barycenter, combine, hull_membership, is_convex, monad_hull, MaxStarPoint, PointCloud, WeightVector};
pub use error::{Error, Result};
pub use integral::{
    capacity_from_functional, characterization_witness, comonotone, integrate, is_star_measure, Functional,
    IntegralFunctional, UnitFunction,
};
pub use model::{parse_model, Model};
pub use possibility::{eta, iso_l, mu, NestedOuter, OuterPossibility};
pub use report::{LawReport, Violation};
pub use space::{FiniteSpace, PointMap, SubsetMask};
pub use star::{PointMeasure, StarMeasure};
pub use tnorm::{TNorm, TnormTable};
pub use unit::{Approx, Exact, Policy, Scalar};

// The guide's chapters, so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    pub mod scalars {}
    #[doc = include_str!("../../../book/src/capacities.md")]
    pub mod capacities {}
    #[doc = include_str!("../../../book/src/integral.md")]
    pub mod integral {}
    #[doc = include_str!("../../../book/src/star-measures.md")]
    pub mod star_measures {}
    #[doc = include_str!("../../../book/src/possibility-monad.md")]
    pub mod possibility_monad {}
    #[doc = include_str!("../../../book/src/convexity.md")]
    pub mod convexity {}
    #[doc = include_str!("../../../book/src/model-format.md")]
    pub mod model_format {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
}
