//! Certified computations for the maximal distance minimizer of a rectangle:
//! interval arithmetic, the corner parametrization, Steiner bounds, the
//! box search with its certificate, polynomial enclosures and the case
//! analysis near the reference configuration.

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod cases;
pub mod error;
pub mod geom;
pub mod interval;
pub mod polybound;
pub mod scene;
pub mod search;
pub mod steiner;

pub use error::{Error, Result};
pub use geom::{IPoint, Pt};
pub use interval::{Interval, IntervalError};
