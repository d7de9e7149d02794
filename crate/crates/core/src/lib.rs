//! Exact-arithmetic laboratory for a Kakeya-type line set and the dyadic
//! martingales that succeed on it.
//!
//! * [`numeric`]: dyadic and rational numbers.
//! * [`sequence`]: the slope-correction sequence `x_k`, built from blocks.
//! * [`construction`]: intercept functions, line families and tube regions.
//! * [`measure`]: exact area of unions of convex polygons.
//! * [`martingale`]: open-set, averaged and truncated master martingales.

pub mod caps;
pub mod construction;
pub mod error;
pub mod martingale;
pub mod measure;
pub mod numeric;
pub mod sequence;

pub use caps::Caps;
pub use error::{Error, Result};
pub use numeric::{Dyadic, Rat};
