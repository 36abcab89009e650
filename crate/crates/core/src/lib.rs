//! Exact bounds, verification and exhaustive search for families of weak set
//! compositions whose components are r-chain-free.
//!
//! - [`exactmath`]: big-integer binomials, multinomials and the ordered list
//!   of p-multinomial coefficients for `n`.
//! - [`families`]: subset families, chains, LYM sums, maximal-chain counts.
//! - [`meshalkin`]: weak compositions, the componentwise validity
//!   predicate, the LYM sum and cardinality bound, extremal constructions.
//! - [`oracle`]: branch-and-bound maxima on small instances and random
//!   valid families.
//! - [`cli`]: command implementations and the family file format.
//! - [`selfcheck`]: the identity suite behind `meshalkin selfcheck`.

pub mod cli;
pub mod error;
pub mod exactmath;
pub mod families;
pub mod meshalkin;
pub mod oracle;
pub mod selfcheck;

pub use error::{Error, Result};
pub use exactmath::{BigNat, ExactRational, Shape};
pub use families::{GroundSet, SetFamily, SubsetMask};
pub use meshalkin::{BoundReport, CompositionFamily, Validity, WeakComposition};
pub use oracle::{SearchLimits, SearchReport};
