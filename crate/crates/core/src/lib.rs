//! Construction and exact verification of C_h[g]-sets.
//!
//! A set `A` in an abelian group is a C_h[g]-set when no `h`-element set has
//! `g` distinct translates inside `A`; Sidon sets are the C_2[2]-sets. The
//! weak variant only forbids `g` pairwise disjoint translates.
//!
//! The crate provides:
//! - [`group`] and [`pattern`]: ambient groups, element sets and translation classes,
//! - [`field`]: prime fields, extension fields and the norm map,
//! - [`construct`]: sphere sets, norm sets, the digit embedding into `[n]`,
//!   a Sidon baseline and the randomized deletion construction,
//! - [`verify`]: exact (weak) C_h[g] checks and difference matrices,
//! - [`search`]: exact maximum sets in `[n]` at small `n`,
//! - [`bounds`]: closed-form upper and lower bounds,
//! - [`setfile`]: the text codec for sets.

pub mod bounds;
pub mod construct;
pub mod error;
pub mod field;
pub mod group;
pub mod pattern;
pub mod search;
pub mod setfile;
pub mod verify;

pub use error::{Error, Result};
pub use group::{translate, Elem, GSet, GroupDescriptor};
pub use pattern::{canonicalize, enumerate_pattern_classes, PatternClass};
pub use verify::{Verdict, Witness};
