//! Certified machinery for Pillai-type equations over continued fraction
//! convergent denominators.
//!
//! The crate has three layers:
//!
//! - exact foundations: dyadic intervals ([`dyadic`], [`real`]), quadratic
//!   field arithmetic ([`qfield`]), and periodic continued fractions
//!   ([`cfrac`]);
//! - the sequence layer ([`convergents`]): denominator sequences of quadratic
//!   irrationals, their linear recurrences, and growth inequalities;
//! - the certification layer ([`bounds`], [`reduction`], [`search`]): linear
//!   form lower bounds, exponent-bound shrinking, lattice-free reduction of
//!   the remaining range, and exhaustive representation searches.
//!
//! The `pillai` binary exposes all of it as subcommands; [`report`] holds the
//! shared output formats.

pub mod bounds;
pub mod cfrac;
pub mod convergents;
pub mod dyadic;
pub mod published;
pub mod qfield;
pub mod real;
pub mod reduction;
pub mod report;
pub mod search;
