//! Exact-arithmetic kernels for Hurwitz class numbers, Jacobi theta series,
//! mock Jacobi forms and the M11 moonshine tables built from them.

pub mod bridge;
pub mod chars;
pub mod classical;
pub mod congruent;
pub mod moonshine;
pub mod qf;
pub mod rational;
pub mod series;
pub mod table;
pub mod verify;

pub use congruent::{Verdict, VerdictRecord};
pub use rational::{display_rat, rat, ratio, Rat};
pub use series::{Convention, QYSeries, SeriesBox, SeriesError};
pub use table::{ClassSeriesKind, JacobiCoeffTable};
