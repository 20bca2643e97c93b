//! Temporary build scaffold (full module set restored as files land).
pub mod affine;
pub mod cells;
pub mod certify;
pub mod lp;
pub mod rational;
pub mod sidon;

pub use affine::{AffineForm, LevelValue};
pub use cells::{build_cell, enumerate_interlacings, locate_cell, nonempty_cells, BoundParams, Cell, Interlacing};
pub use certify::{certify, certify_two_window, Certificate};
pub use lp::{lp_solve, LinearProgram, LpResult, LpStatus, Relation, Sense};
pub use rational::{parse_decimal, Rational};
pub use sidon::SidonSet;
