//! Gabor frames on finite abelian groups.

pub mod cli;
pub mod error;
pub mod fiber_analysis;
pub mod gabor;
pub mod group;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod suites;
pub mod transforms;
pub mod zak_analysis;

pub use error::{GaborError, Result};
pub use gabor::{Convention, FrameBounds, FrameReport, GaborSystem};
pub use group::{FiniteAbelianGroup, GroupElement, Subgroup};
pub use transforms::{Window, ZakArray};
