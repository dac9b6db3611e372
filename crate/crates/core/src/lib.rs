//! Quaternionic quantum mechanics with time-ordered local operations.
//!
//! Amplitudes are quaternions, so local gates applied by different parties
//! stop commuting. The crate makes the time order of such operations
//! explicit, builds a perfect PR box out of it, and evaluates the box in the
//! CHSH game and in one-bit distributed computation of boolean functions.
//!
//! Everything numeric is generic over a [`Real`] scalar (`f64` or `f32`);
//! the quaternion ring itself only needs [`num_traits::Num`] and also runs
//! over integers and rationals. Aliases for the common `f64` case live at
//! the crate root.

pub mod chsh;
pub mod commcomplex;
pub mod error;
pub mod nlbox;
pub mod qlinalg;
pub mod qsystem;
pub mod quaternion;
pub mod scalar;

pub use error::{Error, Result};
pub use nlbox::NonLocalBox;
pub use quaternion::Quaternion;
pub use scalar::Real;

pub type Quat = quaternion::Quaternion<f64>;
pub type Quat32 = quaternion::Quaternion<f32>;
pub type QVector = qlinalg::QVector<f64>;
pub type QMatrix = qlinalg::QMatrix<f64>;
pub type Register = qsystem::Register<f64>;
pub type ScheduledOp = qsystem::ScheduledOp<f64>;
pub type Distribution = qsystem::Distribution<f64>;
pub type BoxBehavior = nlbox::BoxBehavior<f64>;
pub type BoxBehavior32 = nlbox::BoxBehavior<f32>;
pub type GameResult = chsh::GameResult<f64>;
pub type VerificationReport = commcomplex::VerificationReport<f64>;
