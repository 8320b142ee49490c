//! Coefficient field abstraction for [`Polynomial`](crate::Polynomial).

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, NumRef};

/// A field element usable as a polynomial coefficient.
///
/// Any `Num` type whose operators also accept a borrowed right-hand side
/// qualifies: `f32`, `f64` and [`ExactRational`](crate::ExactRational).
/// Division is assumed to be field division; integer types satisfy the bound
/// but produce truncated quotients in [`Polynomial::div_rem`](crate::Polynomial::div_rem).
pub trait Scalar: Num + NumRef + Neg<Output = Self> + Clone + Debug {}

impl<T> Scalar for T where T: Num + NumRef + Neg<Output = T> + Clone + Debug {}
