//! Gauss map (stub).
use crate::scalar::Real;
pub struct GaussFit<S: Real>(std::marker::PhantomData<S>);
