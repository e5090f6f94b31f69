//! Trajectories of degenerate foci: closed forms in standard and generalized
//! polar coordinates, numerical integration of the fields, and the 3D
//! elliptical power spiral system.

mod focus;
mod gentrig;
mod integrate;
mod mn;
mod nn;
mod space;
mod trajectory;

pub use focus::{field2d, pq_coeffs, trig_weight, FocusParams, Orientation};
pub use gentrig::{gen_trig, period_first_return, period_t, GenTrig};
pub use integrate::{integrate_focus, FocusRun};
pub use mn::{eval_spiral_mn, point_mn};
pub use nn::{
    eval_spiral_nn, integral_k, integral_k0, periodic_part_p, point_nn, winding_primitive,
    RadialCoords, SpiralModel,
};
pub use space::{field3d, invariant3d_residual, param3d, Spiral3DParams};
pub use trajectory::{Frame, TrajectorySample};

use crate::numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpiralError {
    #[error("{name} = {value} is even: the system has a center, not a focus")]
    EvenExponent { name: &'static str, value: u32 },
    #[error("angle {phi} lies outside the spiral's domain (bracket {bracket:e})")]
    OutsideDomain { phi: f64, bracket: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
