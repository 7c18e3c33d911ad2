//! Numerical toolkit for soft camber-morphing hydrofoils on underwater gliders.
//!
//! The analysis chain runs in four stages, each in its own module:
//!
//! * [`structural`] inflates the two-chamber silicone wing section with a
//!   plane-strain hyperelastic finite element model and returns the morphed
//!   outline,
//! * [`hydro`] turns outlines into sectional polars with a Hess–Smith panel
//!   method and an empirical drag buildup,
//! * [`vehicle`] assembles wing and hull into whole-glider lift, drag,
//!   efficiency and moments,
//! * [`glide`] propagates efficiency into sawtooth range.
//!
//! [`geometry`] holds the section types shared by all of them.

pub mod geometry;
pub mod glide;
pub mod hydro;
pub mod interp;
pub mod structural;
pub mod table;
pub mod vehicle;

pub use geometry::{AirfoilProfile, CamberLine, EffectiveAoA};
pub use hydro::{FlowConditions, HydroPolar};

pub use structural::{DeformationState, Mesh2D, PressureFit};
pub use vehicle::{VehicleConfig, VehicleForces};

