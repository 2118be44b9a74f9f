//! Generic DICE climate-economy model.
//!
//! The crate bundles a three-reservoir carbon cycle, a two-layer energy
//! balance model, the DICE economy, four climate benchmark protocols,
//! calibration diagnostics and a direct-transcription optimal policy solver.
//!
//! Model primitives in [`climate`] and [`econ`] are generic over the scalar
//! type; the protocol, calibration and policy layers run in `f64`.

pub mod calibrate;
pub mod climate;
pub mod drivers;
pub mod econ;
pub mod policy;
pub mod scenarios;

use num_traits::{Float, FromPrimitive};

/// Floating-point type the model primitives are generic over.
pub trait Scalar: Float + FromPrimitive + std::fmt::Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into the scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub use climate::{
    CarbonMass, CarbonParams, ClimatePreset, ClimateState, Driver, ExogenousForcing, PresetName,
    TempParams, Temperature,
};
pub use econ::{EconParams, EconPreset, ExogenousParams, ExogenousPath};

pub type CarbonParams64 = CarbonParams<f64>;
pub type CarbonParams32 = CarbonParams<f32>;
pub type TempParams64 = TempParams<f64>;
pub type TempParams32 = TempParams<f32>;
pub type ClimateState64 = ClimateState<f64>;
pub type ClimateState32 = ClimateState<f32>;
pub type ClimatePreset64 = ClimatePreset<f64>;
pub type ClimatePreset32 = ClimatePreset<f32>;
pub type EconParams64 = EconParams<f64>;
pub type EconParams32 = EconParams<f32>;
pub type ExogenousPath64 = ExogenousPath<f64>;
pub type ExogenousPath32 = ExogenousPath<f32>;
