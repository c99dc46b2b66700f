//! Link-level simulator for a secure OFDM NOMA downlink with simultaneous
//! wireless information and power transfer.
//!
//! A base station serves two power-domain NOMA users over OFDM while a passive
//! eavesdropper listens. The cyclic prefix donates temporal dimensions that an
//! artificial-noise precoder fills with jamming confined to the null space of
//! the combined user channels, so only the eavesdropper is degraded. Receivers
//! additionally harvest energy from the CP interval and from a power-split
//! prefix of the data samples.
//!
//! The crate provides:
//!
//! * the deterministic OFDM structure matrices ([`ofdm`]),
//! * seeded Rayleigh multipath channel draws ([`channel`]),
//! * the null-space AN precoder ([`precoder`]),
//! * per-realization achievable/secrecy rates ([`rates`]),
//! * closed-form outage approximations with a Monte Carlo oracle ([`outage`]),
//! * harvested-energy accounting ([`energy`]),
//! * a constrained max-min grid-search optimizer ([`optimizer`]).
//!
//! All numerics are generic over the real scalar type through [`Scalar`];
//! `f64` is the intended production type and the one the stated tolerances
//! are calibrated for. Concrete `f64` aliases are exported at the crate root.

use num_traits::{FromPrimitive, ToPrimitive};

pub mod channel;
pub mod config;
pub mod energy;
mod error;
pub mod linalg;
pub mod ofdm;
pub mod optimizer;
pub mod outage;
pub mod precoder;
pub mod rates;

pub use error::Error;

/// Real scalar the simulator is generic over: `f32` or `f64`.
///
/// `RealField` supplies the transcendental and comparison operations,
/// num-traits supplies conversions from literal constants.
pub trait Scalar: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy {
    /// Shorthand for converting an `f64` constant into `Self`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the generic scalar.
pub type C<T> = num_complex::Complex<T>;

pub type SystemConfig64 = config::SystemConfig<f64>;
pub type TxParams64 = config::TxParams<f64>;
pub type ConstraintSpec64 = config::ConstraintSpec<f64>;
pub type ChannelSet64 = channel::ChannelSet<f64>;
pub type AnPrecoder64 = precoder::AnPrecoder<f64>;
pub type RateReport64 = rates::RateReport<f64>;
pub type EnergyReport64 = energy::EnergyReport<f64>;
pub type GridSpec64 = optimizer::GridSpec<f64>;
pub type PointMetrics64 = optimizer::PointMetrics<f64>;
pub type GridResult64 = optimizer::GridResult<f64>;

