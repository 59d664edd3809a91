//! Tropical matrix engine for quasicone subalgebras of affine `A_n`, with the
//! strategy calculus and the concatenation search over canonical quasicones.

pub mod cases;
pub mod ext;
pub mod quasicone;
pub mod roots;
pub mod search;
pub mod strategy;
pub mod tropical;

pub use ext::ExtInt;
pub use quasicone::QuasiconeMatrix;
pub use roots::{RootIndex, SignedRoot};
pub use strategy::{EngineConfig, Strategy, StrategyState};
pub use tropical::ExtMatrix;
