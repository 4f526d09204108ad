pub mod config;
pub mod error;
pub mod field;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod pencil;
pub mod poly;
pub mod spatial;

pub use config::Config;
pub use error::{Error, Result};
pub use field::{field_inverse, FieldElem, PrimeField};
pub use matrix::Matrix;
pub use pencil::{KroneckerForm, PairWitness, PencilBlock};
pub use poly::{Mobius2x2, Poly, PrimePowerFactor};
pub use spatial::{CanonicalSum, RegularClass22, SpatialMatrix, TensorLabel, TransformWitness};
