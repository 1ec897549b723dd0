//! SU(N) generator algebra, the `N^2`-dimensional spacetime representation
//! built from its structure tensors, finite Lorentz transformations, and
//! momentum matrices obtained as Clebsch-Gordan intertwiners.
//!
//! Everything numeric is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix the scalar to `f64`.

pub mod basis;
pub mod cli;
pub mod error;
pub mod export;
pub mod momentum;
pub mod numkernel;
pub mod reps;
pub mod scalar;
pub mod spacetime;
pub mod tensors;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use numkernel::Tolerance;
pub use scalar::Real;

/// Complex `f64` scalar.
pub type C64 = num_complex::Complex<f64>;
pub type CMatrix = numkernel::Matrix<f64>;
pub type CMatrixF32 = numkernel::Matrix<f32>;
pub type Basis = basis::GeneratorBasis<f64>;
pub type Tensors = tensors::StructureTensors<f64>;
pub type Generators = spacetime::SpacetimeGenerators<f64>;
pub type Similarity = spacetime::SimilarityMap<f64>;
pub type Representation = reps::Rep<f64>;
pub type Pair = spacetime::PairRep<f64>;
pub type Block = momentum::BlockRep<f64>;
pub type Solution = momentum::MomentumSolution<f64>;
