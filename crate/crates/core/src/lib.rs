//! Crystals of irreducible representations through lambda-chains and their
//! admissible subsets, computed in exact arithmetic.

pub mod characters;
pub mod crystal;
pub mod error;
pub mod folding;
pub mod geometry;
pub mod lambda_chain;
pub mod root_system;

pub use characters::{Character, Decomposition};
pub use crystal::{AdmissibleSubset, AuditReport, CrystalGraph};
pub use error::{Error, Result};
pub use folding::{FoldEntry, Folding, LevelFunctionSamples};
pub use geometry::{AlcoveCoords, GalleryPath, LsChain};
pub use lambda_chain::{ChainIndex, LambdaChain, ValidationReport};
pub use root_system::{CartanSpec, Root, RootSystem, Weight, WeylElement, Q};
