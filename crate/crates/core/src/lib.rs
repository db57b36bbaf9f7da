//! Equiangular tight frames from cube-root Seidel matrices.
//!
//! Structural checks use exact Eisenstein-integer arithmetic; floating
//! point appears only in [`frames`], where frame vectors are synthesized.

pub mod cli;
pub mod constructions;
pub mod digraph;
pub mod eisenstein;
pub mod feasibility;
pub mod frames;
pub mod search;
pub mod seidel;

pub use constructions::{frame_9_6, power_9, tensor_compose};
pub use digraph::Digraph;
pub use eisenstein::{CubeRoot, EisensteinInt};
pub use seidel::{derive_params, verify_signature, verify_via_conditions, FrameParams, SeidelMatrix};
