pub mod basis;
pub mod homology;
pub mod linsolve;
pub mod scalar;
pub mod sign;
pub mod tensor;

pub use basis::{shift, unshift, GradedBasis};
pub use homology::{apply, chain_homology, Contraction, LinearMap};
pub use linsolve::{solve_cycle_system, CycleSolution, LinearSystem, Matrix};
pub use scalar::{fmt_scalar, int, parse_scalar, ratio, sign, Scalar, Vector};
pub use sign::{is_odd, koszul_parity, koszul_sign};
pub use tensor::{compositions, words, SparseTensor, Word, WordSum};
