//! Exact noncommutative algebra for quantum Weyl algebras, the reflection
//! equation algebra of `GL_2` and its Heisenberg double, with root-of-unity
//! center computations, Azumaya fiber certification and quantum moment maps.

pub mod coefficients;
pub mod engine;
pub mod linalg;
pub mod expr;
pub mod presentations;
pub mod center;
pub mod fibers;
pub mod momentmaps;
pub mod poisson;
pub mod cli;
