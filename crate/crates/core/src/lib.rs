pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod maxcut;
pub mod spca;
pub mod theta;

pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::{eig_decompose, min_eig_cut, EigenDecomposition, SymMatrix};
