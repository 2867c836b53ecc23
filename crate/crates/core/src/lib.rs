pub mod casebook;
pub mod cli;
pub mod docs;
pub mod fans;
pub mod hodge;
pub mod linalg;
pub mod symplectic;
