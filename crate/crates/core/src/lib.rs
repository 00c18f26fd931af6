pub mod cyclotomic;
pub mod error;
mod cdcl;
mod gf2;
pub mod hypergraph;
pub mod iso;
pub mod ks;
pub mod mmp;
pub mod ray;
pub mod solver;
pub mod vecgen;
pub mod pipeline;
pub mod stats;
