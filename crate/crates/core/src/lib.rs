//! Coupon colorings (total domatic partitions) and injective colorings of
//! graphs: generators, explicit Hamming-graph constructions, exact solvers
//! for small instances and a randomized two-round coloring for regular graphs.

pub mod coloring;
pub mod construct;
pub mod exact;
pub mod experiment;
pub mod field;
pub mod generators;
pub mod graph;
pub mod hypergraph;
pub mod seeds;
pub mod two_round;
pub mod verify;

pub use coloring::Coloring;
pub use graph::Graph;
pub use hypergraph::Hypergraph;
