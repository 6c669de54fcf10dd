//! Exact-arithmetic construction and verification of a pair of quantum
//! isomorphic, non-isomorphic strongly regular graphs with parameters
//! (120, 63, 30, 36).
//!
//! The first graph is the orthogonality graph of the 120 lines spanned by the
//! E8 root system. The second is obtained from it by complementing the edges
//! between certain orbit cells of a Pauli-word automorphism group; it is
//! isomorphic to the complement of a rank 4 graph built from stabilizer
//! cosets. A quantum permutation matrix with 8x8 rational projection entries
//! intertwines the two adjacency matrices, and everything is checked entry by
//! entry in exact rational arithmetic.
//!
//! Module map:
//!
//! * [`exact`] - arbitrary-precision rationals, dense rational matrices,
//!   division-free characteristic polynomials.
//! * [`pauli`] - 3-fold tensor Pauli words, their signed permutation
//!   matrices, and the group `L` of order 64 acting on root lines.
//! * [`roots`] - the 120 root lines, the orthogonality graph, orbit cells,
//!   stabilizers, the edge-flipped companion graph and the coset clique graph.
//! * [`graph`] - general finite-graph machinery: strong regularity,
//!   independence numbers by branch and bound, isomorphism testing,
//!   graph6/DIMACS IO.
//! * [`magic`] - the block quantum permutation matrix and the exact
//!   intertwiner and product-relation verifiers.
//! * [`switching`] - Godsil-McKay switching and its certificates.
//! * [`homcount`] - exact homomorphism counting from small patterns and the
//!   planar-pattern profile comparison.
//! * [`cert`] - versioned JSON certificates emitted by the CLI.
//! * [`cli`] - the `build` / `verify` / `homcount` command line front end.
//!
//! The `examples/` directory contains one runnable demonstration per major
//! capability; `qisrg --help` documents the CLI.

pub mod cert;
pub mod cli;
pub mod exact;
pub mod graph;
pub mod homcount;
pub mod magic;
pub mod pauli;
pub mod roots;
pub mod switching;
