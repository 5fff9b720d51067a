//! Grothendieck polynomials of permutations, bumpless pipe dreams, bubbling
//! diagrams, flagged Weyl module characters and Schubert matroid polyhedra.

pub mod bpd;
pub mod bubbling;
pub mod diagram;
pub mod error;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod polyhedra;
pub mod weyl;

pub use bpd::{rothe_bpd, weigandt_sum, Bpd, MarkedBpd, Tile};
pub use bubbling::{
    bd_of, d_top, distinguished_squares, enumerate_bd, enumerate_sbd, rothe_bubbling, BubblingDiagram,
    DistinguishedSet, Square,
};
pub use diagram::{diagram_leq, rothe_diagram, subset_leq, Cell, Diagram, RankTable};
pub use error::{Error, MoveError, Result};
pub use perm::Permutation;
pub use poly::{grothendieck, MultiPoly};
pub use weyl::{conjecture1_check, dual_character, schubitope_support, theta, SchubertMatroid};
