//! Characters of general linear Lie superalgebras via
//! canonical bases of Fock spaces and parabolic Kazhdan-Lusztig polynomials.

pub mod partition;
pub mod poly;
pub mod weight;
pub mod dynkin;
pub mod lusztig;
pub mod hecke;
pub mod fock;
pub mod characters;
