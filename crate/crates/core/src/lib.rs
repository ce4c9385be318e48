//! Perfect lattice codes correcting a single cyclic or non-cyclic burst of
//! limited-magnitude errors.
//!
//! A code is the kernel of the syndrome map `x -> x . s` where `s` splits a
//! finite Abelian group by the burst error ball. This crate enumerates the
//! balls, checks and constructs splittings, decodes by syndrome lookup, and
//! searches exhaustively for splittings or proves that none exist.

pub mod codec;
pub mod constructions;
pub mod error;
pub mod errorball;
pub mod gf;
pub mod groups;
pub mod search;
pub mod tables;

pub use codec::{code_from_splitting, inject_burst, BurstChoice, LatticeCode, SimulationReport};
pub use constructions::{
    construct_cyclic_2_10, construct_noncyclic_2_10, construct_ralpha, construct_salpha,
    find_primitive, ConditionMode, ConditionReport, Family,
};
pub use error::{Error, Result};
pub use errorball::{ball_size, contains, e_param, enumerate_ball, BallSpec, ErrorVector};
pub use gf::{FieldCtx, FieldElem};
pub use groups::{
    dot, enumerate_abelian_groups, is_perfect_splitting, is_splitting, AbelianGroup,
    GroupElement, SplittingSequence,
};
pub use search::{prove_nonexistence, search_splitting, Outcome, SearchOptions, SearchReport};
pub use tables::{reproduce_table2, reproduce_tables345, scan_good_q_220, Table2Row};
