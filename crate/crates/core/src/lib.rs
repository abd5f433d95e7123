//! Finite ultrametric spaces.
//!
//! * [`space`]: exact distance matrices, metric and ultrametric validation,
//!   diameters, closed and smallest enclosing balls.
//! * [`tree`]: representing trees built by recursive diametrical partition,
//!   distance recovery and realizability checks for labeled trees.
//! * [`ballean`]: enumeration of all balls, the Hausdorff ultrametric on them,
//!   iterated balleans and the add-a-leaf transform.
//! * [`laminar`]: recognition of set families that are balleans, and an
//!   ultrametric realizing a given one.
//! * [`iso`]: canonical forms of rooted trees; isometry of ultrametric spaces.
//!
//! All distances are exact rationals ([`Dist`]); nothing in the crate uses a
//! floating-point tolerance.

pub mod ballean;
pub mod dist;
pub mod error;
pub mod exec;
pub mod gen;
pub mod io;
pub mod iso;
pub mod laminar;
pub mod rooted;
pub mod space;
pub mod tree;

pub use ballean::{
    add_leaf_transform, ballean_diametrical_check, ballean_space, ballean_space_with, enumerate_balls, hausdorff,
    hausdorff_fast, iterate_ballean, iterate_ballean_with, BallId, BalleanPartitionReport, BalleanSpace,
    IterateOptions,
};
pub use dist::Dist;
pub use error::{Error, Result};
pub use exec::Execution;
pub use iso::{canonical_form, is_isometric, is_isomorphic, CanonicalForm};
pub use laminar::{family_of, reconstruct, validate_family, SetFamily, ValidationReport};
pub use rooted::{RootedTree, Vertex};
pub use space::{closed_ball, diam, smallest_enclosing_ball, validate, validate_with, Ball, MetricReport, Space};
pub use tree::{
    build_tree, check_tree, diametrical_partition, space_from_tree, tree_distance, Partition, RepNode, RepTree,
    TreeReport, Violation, ViolationKind,
};
