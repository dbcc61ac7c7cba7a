//! Block and fusion invariants of finite permutation groups at a prime.

#![allow(clippy::needless_range_loop)]

pub mod block;
pub mod character;
pub mod error;
pub mod field;
pub mod fusion;
pub mod group;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};
pub use group::recipe::{construct_group, construct_group_with, preset, GroupRecipe};
pub use group::{Limits, PermGroup, SubgroupHandle};
pub use perm::Perm;
