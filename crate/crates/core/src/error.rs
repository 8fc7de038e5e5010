use thiserror::Error;

/// Errors raised by configuration, link math and the allocation oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("subcarrier count {subcarriers} is not divisible by group size {group_size}")]
    NotDivisible { subcarriers: usize, group_size: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("instance too large for exhaustive search: {users} users x {groups} groups (limit {max_users} x {max_groups})")]
    TooLarge {
        users: usize,
        groups: usize,
        max_users: usize,
        max_groups: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
