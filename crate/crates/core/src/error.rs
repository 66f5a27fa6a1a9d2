use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: all matrices must share one coefficient field")]
    FieldMismatch,
    #[error("invalid modulus {0}: expected an odd prime")]
    InvalidModulus(u64),
    #[error("characteristic {p} too small for size {n} (need p > n)")]
    SmallCharacteristic { p: u64, n: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("tuple does not commute")]
    NonCommuting,
    #[error("invalid map spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {needed} work units requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("no usable sample after {tries} attempts")]
    SeedExhausted { tries: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
