use thiserror::Error;

use crate::group::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("element {element} does not belong to {group}")]
    ForeignElement { element: String, group: String },

    #[error("integer overflow: result exceeds the {bits}-bit signed range")]
    Overflow { bits: u32 },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid generating set: {0}")]
    InvalidGenerators(String),

    #[error("word letter {index} is out of range for {len} generators")]
    LetterOutOfRange { index: u32, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("budget exhausted ({reason}) after completing radius {radius_reached}")]
    BudgetExhausted { radius_reached: u32, reason: String },

    #[error("element {0} is not in the ball")]
    NotInBall(Element),

    #[error("generators do not generate the target: closure has {reached} of {order} elements")]
    NotGenerating { reached: u64, order: u64 },

    #[error("quotient map error: {0}")]
    Quotient(String),

    #[error("no family member qualifies: {0}")]
    FamilyExhausted(String),

    #[error("group of order {order} exceeds the oracle bound {bound}")]
    OracleTooLarge { order: u64, bound: u64 },

    #[error("invalid construction parameters: {0}")]
    Params(String),

    #[error("certificate for {element} failed at factor {index}: {reason}")]
    Certificate {
        element: String,
        index: usize,
        reason: String,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
