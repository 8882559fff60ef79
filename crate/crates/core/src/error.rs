use thiserror::Error;

/// Errors raised while constructing, loading or validating a group.
#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("group order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: u128, max: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a Latin square: row {row} repeats value {value} (columns {first} and {second})")]
    RowRepeat {
        row: usize,
        value: usize,
        first: usize,
        second: usize,
    },
    #[error("not a Latin square: column {column} repeats value {value} (rows {first} and {second})")]
    ColumnRepeat {
        column: usize,
        value: usize,
        first: usize,
        second: usize,
    },
    #[error("no identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse ({element}*{right} = e but {right}*{element} = {left_product})")]
    MissingInverse {
        element: usize,
        right: usize,
        left_product: usize,
    },
    #[error("not associative: ({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}")]
    NotAssociative {
        a: usize,
        b: usize,
        c: usize,
        left: usize,
        right: usize,
    },
    #[error("invalid group spec `{spec}`: {message}")]
    Spec { spec: String, message: String },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Errors from numeric evaluations whose domain excludes some groups or inputs.
#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("group order n = {0} is outside the domain; n >= 3 required")]
    OrderTooSmall(usize),
    #[error("element {element} out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("root not bracketed: f(1/2) = {low}, f(1) = {high}")]
    NotBracketed { low: f64, high: f64 },
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
}

/// Any error the library surfaces.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
