//! Textual group specifications such as `product:(cyclic:3),(symmetric:3)`.

use std::fmt;
use std::str::FromStr;

use super::{build_cyclic, build_dihedral, build_product, build_symmetric, load_table_file, Group};
use crate::error::GroupError;

/// Parsed form of the group-spec grammar:
///
/// ```text
/// spec := cyclic:m | dihedral:m | symmetric:m | product:(spec),(spec) | table:<path>
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// `D_{2m}`, of order `2m`.
    Dihedral(usize),
    Symmetric(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(String),
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Cyclic(m) => build_cyclic(*m),
            GroupSpec::Dihedral(m) => build_dihedral(*m),
            GroupSpec::Symmetric(m) => build_symmetric(*m),
            GroupSpec::Product(a, b) => build_product(&a.build()?, &b.build()?),
            GroupSpec::Table(path) => load_table_file(path),
        }
    }
}

fn spec_error(spec: &str, message: impl Into<String>) -> GroupError {
    GroupError::Spec {
        spec: spec.to_string(),
        message: message.into(),
    }
}

/// Splits `(a),(b)` at the top-level comma.
fn split_pair<'a>(whole: &str, args: &'a str) -> Result<(&'a str, &'a str), GroupError> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in args.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(spec_error(whole, "unbalanced parentheses"));
                }
            }
            ',' if depth == 0 => {
                if split.is_some() {
                    return Err(spec_error(whole, "product takes exactly two factors"));
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(spec_error(whole, "unbalanced parentheses"));
    }
    let i = split.ok_or_else(|| spec_error(whole, "product needs `(spec),(spec)`"))?;
    let strip = |s: &'a str| -> Result<&'a str, GroupError> {
        s.trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| spec_error(whole, "each product factor must be parenthesised"))
    };
    Ok((strip(&args[..i])?, strip(&args[i + 1..])?))
}

fn parse(whole: &str, s: &str) -> Result<GroupSpec, GroupError> {
    let s = s.trim();
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| spec_error(whole, format!("`{s}` has no `kind:` prefix")))?;
    let number = || -> Result<usize, GroupError> {
        args.trim()
            .parse()
            .map_err(|_| spec_error(whole, format!("`{args}` is not a positive integer")))
    };
    match kind.trim() {
        "cyclic" => Ok(GroupSpec::Cyclic(number()?)),
        "dihedral" => Ok(GroupSpec::Dihedral(number()?)),
        "symmetric" => Ok(GroupSpec::Symmetric(number()?)),
        "product" => {
            let (a, b) = split_pair(whole, args)?;
            Ok(GroupSpec::Product(
                Box::new(parse(whole, a)?),
                Box::new(parse(whole, b)?),
            ))
        }
        "table" if !args.is_empty() => Ok(GroupSpec::Table(args.to_string())),
        "table" => Err(spec_error(whole, "table needs a path")),
        other => Err(spec_error(whole, format!("unknown group kind `{other}`"))),
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, s)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "cyclic:{m}"),
            GroupSpec::Dihedral(m) => write!(f, "dihedral:{m}"),
            GroupSpec::Symmetric(m) => write!(f, "symmetric:{m}"),
            GroupSpec::Product(a, b) => write!(f, "product:({a}),({b})"),
            GroupSpec::Table(p) => write!(f, "table:{p}"),
        }
    }
}
