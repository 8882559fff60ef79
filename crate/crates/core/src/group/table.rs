//! Plain-text Cayley tables.
//!
//! Line 1 holds `n`; each of the next `n` lines holds `n` space-separated
//! 0-based indices, the entry at row `g`, column `h` being `g*h`.

use std::io::{Read, Write};
use std::path::Path;

use super::{check_associativity, from_cayley_table, AssociativityCheck, Group};
use crate::error::GroupError;

pub(crate) struct TableParts {
    pub identity: usize,
    pub inverses: Vec<u32>,
    pub associativity: AssociativityCheck,
}

/// Parses and validates a Cayley table from text.
pub fn parse_table(text: &str) -> Result<Group, GroupError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(GroupError::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let order: usize = header.parse().map_err(|_| GroupError::Parse {
        line,
        message: format!("expected the group order, found `{header}`"),
    })?;
    if order == 0 {
        return Err(GroupError::Parse {
            line,
            message: "group order must be positive".into(),
        });
    }
    if order > super::MAX_TABLE_ORDER {
        return Err(GroupError::OrderTooLarge {
            order: order as u128,
            max: super::MAX_TABLE_ORDER,
        });
    }
    let mut table = Vec::with_capacity(order * order);
    for row in 0..order {
        let (line, text) = lines.next().ok_or(GroupError::Parse {
            line: line + row + 1,
            message: format!("expected {order} table rows, found {row}"),
        })?;
        let before = table.len();
        for tok in text.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| GroupError::Parse {
                line,
                message: format!("`{tok}` is not a non-negative integer"),
            })?;
            if v >= order {
                return Err(GroupError::Parse {
                    line,
                    message: format!("entry {v} out of range for order {order}"),
                });
            }
            table.push(v as u32);
        }
        let found = table.len() - before;
        if found != order {
            return Err(GroupError::Parse {
                line,
                message: format!("expected {order} entries, found {found}"),
            });
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(GroupError::Parse {
            line,
            message: "trailing content after the table".into(),
        });
    }
    from_cayley_table(order, table)
}

/// Reads a Cayley table from any byte stream.
pub fn load_table(mut source: impl Read) -> Result<Group, GroupError> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|source| GroupError::Io {
            path: "<stream>".into(),
            source,
        })?;
    parse_table(&text)
}

pub fn load_table_file(path: impl AsRef<Path>) -> Result<Group, GroupError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| GroupError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_table(&text)
}

/// Writes the table of `group` in the same text format [`parse_table`] reads.
pub fn write_table(group: &Group, mut out: impl Write) -> std::io::Result<()> {
    let n = group.order();
    writeln!(out, "{n}")?;
    for g in 0..n {
        let row: Vec<String> = (0..n).map(|h| group.multiply(g, h).to_string()).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

pub(crate) fn validate_table(order: usize, table: &[u32]) -> Result<TableParts, GroupError> {
    let mut seen = vec![usize::MAX; order];
    for row in 0..order {
        seen.fill(usize::MAX);
        for col in 0..order {
            let v = table[row * order + col] as usize;
            if seen[v] != usize::MAX {
                return Err(GroupError::RowRepeat {
                    row,
                    value: v,
                    first: seen[v],
                    second: col,
                });
            }
            seen[v] = col;
        }
    }
    for col in 0..order {
        seen.fill(usize::MAX);
        for row in 0..order {
            let v = table[row * order + col] as usize;
            if seen[v] != usize::MAX {
                return Err(GroupError::ColumnRepeat {
                    column: col,
                    value: v,
                    first: seen[v],
                    second: row,
                });
            }
            seen[v] = row;
        }
    }

    let identity = (0..order)
        .find(|&e| (0..order).all(|g| table[e * order + g] as usize == g && table[g * order + e] as usize == g))
        .ok_or(GroupError::NoIdentity)?;

    let mut inverses = vec![0u32; order];
    for g in 0..order {
        let h = (0..order)
            .find(|&h| table[g * order + h] as usize == identity)
            .expect("Latin square row contains the identity");
        let left_product = table[h * order + g] as usize;
        if left_product != identity {
            return Err(GroupError::MissingInverse {
                element: g,
                right: h,
                left_product,
            });
        }
        inverses[g] = h as u32;
    }

    let associativity = check_associativity(order, table)?;
    Ok(TableParts {
        identity,
        inverses,
        associativity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_c2() {
        let g = parse_table("2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.multiply(1, 1), 0);
    }

    #[test]
    fn identity_need_not_be_zero() {
        // C_2 with identity stored at index 1
        let g = parse_table("2\n1 0\n0 1\n").unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inverse(0), 0);
    }

    #[test]
    fn duplicated_row_entry_is_a_latin_square_error() {
        let err = parse_table("3\n0 1 2\n1 1 0\n2 0 1\n").unwrap_err();
        assert!(
            matches!(err, GroupError::RowRepeat { row: 1, value: 1, first: 0, second: 1 }),
            "{err}"
        );
    }

    #[test]
    fn column_repeat_is_reported() {
        let err = parse_table("2\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(err, GroupError::ColumnRepeat { column: 0, .. }), "{err}");
    }

    #[test]
    fn latin_square_without_identity() {
        // x*y = (2x + y) mod 3 has a left identity 0 but no two-sided one
        let err = parse_table("3\n0 1 2\n2 0 1\n1 2 0\n").unwrap_err();
        assert!(matches!(err, GroupError::NoIdentity), "{err}");
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(parse_table(""), Err(GroupError::Parse { .. })));
        assert!(matches!(parse_table("x\n"), Err(GroupError::Parse { line: 1, .. })));
        assert!(matches!(parse_table("2\n0 1\n"), Err(GroupError::Parse { .. })));
        assert!(matches!(parse_table("2\n0 1\n1 2\n"), Err(GroupError::Parse { line: 3, .. })));
        assert!(matches!(parse_table("2\n0 1 1\n1 0\n"), Err(GroupError::Parse { line: 2, .. })));
        assert!(matches!(parse_table("2\n0 1\n1 0\n0\n"), Err(GroupError::Parse { line: 4, .. })));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let d = crate::group::build_dihedral(5).unwrap();
        let mut buf = Vec::new();
        write_table(&d, &mut buf).unwrap();
        let back = load_table(buf.as_slice()).unwrap();
        assert_eq!(back, d);
    }
}
