//! The textual rig format.
//!
//! ```text
//! rig chain3
//! carrier 0 1/2 1
//! zero 0
//! one 1
//! add
//! 0 1/2 1
//! 1/2 1/2 1
//! 1 1 1
//! mul
//! 0 0 0
//! 0 1/2 1/2
//! 0 1/2 1
//! infinitary join
//! ```

use super::{FiniteRig, InfinitaryRule, RigError};
use crate::text::{Line, Lines};

fn err(line: usize, column: usize, message: impl Into<String>) -> RigError {
    RigError::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_rig(text: &str) -> Result<FiniteRig, RigError> {
    let mut lines = Lines::new(text);
    let mut name = None;
    let mut carrier: Option<Vec<String>> = None;
    let mut zero = None;
    let mut one = None;
    let mut add = None;
    let mut mul = None;
    let mut infinitary: Option<Option<InfinitaryRule>> = None;
    let mut last_line = 1;

    while let Some(line) = lines.next_content() {
        last_line = line.number;
        let (kw, kw_col) = line.tokens[0];
        let args = &line.tokens[1..];
        let dup = |seen: bool| {
            if seen {
                Err(err(line.number, kw_col, format!("duplicate `{kw}` line")))
            } else {
                Ok(())
            }
        };
        match kw {
            "rig" => {
                dup(name.is_some())?;
                name = Some(single_arg(&line, args)?.to_string());
            }
            "carrier" => {
                dup(carrier.is_some())?;
                if args.is_empty() {
                    return Err(err(line.number, line.end_column(), "carrier needs elements"));
                }
                let mut labels: Vec<String> = Vec::new();
                for &(tok, col) in args {
                    if labels.iter().any(|l| l == tok) {
                        return Err(err(line.number, col, format!("duplicate element `{tok}`")));
                    }
                    labels.push(tok.to_string());
                }
                carrier = Some(labels);
            }
            "zero" | "one" => {
                dup(if kw == "zero" { zero.is_some() } else { one.is_some() })?;
                let c = need_carrier(&carrier, &line, kw_col)?;
                let tok = single_arg(&line, args)?;
                let idx = lookup(c, tok, line.number, args[0].1)?;
                if kw == "zero" {
                    zero = Some(idx);
                } else {
                    one = Some(idx);
                }
            }
            "add" | "mul" => {
                dup(if kw == "add" { add.is_some() } else { mul.is_some() })?;
                if let Some(&(tok, col)) = args.first() {
                    return Err(err(line.number, col, format!("unexpected `{tok}` after `{kw}`")));
                }
                let c = need_carrier(&carrier, &line, kw_col)?;
                let table = read_table(&mut lines, c, kw, line.number)?;
                if kw == "add" {
                    add = Some(table);
                } else {
                    mul = Some(table);
                }
            }
            "infinitary" => {
                dup(infinitary.is_some())?;
                let tok = single_arg(&line, args)?;
                infinitary = Some(match tok {
                    "join" => Some(InfinitaryRule::Join),
                    "none" => None,
                    other => {
                        return Err(err(
                            line.number,
                            args[0].1,
                            format!("unknown infinitary rule `{other}` (expected join or none)"),
                        ))
                    }
                });
            }
            other => {
                return Err(err(line.number, kw_col, format!("unknown directive `{other}`")));
            }
        }
    }

    let missing = |what: &str| err(last_line, 1, format!("missing `{what}` line"));
    let name = name.ok_or_else(|| missing("rig"))?;
    let carrier = carrier.ok_or_else(|| missing("carrier"))?;
    let zero = zero.ok_or_else(|| missing("zero"))?;
    let one = one.ok_or_else(|| missing("one"))?;
    let add = add.ok_or_else(|| missing("add"))?;
    let mul = mul.ok_or_else(|| missing("mul"))?;
    FiniteRig::new(name, carrier, zero, one, add, mul, infinitary.flatten())
}

fn single_arg<'a>(line: &Line<'a>, args: &[(&'a str, usize)]) -> Result<&'a str, RigError> {
    match args {
        [(tok, _)] => Ok(tok),
        [] => Err(err(line.number, line.end_column(), "missing argument")),
        [_, (tok, col), ..] => Err(err(line.number, *col, format!("unexpected `{tok}`"))),
    }
}

fn need_carrier<'c>(carrier: &'c Option<Vec<String>>, line: &Line<'_>, col: usize) -> Result<&'c [String], RigError> {
    carrier
        .as_deref()
        .ok_or_else(|| err(line.number, col, "`carrier` must come first"))
}

fn lookup(carrier: &[String], tok: &str, line: usize, col: usize) -> Result<usize, RigError> {
    carrier
        .iter()
        .position(|l| l == tok)
        .ok_or_else(|| err(line, col, format!("`{tok}` is not a carrier element")))
}

fn read_table(
    lines: &mut Lines<'_>,
    carrier: &[String],
    kw: &str,
    header_line: usize,
) -> Result<Vec<Vec<usize>>, RigError> {
    let n = carrier.len();
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let line = lines
            .next_content()
            .ok_or_else(|| err(header_line, 1, format!("`{kw}` table ended after {r} of {n} rows")))?;
        if line.tokens.len() < n {
            return Err(err(
                line.number,
                line.end_column(),
                format!("`{kw}` row {} has {} entries, expected {n}", r + 1, line.tokens.len()),
            ));
        }
        if line.tokens.len() > n {
            let (tok, col) = line.tokens[n];
            return Err(err(line.number, col, format!("extra entry `{tok}` in `{kw}` row")));
        }
        let row = line
            .tokens
            .iter()
            .map(|&(tok, col)| lookup(carrier, tok, line.number, col))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Canonical serialization. Custom infinitary rules have no textual form
/// and are written as `infinitary none`.
pub fn write_rig(rig: &FiniteRig) -> String {
    let mut out = String::new();
    out.push_str(&format!("rig {}\n", rig.name()));
    let labels: Vec<&str> = rig.elements().map(|e| rig.label(e)).collect();
    out.push_str(&format!("carrier {}\n", labels.join(" ")));
    out.push_str(&format!("zero {}\n", rig.label(rig.zero())));
    out.push_str(&format!("one {}\n", rig.label(rig.one())));
    for (kw, op) in [
        ("add", FiniteRig::add as fn(&FiniteRig, _, _) -> _),
        ("mul", FiniteRig::mul),
    ] {
        out.push_str(kw);
        out.push('\n');
        for a in rig.elements() {
            let row: Vec<&str> = rig.elements().map(|b| rig.label(op(rig, a, b))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    let rule = match rig.infinitary() {
        Some(InfinitaryRule::Join) => "join",
        _ => "none",
    };
    out.push_str(&format!("infinitary {rule}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn bundled_files_round_trip() {
        for name in corpus::RIG_NAMES {
            let text = corpus::rig_text(name).unwrap();
            let rig = parse_rig(text).unwrap();
            assert_eq!(rig.name(), *name);
            let again = parse_rig(&write_rig(&rig)).unwrap();
            assert_eq!(rig, again);
        }
    }

    #[test]
    fn short_row_reports_line_and_column() {
        let text = "rig b\ncarrier 0 1\nzero 0\none 1\nadd\n0 1\n1\nmul\n0 0\n0 1\n";
        match parse_rig(text).unwrap_err() {
            RigError::Parse { line, column, .. } => {
                assert_eq!(line, 7);
                assert_eq!(column, 2);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn unknown_element_points_at_token() {
        let text = "rig b\ncarrier 0 1\nzero 0\none 1\nadd\n0 1\n1 7\nmul\n0 0\n0 1\n";
        match parse_rig(text).unwrap_err() {
            RigError::Parse { line, column, message } => {
                assert_eq!((line, column), (7, 3));
                assert!(message.contains('7'));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a rig\n\nrig b # trailing\ncarrier 0 1\nzero 0\none 1\nadd\n0 1\n\n1 1\nmul\n0 0\n0 1\ninfinitary join\n";
        let rig = parse_rig(text).unwrap();
        assert_eq!(rig, corpus::rig("bool").unwrap().renamed("b"));
    }

    #[test]
    fn missing_table_is_an_error() {
        let text = "rig b\ncarrier 0 1\nzero 0\none 1\nadd\n0 1\n1 1\n";
        assert!(matches!(parse_rig(text), Err(RigError::Parse { .. })));
    }
}
