//! Matrix files: `mat <name> <rig> <cod> <dom>` followed by `cod` rows of
//! `dom` element labels. Rows are omitted when `dom` is zero.

use super::{MatError, RigMatrix};
use crate::rig::FiniteRig;
use crate::text::Lines;

fn err(line: usize, column: usize, message: impl Into<String>) -> MatError {
    MatError::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_matrices(text: &str, rig: &FiniteRig) -> Result<Vec<(String, RigMatrix)>, MatError> {
    let mut lines = Lines::new(text);
    let mut out: Vec<(String, RigMatrix)> = Vec::new();
    while let Some(line) = lines.next_content() {
        let (kw, col) = line.tokens[0];
        if kw != "mat" {
            return Err(err(line.number, col, format!("unknown directive `{kw}`")));
        }
        let [_, (name, ncol), (rig_name, _), (cod, ccol), (dom, dcol)] = line.tokens[..] else {
            let c = line.tokens.get(5).map_or(line.end_column(), |t| t.1);
            return Err(err(line.number, c, "expected `mat <name> <rig> <cod> <dom>`"));
        };
        if out.iter().any(|(n, _)| n == name) {
            return Err(err(line.number, ncol, format!("matrix `{name}` defined twice")));
        }
        if rig_name != rig.name() {
            return Err(MatError::RigMismatch {
                expected: rig.name().to_string(),
                found: rig_name.to_string(),
            });
        }
        let size = |tok: &str, c: usize| {
            tok.parse::<usize>()
                .map_err(|_| err(line.number, c, format!("`{tok}` is not a size")))
        };
        let (cod, dom) = (size(cod, ccol)?, size(dom, dcol)?);
        let mut entries = Vec::with_capacity(cod * dom);
        if dom > 0 {
            for i in 0..cod {
                let row = lines.next_content().ok_or_else(|| {
                    err(
                        lines.last_number(),
                        1,
                        format!("matrix `{name}` ended after {i} of {cod} rows"),
                    )
                })?;
                if row.tokens.len() < dom {
                    return Err(err(
                        row.number,
                        row.end_column(),
                        format!("row has {} entries, expected {dom}", row.tokens.len()),
                    ));
                }
                if let Some(&(tok, c)) = row.tokens.get(dom) {
                    return Err(err(row.number, c, format!("extra entry `{tok}`")));
                }
                for &(tok, c) in &row.tokens {
                    let e = rig
                        .elem(tok)
                        .ok_or_else(|| err(row.number, c, format!("`{tok}` is not an element of {}", rig.name())))?;
                    entries.push(e);
                }
            }
        }
        out.push((name.to_string(), RigMatrix::new(cod, dom, entries)));
    }
    Ok(out)
}

pub fn write_matrix(name: &str, m: &RigMatrix, rig: &FiniteRig) -> String {
    let mut out = format!("mat {name} {} {} {}\n", rig.name(), m.cod(), m.dom());
    if m.dom() > 0 {
        for i in 0..m.cod() {
            let row: Vec<&str> = (0..m.dom()).map(|j| rig.label(m.get(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn write_matrices(mats: &[(String, RigMatrix)], rig: &FiniteRig) -> String {
    mats.iter().map(|(n, m)| write_matrix(n, m, rig)).collect()
}
