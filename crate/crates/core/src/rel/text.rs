//! Relation files.
//!
//! ```text
//! set X a b c
//! set Y y
//! rel r X Y
//! 1
//! 0
//! 0
//! ```
//!
//! Each row is a domain element, each column a codomain element. When the
//! codomain is empty the rows carry no information and are omitted. The
//! unit `I = {*}` may be used without being declared.

use super::{FinSet, RelError, Relation};
use crate::bitmat::BoolMat;
use crate::text::Lines;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelDocument {
    pub sets: Vec<FinSet>,
    pub relations: Vec<(String, Relation)>,
}

impl RelDocument {
    /// Document declaring every set the relations use, in first-use order.
    pub fn from_relations(relations: Vec<(String, Relation)>) -> Self {
        let mut sets: Vec<FinSet> = Vec::new();
        for (_, r) in &relations {
            for s in [r.dom(), r.cod()] {
                if !sets.contains(s) {
                    sets.push(s.clone());
                }
            }
        }
        RelDocument { sets, relations }
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> RelError {
    RelError::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_relations(text: &str) -> Result<RelDocument, RelError> {
    let mut lines = Lines::new(text);
    let mut doc = RelDocument::default();
    while let Some(line) = lines.next_content() {
        let (kw, col) = line.tokens[0];
        match kw {
            "set" => {
                let Some(&(label, lcol)) = line.tokens.get(1) else {
                    return Err(err(line.number, line.end_column(), "`set` needs a label"));
                };
                if doc.sets.iter().any(|s| s.label() == label) {
                    return Err(err(line.number, lcol, format!("set `{label}` declared twice")));
                }
                let elems = &line.tokens[2..];
                for (i, &(e, ecol)) in elems.iter().enumerate() {
                    if elems[..i].iter().any(|&(o, _)| o == e) {
                        return Err(err(line.number, ecol, format!("duplicate element `{e}`")));
                    }
                }
                doc.sets.push(FinSet::new(label, elems.iter().map(|&(e, _)| e))?);
            }
            "rel" => {
                let [_, (name, ncol), (dom, dcol), (cod, ccol)] = line.tokens[..] else {
                    let c = line.tokens.get(4).map_or(line.end_column(), |t| t.1);
                    return Err(err(line.number, c, "expected `rel <name> <dom> <cod>`"));
                };
                if doc.relations.iter().any(|(n, _)| n == name) {
                    return Err(err(line.number, ncol, format!("relation `{name}` defined twice")));
                }
                let find = |label: &str, c: usize| {
                    doc.sets
                        .iter()
                        .find(|s| s.label() == label)
                        .cloned()
                        .or_else(|| (label == "I").then(FinSet::unit))
                        .ok_or_else(|| err(line.number, c, format!("undeclared set `{label}`")))
                };
                let dom = find(dom, dcol)?;
                let cod = find(cod, ccol)?;
                let mut mat = BoolMat::zeros(dom.len(), cod.len());
                if !cod.is_empty() {
                    for i in 0..dom.len() {
                        let row = lines.next_content().ok_or_else(|| {
                            err(
                                lines.last_number(),
                                1,
                                format!("relation `{name}` ended after {i} of {} rows", dom.len()),
                            )
                        })?;
                        if row.tokens.len() != 1 {
                            let c = row.tokens.get(1).map_or(1, |t| t.1);
                            return Err(err(row.number, c, "a row is a single word of 0/1 characters"));
                        }
                        let (bits, bcol) = row.tokens[0];
                        for (j, ch) in bits.chars().enumerate() {
                            if j >= cod.len() {
                                return Err(err(
                                    row.number,
                                    bcol + j,
                                    format!("row has more than {} entries", cod.len()),
                                ));
                            }
                            match ch {
                                '0' => {}
                                '1' => mat.set(i, j, true),
                                _ => return Err(err(row.number, bcol + j, format!("expected 0 or 1, found `{ch}`"))),
                            }
                        }
                        let n = bits.chars().count();
                        if n < cod.len() {
                            return Err(err(
                                row.number,
                                bcol + n,
                                format!("row has {n} entries, expected {}", cod.len()),
                            ));
                        }
                    }
                }
                doc.relations
                    .push((name.to_string(), Relation::from_matrix(dom, cod, mat)));
            }
            other => {
                return Err(err(line.number, col, format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(doc)
}

pub fn write_relations(doc: &RelDocument) -> String {
    let mut out = String::new();
    let mut declared: Vec<&FinSet> = Vec::new();
    let used = doc.relations.iter().flat_map(|(_, r)| [r.dom(), r.cod()]);
    for s in doc.sets.iter().chain(used) {
        if declared.iter().any(|d| d.label() == s.label()) {
            continue;
        }
        declared.push(s);
        out.push_str("set ");
        out.push_str(s.label());
        for e in s.elements() {
            out.push(' ');
            out.push_str(e);
        }
        out.push('\n');
    }
    for (name, r) in &doc.relations {
        out.push_str(&format!("rel {name} {} {}\n", r.dom().label(), r.cod().label()));
        if !r.cod().is_empty() {
            for i in 0..r.dom().len() {
                for j in 0..r.cod().len() {
                    out.push(if r.matrix().get(i, j) { '1' } else { '0' });
                }
                out.push('\n');
            }
        }
    }
    out
}
