//! Rigs shipped with the crate.

use crate::rig::{parse_rig, FiniteRig};

pub const RIG_NAMES: &[&str] = &["bool", "chain3", "trunc3", "gf2", "trivial"];

pub fn rig_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "bool" => include_str!("../corpus/rigs/bool.rig"),
        "chain3" => include_str!("../corpus/rigs/chain3.rig"),
        "trunc3" => include_str!("../corpus/rigs/trunc3.rig"),
        "gf2" => include_str!("../corpus/rigs/gf2.rig"),
        "trivial" => include_str!("../corpus/rigs/trivial.rig"),
        _ => return None,
    })
}

/// Parses a bundled rig. `None` if no rig of that name is bundled.
pub fn rig(name: &str) -> Option<FiniteRig> {
    rig_text(name).map(|t| parse_rig(t).expect("bundled rig parses"))
}
