//! Instance file formats.
//!
//! Text: first line `n c k`, then `n` lines `p w`; item ids are the 0-based
//! line order. JSON: `{"capacity":..,"cardinality_bound":..,"items":[{"profit":..,"weight":..}]}`.
//! Both writers are byte-deterministic: items in id order, single spaces,
//! `\n` line endings, compact JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Item};

#[derive(Serialize, Deserialize)]
struct JsonItem {
    profit: u64,
    weight: u64,
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    capacity: u64,
    cardinality_bound: usize,
    items: Vec<JsonItem>,
}

pub fn parse_text(src: &str) -> Result<Instance> {
    let mut lines = src
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::Parse(format!(
            "header must be 'n c k', got '{header}'"
        )));
    }
    let num = |s: &str, what: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::Parse(format!("bad {what} '{s}'")))
    };
    let n = num(head[0], "item count")? as usize;
    let c = num(head[1], "capacity")?;
    let k = num(head[2], "cardinality bound")? as usize;
    let mut pairs = Vec::with_capacity(n);
    for (lineno, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected 'p w', got '{line}'",
                lineno + 1
            )));
        }
        pairs.push((num(f[0], "profit")?, num(f[1], "weight")?));
    }
    if pairs.len() != n {
        return Err(Error::Parse(format!(
            "header announces {n} items, found {}",
            pairs.len()
        )));
    }
    Instance::from_pairs(&pairs, c, k)
}

pub fn parse_json(src: &str) -> Result<Instance> {
    let raw: JsonInstance =
        serde_json::from_str(src).map_err(|e| Error::Parse(format!("json: {e}")))?;
    let pairs: Vec<(u64, u64)> = raw.items.iter().map(|it| (it.profit, it.weight)).collect();
    Instance::from_pairs(&pairs, raw.capacity, raw.cardinality_bound)
}

/// Detects the format from the first non-blank character.
pub fn parse_auto(src: &str) -> Result<Instance> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

fn ordered(inst: &Instance) -> &[Item] {
    inst.items()
}

/// Writes the text format. Ids are not stored, so an instance whose ids are
/// not `0..n` is renumbered by position.
pub fn write_text(inst: &Instance) -> String {
    let mut out = format!(
        "{} {} {}\n",
        inst.len(),
        inst.capacity(),
        inst.cardinality_bound()
    );
    for it in ordered(inst) {
        out.push_str(&format!("{} {}\n", it.profit, it.weight));
    }
    out
}

pub fn write_json(inst: &Instance) -> String {
    let raw = JsonInstance {
        capacity: inst.capacity(),
        cardinality_bound: inst.cardinality_bound(),
        items: ordered(inst)
            .iter()
            .map(|it| JsonItem {
                profit: it.profit,
                weight: it.weight,
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&raw).expect("instance serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E1: &str = "4 6 2\n10 4\n7 3\n5 2\n3 1\n";

    #[test]
    fn text_and_json_agree() {
        let a = parse_text(E1).unwrap();
        let json = write_json(&a);
        assert_eq!(
            json,
            "{\"capacity\":6,\"cardinality_bound\":2,\"items\":[{\"profit\":10,\"weight\":4},{\"profit\":7,\"weight\":3},{\"profit\":5,\"weight\":2},{\"profit\":3,\"weight\":1}]}\n"
        );
        assert_eq!(parse_auto(&json).unwrap(), a);
        assert_eq!(write_text(&a), E1);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_text("").is_err());
        assert!(parse_text("2 5 1\n1 1\n").is_err());
        assert!(parse_text("1 5\n1 1\n").is_err());
        assert!(parse_text("1 5 1\n1 x\n").is_err());
        assert!(parse_json("{\"capacity\":1}").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(pairs in prop::collection::vec((1u64..1000, 1u64..1000), 1..20), c in 1u64..5000, k in 1usize..20) {
            let inst = Instance::from_pairs(&pairs, c, k).unwrap();
            prop_assert_eq!(parse_text(&write_text(&inst)).unwrap(), inst.clone());
            prop_assert_eq!(parse_json(&write_json(&inst)).unwrap(), inst);
        }
    }
}
