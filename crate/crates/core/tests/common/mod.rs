#![allow(dead_code)]

use primad_bco::bco::{from_value, BcoDocument};
use serde_json::Value;

pub const CONFORMANT: &str = include_str!("../fixtures/conformant.json");
pub const USE_CASE: &str = include_str!("../fixtures/use_case.json");
pub const GOLDEN_REPORT: &str = "tests/golden/conformant_report.json";

pub fn raw(text: &str) -> Value {
    serde_json::from_str(text).expect("fixture is valid JSON")
}

pub fn doc(value: &Value) -> BcoDocument {
    from_value(value.clone()).expect("fixture matches the model")
}

pub fn conformant() -> BcoDocument {
    doc(&raw(CONFORMANT))
}

pub fn use_case() -> BcoDocument {
    doc(&raw(USE_CASE))
}

fn unescape(segment: &str) -> String {
    segment.replace("~1", "/").replace("~0", "~")
}

/// Removes the member or element at a concrete pointer. Returns whether
/// anything was removed.
pub fn remove(root: &mut Value, pointer: &str) -> bool {
    let Some((parent, last)) = pointer.rsplit_once('/') else {
        return false;
    };
    let parent = if parent.is_empty() { Some(&mut *root) } else { root.pointer_mut(parent) };
    match parent {
        Some(Value::Object(map)) => map.remove(&unescape(last)).is_some(),
        Some(Value::Array(items)) => match last.parse::<usize>() {
            Ok(i) if i < items.len() => {
                items.remove(i);
                true
            }
            _ => false,
        },
        _ => false,
    }
}

/// Every concrete pointer to an object member, depth first.
pub fn member_pointers(value: &Value) -> Vec<String> {
    fn walk(v: &Value, at: &str, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let p = format!("{at}/{}", k.replace('~', "~0").replace('/', "~1"));
                    out.push(p.clone());
                    walk(child, &p, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(child, &format!("{at}/{i}"), out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(value, "", &mut out);
    out
}
