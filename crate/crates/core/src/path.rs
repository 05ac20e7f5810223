//! Document paths in JSON Pointer form (`/provenance/contributors/0/name`)
//! and field patterns where `*` stands for any array index or object key.

use std::cmp::Ordering;

use serde_json::Value;

pub const ROOT: &str = "/";

/// Escapes a single key for use as a pointer segment.
pub fn escape(segment: &str) -> String {
    segment.replace('~', "~0").replace('/', "~1")
}

pub fn join(base: &str, segment: impl AsRef<str>) -> String {
    let segment = escape(segment.as_ref());
    if base == ROOT || base.is_empty() {
        format!("/{segment}")
    } else {
        format!("{base}/{segment}")
    }
}

pub fn join_index(base: &str, index: usize) -> String {
    join(base, index.to_string())
}

fn segments(path: &str) -> impl Iterator<Item = &str> {
    path.split('/').filter(|s| !s.is_empty())
}

/// Orders paths segment by segment, comparing numeric segments as numbers
/// so `/a/2` sorts before `/a/10`.
pub fn compare(a: &str, b: &str) -> Ordering {
    let mut left = segments(a);
    let mut right = segments(b);
    loop {
        match (left.next(), right.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(l), Some(r)) => {
                let ord = match (l.parse::<u64>(), r.parse::<u64>()) {
                    (Ok(x), Ok(y)) => x.cmp(&y),
                    (Ok(_), Err(_)) => Ordering::Less,
                    (Err(_), Ok(_)) => Ordering::Greater,
                    (Err(_), Err(_)) => l.cmp(r),
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

/// Resolves a concrete pointer. `/` is the document root.
pub fn resolve<'a>(root: &'a Value, pointer: &str) -> Option<&'a Value> {
    if pointer == ROOT || pointer.is_empty() {
        Some(root)
    } else {
        root.pointer(pointer)
    }
}

/// Present and non-blank: whitespace-only strings, empty arrays, empty
/// objects and `null` all count as empty.
pub fn is_populated(value: &Value) -> bool {
    match value {
        Value::Null => false,
        Value::String(s) => !s.trim().is_empty(),
        Value::Array(items) => !items.is_empty(),
        Value::Object(map) => !map.is_empty(),
        Value::Bool(_) | Value::Number(_) => true,
    }
}

/// Every concrete location matching `pattern`, in document order.
pub fn instances<'a>(root: &'a Value, pattern: &str) -> Vec<(String, &'a Value)> {
    let mut out = Vec::new();
    let parts: Vec<&str> = segments(pattern).collect();
    collect(root, &parts, String::new(), &mut out);
    out
}

fn collect<'a>(value: &'a Value, parts: &[&str], here: String, out: &mut Vec<(String, &'a Value)>) {
    let Some((head, rest)) = parts.split_first() else {
        let here = if here.is_empty() { ROOT.to_string() } else { here };
        out.push((here, value));
        return;
    };
    if *head == "*" {
        match value {
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    collect(item, rest, join_index(&here, i), out);
                }
            }
            Value::Object(map) => {
                for (key, item) in map {
                    collect(item, rest, join(&here, key), out);
                }
            }
            _ => {}
        }
    } else if let Some(child) = value.as_object().and_then(|m| m.get(*head)) {
        collect(child, rest, join(&here, head), out);
    }
}

/// Concrete paths of the populated instances of `pattern`.
pub fn populated_instances(root: &Value, pattern: &str) -> Vec<String> {
    instances(root, pattern)
        .into_iter()
        .filter(|(_, v)| is_populated(v))
        .map(|(p, _)| p)
        .collect()
}

/// Strict reading used for mandatory fields: every wildcard must range
/// over a non-empty collection, every named segment must exist, and every
/// reached leaf must be populated.
pub fn fully_populated(root: &Value, pattern: &str) -> bool {
    let parts: Vec<&str> = segments(pattern).collect();
    strict(root, &parts)
}

fn strict(value: &Value, parts: &[&str]) -> bool {
    let Some((head, rest)) = parts.split_first() else {
        return is_populated(value);
    };
    if *head == "*" {
        match value {
            Value::Array(items) => !items.is_empty() && items.iter().all(|v| strict(v, rest)),
            Value::Object(map) => !map.is_empty() && map.values().all(|v| strict(v, rest)),
            _ => false,
        }
    } else {
        value
            .as_object()
            .and_then(|m| m.get(*head))
            .is_some_and(|child| strict(child, rest))
    }
}

/// Whether a concrete path is an instance of a pattern.
pub fn matches(pattern: &str, concrete: &str) -> bool {
    let p: Vec<&str> = segments(pattern).collect();
    let c: Vec<&str> = segments(concrete).collect();
    p.len() == c.len() && p.iter().zip(&c).all(|(p, c)| *p == "*" || p == c)
}

/// Whether `pattern` covers `other`: `other` has at least as many segments
/// and each of `pattern`'s segments matches (`*` on either side matches).
pub fn covers(pattern: &str, other: &str) -> bool {
    let p: Vec<&str> = segments(pattern).collect();
    let o: Vec<&str> = segments(other).collect();
    o.len() >= p.len() && p.iter().zip(&o).all(|(p, o)| *p == "*" || *o == "*" || p == o)
}

/// Syntactic validity of a pattern or pointer.
pub fn is_well_formed(path: &str) -> bool {
    path == ROOT || (path.starts_with('/') && !path.ends_with('/') && !path.contains("//"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numeric_segments_sort_numerically() {
        let mut paths = vec!["/io/input_subdomain/10", "/io/input_subdomain/2", "/io", "/etag"];
        paths.sort_by(|a, b| compare(a, b));
        assert_eq!(paths, vec!["/etag", "/io", "/io/input_subdomain/2", "/io/input_subdomain/10"]);
    }

    #[test]
    fn wildcard_instances() {
        let doc = json!({"a": [{"b": "x"}, {"b": " "}, {"c": 1}]});
        let found: Vec<String> = instances(&doc, "/a/*/b").into_iter().map(|(p, _)| p).collect();
        assert_eq!(found, vec!["/a/0/b", "/a/1/b"]);
        assert_eq!(populated_instances(&doc, "/a/*/b"), vec!["/a/0/b"]);
    }

    #[test]
    fn strict_population_requires_every_instance() {
        let good = json!({"a": [{"b": "x"}, {"b": "y"}]});
        let partial = json!({"a": [{"b": "x"}, {}]});
        let empty = json!({"a": []});
        assert!(fully_populated(&good, "/a/*/b"));
        assert!(!fully_populated(&partial, "/a/*/b"));
        assert!(!fully_populated(&empty, "/a/*/b"));
    }

    #[test]
    fn escaping_round_trips_through_pointer() {
        let doc = json!({"env": {"A/B": "1", "C~D": "2"}});
        let found: Vec<String> = instances(&doc, "/env/*").into_iter().map(|(p, _)| p).collect();
        assert_eq!(found, vec!["/env/A~1B", "/env/C~0D"]);
        for p in found {
            assert!(resolve(&doc, &p).is_some());
        }
    }

    #[test]
    fn pattern_coverage() {
        assert!(covers("/error/*", "/error/empirical_error/*"));
        assert!(covers("/io/input_subdomain/*", "/io/input_subdomain/*/uri"));
        assert!(!covers("/io/input_subdomain/*/uri", "/io/input_subdomain/*"));
        assert!(matches("/a/*/b", "/a/3/b"));
        assert!(!matches("/a/*/b", "/a/3/c"));
    }
}
