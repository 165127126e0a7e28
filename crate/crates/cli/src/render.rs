//! Plain-text rendering of JSON reports as aligned key/value tables.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(items) if items.iter().all(|x| x.is_array()) => {
            let rows: Vec<String> = items.iter().filter_map(scalar).collect();
            rows.iter().all(|r| !r.contains('\n')).then(|| format!("[{}]", rows.join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => {
                        let gap = width - k.chars().count();
                        out.push_str(&format!("{pad}{k}{}  {s}\n", " ".repeat(gap)));
                    }
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        write_value(out, x, indent + 2);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}[{i}]  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        write_value(out, x, indent + 2);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn table(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}
