//! Human-readable rendering of the JSON output. Arrays of scalar rows become
//! right-aligned tables.

use serde_json::Value;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, None, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn scalar_row(v: &Value) -> Option<Vec<String>> {
    v.as_array()?.iter().map(scalar).collect()
}

fn table(rows: &[Vec<String>], indent: usize) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        out.push_str(&" ".repeat(indent));
        out.push_str("[ ");
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        out.push_str(&cells.join("  "));
        out.push_str(" ]\n");
    }
    out
}

fn render_into(out: &mut String, key: Option<&str>, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    let label = key.map(|k| format!("{pad}{k}:")).unwrap_or_default();
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{}{s}\n", if key.is_some() { format!("{label} ") } else { pad }));
        return;
    }
    match v {
        Value::Array(items) if items.is_empty() => {
            out.push_str(&format!("{}(none)\n", if key.is_some() { format!("{label} ") } else { pad }));
        }
        Value::Array(items) => {
            if let Some(row) = scalar_row(v) {
                let line = format!("({})", row.join(", "));
                out.push_str(&format!("{}{line}\n", if key.is_some() { format!("{label} ") } else { pad }));
                return;
            }
            if key.is_some() {
                out.push_str(&format!("{label}\n"));
            }
            let rows: Option<Vec<Vec<String>>> = items.iter().map(scalar_row).collect();
            match rows {
                Some(rows) => out.push_str(&table(&rows, indent + 2)),
                None => {
                    for (i, item) in items.iter().enumerate() {
                        render_into(out, Some(&format!("[{i}]")), item, indent + 2);
                    }
                }
            }
        }
        Value::Object(map) => {
            let inner = if key.is_some() {
                out.push_str(&format!("{label}\n"));
                indent + 2
            } else {
                indent
            };
            for (k, item) in map {
                render_into(out, Some(k), item, inner);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn matrices_are_aligned() {
        let s = render(&json!({"a": [[1, 0], [10, -2]], "order": 9}));
        assert_eq!(s, "a:\n  [  1   0 ]\n  [ 10  -2 ]\norder: 9\n");
    }

    #[test]
    fn vectors_are_inline() {
        assert_eq!(render(&json!({"q": [1, 1, -1]})), "q: (1, 1, -1)\n");
    }
}
