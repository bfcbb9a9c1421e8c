//! Report assembly and serialization.

use bsi_core::{BaselineScores, PartitionEvaluation};
use serde_json::{json, Map, Number, Value};

use crate::io::fmt17;

pub const SCHEMA_VERSION: u32 = 1;

/// Output encoding for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Rewrites every float in `v` with 17 significant digits.
pub fn normalize_floats(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                *v = if x.is_finite() {
                    Value::Number(fmt17(x).parse::<Number>().expect("formatted float parses"))
                } else {
                    Value::Null
                };
            }
        }
        Value::Array(items) => items.iter_mut().for_each(normalize_floats),
        Value::Object(map) => map.values_mut().for_each(normalize_floats),
        _ => {}
    }
}

pub fn to_json(mut v: Value) -> String {
    normalize_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Flattens a report into `key,value` rows with dotted / indexed keys.
pub fn to_key_value_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&key(&(i + 1).to_string()), v, out)),
            Value::Null => out.push((prefix.into(), String::new())),
            Value::Number(n) => out.push((
                prefix.into(),
                match (n.as_i64(), n.as_u64(), n.as_f64()) {
                    (Some(i), _, _) => i.to_string(),
                    (_, Some(u), _) => u.to_string(),
                    (_, _, Some(x)) => fmt17(x),
                    _ => n.to_string(),
                },
            )),
            Value::String(s) => out.push((prefix.into(), s.clone())),
            Value::Bool(b) => out.push((prefix.into(), b.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn render(v: Value, format: Format) -> String {
    match format {
        Format::Json => to_json(v),
        Format::Csv => {
            let mut v = v;
            normalize_floats(&mut v);
            to_key_value_csv(&v)
        }
    }
}

/// Warnings worth surfacing for an evaluated partition.
pub fn partition_warnings(eval: &PartitionEvaluation, d: usize) -> Vec<String> {
    let mut out = Vec::new();
    for c in eval.frequency.empty_clusters() {
        out.push(format!("cluster {} is empty", c + 1));
    }
    for g in &eval.geometry.clusters {
        if g.member_count > 0 && g.member_count <= d {
            out.push(format!(
                "cluster {} has {} point(s) in {} dimensions; its spread is rank-deficient",
                g.cluster_id + 1,
                g.member_count,
                d
            ));
        }
        if g.floored {
            out.push(format!("cluster {}: geometric measure raised to the floor", g.cluster_id + 1));
        }
    }
    if eval.report.k == 1 {
        out.push("k = 1: the index is trivially 1".into());
    }
    out
}

/// Core of every partition report: index, both distributions and per-cluster geometry.
pub fn partition_section(eval: &PartitionEvaluation, label_names: Option<&[String]>) -> Map<String, Value> {
    let per_cluster: Vec<Value> = eval
        .geometry
        .clusters
        .iter()
        .map(|g| {
            let mut m = json!({
                "cluster_id": g.cluster_id + 1,
                "member_count": g.member_count,
                "frequency": eval.frequency.distribution.weights()[g.cluster_id],
                "geometric": eval.geometry.distribution.weights()[g.cluster_id],
                "singular_values": g.singular_values,
                "volume": g.volume,
                "measure": g.measure,
                "floored": g.floored,
            });
            if let Some(names) = label_names {
                m["label"] = json!(names[g.cluster_id]);
            }
            m
        })
        .collect();
    let mut m = Map::new();
    m.insert("bsi".into(), json!(eval.report));
    m.insert("frequency".into(), json!(eval.frequency.distribution.weights()));
    m.insert("geometric".into(), json!(eval.geometry.distribution.weights()));
    m.insert("per_cluster".into(), Value::Array(per_cluster));
    m
}

pub fn baselines_value(b: &BaselineScores) -> Value {
    json!(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_get_seventeen_digits() {
        let s = to_json(json!({"a": 0.1, "n": 3, "inf": f64::INFINITY}));
        assert!(s.contains("0.10000000000000001"), "{s}");
        assert!(s.contains("\"n\": 3"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn csv_flattening() {
        let s = to_key_value_csv(&json!({"a": {"b": [1, 2]}, "c": "x,y"}));
        assert_eq!(s, "key,value\na.b.1,1\na.b.2,2\nc,\"x,y\"\n");
    }
}
