//! Reports rendered as JSON or as `key: value` text from one ordered field
//! list, so both renderings carry the same number strings.

use dgla_core::{GaugeResult, Verdict};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i128),
    Bool(bool),
    Text(String),
    Float(f64),
    Floats(Vec<f64>),
    Ints(Vec<usize>),
}

/// 17 significant digits; non-finite values become `null`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        // `+ 0.0` folds -0 into 0
        format!("{:.16e}", x + 0.0)
    } else {
        "null".into()
    }
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Value::Float(x) => format_float(*x),
            Value::Floats(xs) => list(xs.iter().map(|x| format_float(*x))),
            Value::Ints(xs) => list(xs.iter().map(|x| x.to_string())),
        }
    }

    fn text(&self) -> String {
        match self {
            Value::Text(s) => s.clone(),
            other => other.json(),
        }
    }
}

fn list(items: impl Iterator<Item = String>) -> String {
    format!("[{}]", items.collect::<Vec<_>>().join(", "))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.text("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        let key = key.into();
        match self.fields.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key, value)),
        }
        self
    }

    pub fn int(&mut self, key: &str, n: usize) -> &mut Self {
        self.push(key, Value::Int(n as i128))
    }

    pub fn text(&mut self, key: &str, s: impl Into<String>) -> &mut Self {
        self.push(key, Value::Text(s.into()))
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn fields(&self) -> &[(String, Value)] {
        &self.fields
    }

    pub fn verdict(&mut self, v: &Verdict) -> &mut Self {
        self.text("criterion", v.criterion.clone());
        for (k, d) in &v.cohomology_dims {
            self.int(&format!("H{k}"), *d);
        }
        self.push(
            "obstruction_degree",
            Value::Int(v.obstruction_degree.into()),
        );
        self.int("obstruction_dim", v.obstruction_dim());
        self.int("tangent_dim", v.tangent_dim);
        self.push("passes", Value::Bool(v.passes));
        self.text("conclusion", v.conclusion())
    }

    pub fn gauge(&mut self, g: &GaugeResult) -> &mut Self {
        self.push("converged", Value::Bool(g.converged));
        self.int("iterations", g.iterations);
        self.push("residual", Value::Float(g.residual));
        self.push("v", Value::Floats(g.v.clone()));
        self.push("x", Value::Floats(g.x.clone()))
    }

    pub fn to_json(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| {
                format!(
                    "  {}: {}",
                    serde_json::to_string(k).expect("strings serialize"),
                    v.json()
                )
            })
            .collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }

    /// `passes`/`valid`/`converged` are colored when `color` is set.
    pub fn to_text(&self, color: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let s = v.text();
            let s = match v {
                Value::Bool(b)
                    if color && matches!(k.as_str(), "passes" | "valid" | "converged") =>
                {
                    format!("\x1b[{}m{s}\x1b[0m", if *b { 32 } else { 31 })
                }
                _ => s,
            };
            out.push_str(&format!("{k}: {s}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn sample() -> Report {
        let mut r = Report::new("rigidity");
        r.verdict(&Verdict::new(
            "lie-rigidity",
            BTreeMap::from([(0, 0), (1, 0), (2, 0)]),
            2,
            3,
        ));
        r.push("residual", Value::Float(1.0 / 3.0));
        r
    }

    #[test]
    fn json_parses_and_matches_fields() {
        let r = sample();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["passes"], true);
        assert_eq!(v["H2"], 0);
        assert_eq!(v["tangent_dim"], 3);
        assert_eq!(v["residual"].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn text_uses_the_same_number_strings() {
        let text = sample().to_text(false);
        assert!(text.contains("residual: 3.3333333333333331e-1\n"), "{text}");
        assert!(text.contains("criterion: lie-rigidity\n"));
    }

    #[test]
    fn color_only_on_request() {
        assert!(!sample().to_text(false).contains('\x1b'));
        assert!(sample().to_text(true).contains("\x1b[32mtrue"));
    }

    #[test]
    fn floats_keep_full_precision() {
        for x in [0.1, 1e-300, -2.5e17, std::f64::consts::PI] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(f64::NAN), "null");
    }
}
