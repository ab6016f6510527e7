//! Report documents: JSON with insertion-ordered keys and every float rounded
//! to 12 significant digits, so identical runs give identical bytes.

use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits; `-0.0` becomes `0.0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// A float as a document value; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    Number::from_f64(sig12(x)).map_or(Value::Null, Value::Number)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Rounds every float in a document built elsewhere.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Ordered object builder.
#[derive(Default)]
pub struct Doc(Map<String, Value>);

impl Doc {
    pub fn new() -> Self {
        Doc(Map::new())
    }

    pub fn put(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.0.insert(key.into(), value.into());
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

/// Pretty-printed document with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents are plain JSON");
    s.push('\n');
    s
}

/// Entropy fields in nats, plus bits when asked.
pub fn entropy(nats: f64, bits: bool) -> Value {
    let d = Doc::new().put("nats", num(nats));
    if bits {
        d.put("bits", num(nats / std::f64::consts::LN_2)).build()
    } else {
        d.build()
    }
}
