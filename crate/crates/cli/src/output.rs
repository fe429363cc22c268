//! Output plumbing shared by every subcommand: the stable JSON envelope,
//! rational serialization, and the text/CSV renderings.
//!
//! Every JSON payload carries `{tool_version, q, n, divisor_order}` so a
//! script consuming any subcommand can align exponent vectors with the
//! canonical divisor order without guessing; `n` and `divisor_order` are
//! `null` for subcommands that take no level.  Rationals are serialized
//! as `"num/den"` strings, plain `"num"` when the denominator is 1, and
//! big integers as decimal strings — JSON numbers would silently lose
//! precision past 2⁵³.

use deltaquot_core::matrix::Rational;
use deltaquot_core::{poly, LevelContext};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// `"num/den"`, or just `"num"` when the denominator is 1.
pub fn rational_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn bigint_value(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn bigint_list(vs: &[BigInt]) -> Value {
    Value::Array(vs.iter().map(bigint_value).collect())
}

/// The stable envelope around every JSON payload.
pub struct Envelope {
    pub q: Option<u64>,
    pub n: Option<String>,
    pub divisor_order: Option<Vec<String>>,
}

impl Envelope {
    pub fn bare(q: u64) -> Self {
        Envelope {
            q: Some(q),
            n: None,
            divisor_order: None,
        }
    }

    /// For output that involves no single field (the selftest battery).
    pub fn none() -> Self {
        Envelope {
            q: None,
            n: None,
            divisor_order: None,
        }
    }

    pub fn for_level(ctx: &LevelContext) -> Self {
        let k = ctx.spec();
        Envelope {
            q: Some(k.q()),
            n: Some(poly::display(k, ctx.level())),
            divisor_order: Some(
                ctx.divisors()
                    .iter()
                    .map(|d| poly::display(k, d))
                    .collect(),
            ),
        }
    }

    /// Merge the envelope keys into `payload` and return the full object.
    pub fn wrap(&self, payload: Map<String, Value>) -> Value {
        let mut obj = Map::new();
        obj.insert(
            "tool_version".into(),
            Value::String(TOOL_VERSION.to_string()),
        );
        obj.insert(
            "q".into(),
            self.q.map_or(Value::Null, |q| Value::Number(q.into())),
        );
        obj.insert(
            "n".into(),
            self.n
                .as_ref()
                .map(|s| Value::String(s.clone()))
                .unwrap_or(Value::Null),
        );
        obj.insert(
            "divisor_order".into(),
            self.divisor_order
                .as_ref()
                .map(|ds| Value::Array(ds.iter().map(|d| Value::String(d.clone())).collect()))
                .unwrap_or(Value::Null),
        );
        for (key, value) in payload {
            obj.insert(key, value);
        }
        Value::Object(obj)
    }
}

/// Quote a CSV field when it contains a separator, quote, or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}
