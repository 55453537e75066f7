//! Fixed-precision number formatting and flat JSON / CSV records.

use std::fmt::Write as _;

/// Formats `x` with `digits` significant digits; plain notation for moderate
/// magnitudes, exponent notation otherwise. Always a valid JSON number.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0".to_string()
        } else {
            "null".to_string()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

pub fn fmt17(x: f64) -> String {
    fmt_sig(x, 17)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Str(String),
}

/// An ordered, flat record rendered either as one JSON object or as a CSV
/// header plus one row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(&'static str, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &'static str, v: f64) -> Self {
        self.fields.push((key, Field::Num(v)));
        self
    }

    pub fn int(mut self, key: &'static str, v: u64) -> Self {
        self.fields.push((key, Field::Int(v)));
        self
    }

    pub fn text(mut self, key: &'static str, v: impl Into<String>) -> Self {
        self.fields.push((key, Field::Str(v.into())));
        self
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{k}\": ");
            match v {
                Field::Num(x) => out.push_str(&fmt17(*x)),
                Field::Int(n) => out.push_str(&n.to_string()),
                Field::Str(s) => out.push_str(&json_string(s)),
            }
        }
        out.push('}');
        out
    }

    pub fn to_csv(&self) -> String {
        let header: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
        let row: Vec<String> = self
            .fields
            .iter()
            .map(|(_, v)| match v {
                Field::Num(x) => fmt17(*x),
                Field::Int(n) => n.to_string(),
                Field::Str(s) => csv_cell(s),
            })
            .collect();
        format!("{}\n{}", header.join(","), row.join(","))
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
