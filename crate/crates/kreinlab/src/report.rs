//! Named-residual reports: the unit of output for every checker and for the
//! CLI. Serialization is deterministic: keys are emitted in sorted order and
//! every float is printed with the C `%.17g` convention.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub tool_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub classification: Option<String>,
    pub eigenvalues: Option<Vec<(f64, f64)>>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(command: &str) -> Self {
        CheckReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            classification: None,
            eigenvalues: None,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Absorbs another report's checks and notes (used by the CLI to combine
    /// per-construction reports under one command).
    pub fn absorb(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        if self.classification.is_none() {
            self.classification = other.classification;
        }
        if self.eigenvalues.is_none() {
            self.eigenvalues = other.eigenvalues;
        }
    }

    /// Deterministic JSON with alphabetically ordered keys.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"checks\": [");
        for (i, check) in self.checks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    {\"name\": ");
            out.push_str(&json_string(&check.name));
            out.push_str(", \"pass\": ");
            out.push_str(if check.pass { "true" } else { "false" });
            out.push_str(", \"residual\": ");
            out.push_str(&fmt_g17(check.residual));
            out.push_str(", \"tolerance\": ");
            out.push_str(&fmt_g17(check.tolerance));
            out.push('}');
        }
        if !self.checks.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("],\n  \"classification\": ");
        match &self.classification {
            Some(c) => out.push_str(&json_string(c)),
            None => out.push_str("null"),
        }
        out.push_str(",\n  \"command\": ");
        out.push_str(&json_string(&self.command));
        out.push_str(",\n  \"eigenvalues\": ");
        match &self.eigenvalues {
            Some(eigs) => {
                out.push('[');
                for (i, (re, im)) in eigs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str("{\"im\": ");
                    out.push_str(&fmt_g17(*im));
                    out.push_str(", \"re\": ");
                    out.push_str(&fmt_g17(*re));
                    out.push('}');
                }
                out.push(']');
            }
            None => out.push_str("null"),
        }
        out.push_str(",\n  \"notes\": [");
        for (i, note) in self.notes.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&json_string(note));
        }
        out.push_str("],\n  \"parameters\": {");
        for (i, (k, v)) in self.parameters.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&json_string(k));
            out.push_str(": ");
            out.push_str(&json_string(v));
        }
        out.push_str("},\n  \"tool_version\": ");
        out.push_str(&json_string(&self.tool_version));
        out.push_str("\n}\n");
        out
    }
}

pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Formats a float the way C's `%.17g` does: 17 significant digits, fixed or
/// scientific notation by the decimal exponent, trailing zeros stripped.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let neg = x < 0.0;
    let formatted = format!("{:.16e}", x.abs());
    let (mantissa, exp_str) = formatted.split_once('e').expect("exponent in {:.16e}");
    let exp: i32 = exp_str.parse().expect("integer exponent");
    let digits: Vec<u8> = mantissa.bytes().filter(|b| b.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 17);

    let body = if exp >= -4 && exp < 17 {
        let mut s = String::new();
        if exp >= 0 {
            let point = exp as usize + 1;
            s.push_str(std::str::from_utf8(&digits[..point.min(17)]).unwrap());
            for _ in 17..point {
                s.push('0');
            }
            if point < 17 {
                s.push('.');
                s.push_str(std::str::from_utf8(&digits[point..]).unwrap());
            }
        } else {
            s.push_str("0.");
            for _ in 0..(-exp - 1) {
                s.push('0');
            }
            s.push_str(std::str::from_utf8(&digits).unwrap());
        }
        strip_trailing_zeros(s)
    } else {
        let mut s = String::new();
        s.push(digits[0] as char);
        s.push('.');
        s.push_str(std::str::from_utf8(&digits[1..]).unwrap());
        let stripped = strip_trailing_zeros(s);
        format!(
            "{}e{}{:02}",
            stripped,
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    };
    if neg {
        format!("-{}", body)
    } else {
        body
    }
}

fn strip_trailing_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// RFC-4180 CSV field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_fixed_notation() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-0.0), "0");
        assert_eq!(fmt_g17(0.25), "0.25");
        assert_eq!(fmt_g17(1.5), "1.5");
        assert_eq!(fmt_g17(-2.0), "-2");
        assert_eq!(fmt_g17(100.0), "100");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17((-0.25f64).exp()), "0.77880078307140488");
    }

    #[test]
    fn g17_scientific_notation() {
        // Reference values from C's printf("%.17g", ...).
        assert_eq!(fmt_g17(1e-13), "1e-13");
        assert_eq!(fmt_g17(1e-12), "9.9999999999999998e-13");
        assert_eq!(fmt_g17(2.5e20), "2.5e+20");
        assert_eq!(fmt_g17(2.5e21), "2.5e+21");
        assert_eq!(fmt_g17(1e-4), "0.0001");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
    }

    #[test]
    fn report_pass_semantics_and_json_shape() {
        let mut r = CheckReport::new("demo");
        r.param("n", 3);
        r.push("ok", 1e-14, 1e-12);
        r.push("bad", 1.0, 1e-12);
        r.note("a note");
        assert!(!r.all_pass());
        let json = r.to_json();
        assert!(json.contains("\"name\": \"ok\""));
        assert!(json.contains("\"pass\": false"));
        assert!(json.contains("\"parameters\": {\"n\": \"3\"}"));
        // Deterministic: same content twice.
        assert_eq!(json, r.to_json());
    }

    #[test]
    fn json_escaping() {
        assert_eq!(json_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
