//! JSON report types. Field order is declaration order; non-finite numbers
//! serialize as the strings `"inf"`, `"-inf"` and `"nan"`.

use serde::{Serialize, Serializer};

use ncfourier::report::CheckRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub suite: String,
    pub check_name: String,
    pub params: Params,
    pub trials: usize,
    pub max_ratio: Num,
    pub cap: Num,
    pub slack: Num,
    /// Where the cap came from: a calibration entry, a config override, or a closed form.
    pub cap_id: String,
    pub violations: usize,
    pub worst_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed: Option<f64>,
}

impl CheckEntry {
    pub fn from_record(suite: &str, rec: &CheckRecord, params: Params, cap_id: String) -> Self {
        CheckEntry {
            suite: suite.to_string(),
            check_name: rec.name.clone(),
            params,
            trials: rec.trials,
            max_ratio: Num(rec.max_ratio),
            cap: Num(rec.cap),
            slack: Num(rec.slack),
            cap_id,
            violations: rec.violations,
            worst_seed: rec.worst_seed,
            elapsed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    pub calibration: String,
    pub total_checks: usize,
    pub total_violations: usize,
    pub checks: Vec<CheckEntry>,
}

impl Report {
    pub fn new(command: &str, seed: u64, trials: usize, calibration: String, checks: Vec<CheckEntry>) -> Self {
        Report {
            tool: "ncfourier",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            trials,
            calibration,
            total_checks: checks.len(),
            total_violations: checks.iter().map(|c| c.violations).sum(),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| c.violations > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_are_strings() {
        let j = serde_json::to_string(&[Num(1.5), Num(f64::INFINITY), Num(f64::NAN)]).unwrap();
        assert_eq!(j, r#"[1.5,"inf","nan"]"#);
    }

    #[test]
    fn field_order_is_stable() {
        let mut rec = CheckRecord::new("c", 1.0);
        rec.record(0.5, 3);
        let e = CheckEntry::from_record("s", &rec, Params { p: Some(Num(2.0)), ..Default::default() }, "x".into());
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(
            j,
            r#"{"suite":"s","check_name":"c","params":{"p":2.0},"trials":1,"max_ratio":0.5,"cap":1.0,"slack":1e-10,"cap_id":"x","violations":0,"worst_seed":3}"#
        );
    }
}
