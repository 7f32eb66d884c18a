use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Six significant digits, `null` for a relation that could not be evaluated.
fn ser_residual<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig(*x, 6))
    } else {
        s.serialize_none()
    }
}

fn de_residual<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderParams {
    pub eps0: f64,
    pub steps: usize,
    pub decay: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none", default)]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u32>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none", default)]
    pub trunc: Option<usize>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ladder: Option<LadderParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub relation: String,
    #[serde(serialize_with = "ser_residual", deserialize_with = "de_residual")]
    pub residual: f64,
    pub margin: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub params: ReportParams,
    pub entries: Vec<ReportEntry>,
    #[serde(serialize_with = "ser_residual", deserialize_with = "de_residual")]
    pub max_residual: f64,
    pub pass: bool,
    pub timestamp: String,
}

impl Report {
    /// Sorts entries by name and recomputes the aggregates.
    pub fn new(suite: impl Into<String>, params: ReportParams, mut entries: Vec<ReportEntry>) -> Self {
        entries.sort_by(|a, b| a.relation.cmp(&b.relation));
        let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
        let pass = entries.iter().all(|e| e.pass);
        Report {
            suite: suite.into(),
            params,
            entries,
            max_residual,
            pass,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// Merges sub-reports, prefixing each entry with its section name.
    pub fn combine(suite: impl Into<String>, params: ReportParams, parts: Vec<(String, Report)>) -> Self {
        let entries = parts
            .into_iter()
            .flat_map(|(prefix, r)| {
                r.entries.into_iter().map(move |mut e| {
                    e.relation = format!("{prefix}/{}", e.relation);
                    e
                })
            })
            .collect();
        Report::new(suite, params, entries)
    }

    pub fn entry(&self, relation: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.relation == relation)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// JSON with the timestamp blanked, for byte-level comparisons.
    pub fn to_json_without_timestamp(&self) -> String {
        let mut r = self.clone();
        r.timestamp.clear();
        r.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.23456789e-11, 6), 1.23457e-11);
        assert_eq!(round_sig(0.0, 6), 0.0);
        assert_eq!(round_sig(987654321.0, 6), 987654000.0);
    }

    #[test]
    fn json_shape() {
        let e = |name: &str, res: f64, pass| ReportEntry {
            relation: name.into(),
            residual: res,
            margin: 1,
            pass,
            error: None,
        };
        let params = ReportParams {
            n: Some(2),
            q: Some("1.3".into()),
            trunc: Some(4),
            tol: 1e-10,
            ..Default::default()
        };
        let r = Report::new("uq-sln", params, vec![e("b", 1.234567891e-12, true), e("a", f64::INFINITY, false)]);
        assert_eq!(r.entries[0].relation, "a");
        assert!(!r.pass);
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["params"]["Q"], "1.3");
        assert_eq!(v["params"]["D"], 4);
        assert!(v["entries"][0]["residual"].is_null());
        assert_eq!(v["entries"][1]["residual"], 1.23457e-12);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back.entries[0].residual, f64::INFINITY);
        assert!(!back.pass);

        let empty = Report::new("none", ReportParams::default(), vec![]);
        assert!(empty.pass);
        assert_eq!(empty.max_residual, 0.0);
    }
}
