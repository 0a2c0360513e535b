//! Experiment output rows: the fixed CSV schema and its JSON twin.
//!
//! All computed columns are bit-deterministic across reruns and worker
//! counts; the `seconds` column is wall-clock and excluded from that
//! guarantee.

use serde::Serialize;

pub const CSV_HEADER: &str = "x,h,k,variant,omega,D,M,R,rel_err,seconds,flags";

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub x: f64,
    pub h: i64,
    pub k: u32,
    pub variant: String,
    pub omega: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub rel_err: Option<f64>,
    pub seconds: f64,
    pub flags: String,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ReportRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3},{}",
            self.x,
            self.h,
            self.k,
            self.variant,
            opt(self.omega),
            opt(self.d),
            opt(self.m),
            opt(self.r),
            opt(self.rel_err),
            self.seconds,
            self.flags
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("row serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_matches_header() {
        let row = ReportRow {
            x: 10000.0,
            h: 1,
            k: 2,
            variant: "plus".into(),
            omega: None,
            d: Some(74.0),
            m: Some(70.5),
            r: Some(3.5),
            rel_err: Some(0.047),
            seconds: 0.1234,
            flags: String::new(),
        };
        let line = row.to_csv();
        assert_eq!(
            line.split(',').count(),
            CSV_HEADER.split(',').count(),
            "column count mismatch: {line}"
        );
        assert_eq!(line, "10000,1,2,plus,,74,70.5,3.5,0.047,0.123,");
        let json = row.to_json();
        for key in ["\"x\"", "\"h\"", "\"k\"", "\"variant\"", "\"omega\"", "\"D\"", "\"M\"", "\"R\"", "\"rel_err\"", "\"seconds\"", "\"flags\""] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
    }
}
