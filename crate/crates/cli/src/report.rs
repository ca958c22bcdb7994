use serde_json::{json, Value};
use vinv::surfaces::{catalog_get, CATALOG};

/// One compared order: the reference value and the value under test, both exact strings.
#[derive(Clone, Debug)]
pub struct Row {
    pub order: String,
    pub expected: String,
    pub computed: String,
}

impl Row {
    pub fn agrees(&self) -> bool {
        self.expected == self.computed
    }
}

#[derive(Clone, Debug)]
pub enum Status {
    Pass,
    Fail(Row),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub target: String,
    pub surface: Option<String>,
    pub c1: Option<String>,
    /// What `expected` and `computed` are.
    pub method: (String, String),
    pub rows: Vec<Row>,
    pub status: Status,
    pub strong_mochizuki: bool,
    pub notes: Vec<String>,
}

/// Catalog entries whose SW data is not from the literature.
pub fn derived_data_surfaces() -> Vec<String> {
    CATALOG.iter().filter(|n| catalog_get(n).map(|s| s.derived_data).unwrap_or(false)).map(|n| n.to_string()).collect()
}

impl VerificationReport {
    pub fn new(target: &str, method: (&str, &str)) -> Self {
        VerificationReport {
            target: target.into(),
            surface: None,
            c1: None,
            method: (method.0.into(), method.1.into()),
            rows: Vec::new(),
            status: Status::Skipped("nothing compared".into()),
            strong_mochizuki: false,
            notes: Vec::new(),
        }
    }

    /// Sets the status from the rows: the first disagreeing row fails the report.
    pub fn settle(&mut self) {
        self.status = match self.rows.iter().find(|r| !r.agrees()) {
            Some(r) => Status::Fail(r.clone()),
            None if self.rows.is_empty() => Status::Skipped("no admissible orders in range".into()),
            None => Status::Pass,
        };
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass)
    }

    pub fn to_json(&self) -> Value {
        let row = |r: &Row| json!({"order": r.order, "expected": r.expected, "computed": r.computed});
        let status = match &self.status {
            Status::Pass => json!("pass"),
            Status::Fail(r) => json!({"fail": row(r)}),
            Status::Skipped(why) => json!({"skipped": why}),
        };
        json!({
            "target": self.target,
            "surface": self.surface,
            "c1": self.c1,
            "expected": self.method.0,
            "computed": self.method.1,
            "orders": self.rows.iter().map(|r| r.order.clone()).collect::<Vec<_>>(),
            "rows": self.rows.iter().map(row).collect::<Vec<_>>(),
            "status": status,
            "assumptions": {
                "strong_mochizuki": self.strong_mochizuki,
                "derived_data_surfaces": derived_data_surfaces(),
                "notes": self.notes,
            },
        })
    }
}
