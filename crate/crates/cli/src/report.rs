//! Check records and their rendering. JSON is the source of truth; the
//! aligned table is derived from it.

use serde::Serialize;
use serde_json::Value;

/// Widest table cell; the JSON report always carries full values.
const MAX_CELL: usize = 64;

fn truncate(s: String) -> String {
    if s.chars().count() <= MAX_CELL {
        return s;
    }
    let mut t: String = s.chars().take(MAX_CELL - 3).collect();
    t.push_str("...");
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    /// The statement this check exercises.
    pub anchor: String,
    pub computed: Value,
    pub expected: Option<Value>,
    pub status: Status,
}

impl Record {
    /// A record that passes iff `computed == expected`.
    pub fn compare(
        name: impl Into<String>,
        anchor: &str,
        computed: impl Serialize,
        expected: impl Serialize,
    ) -> Self {
        let computed = serde_json::to_value(computed).expect("serializable");
        let expected = serde_json::to_value(expected).expect("serializable");
        let status = if computed == expected {
            Status::Pass
        } else {
            Status::Fail
        };
        Record {
            name: name.into(),
            anchor: anchor.into(),
            computed,
            expected: Some(expected),
            status,
        }
    }

    /// A record whose status is decided by the caller.
    pub fn check(
        name: impl Into<String>,
        anchor: &str,
        computed: impl Serialize,
        ok: bool,
    ) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            computed: serde_json::to_value(computed).expect("serializable"),
            expected: None,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    /// Compares when an expectation is given, otherwise records the value as skipped.
    pub fn optional<T: Serialize>(
        name: impl Into<String>,
        anchor: &str,
        computed: T,
        expected: Option<T>,
    ) -> Self {
        match expected {
            Some(e) => Record::compare(name, anchor, computed, e),
            None => Record {
                name: name.into(),
                anchor: anchor.into(),
                computed: serde_json::to_value(computed).expect("serializable"),
                expected: None,
                status: Status::Skipped,
            },
        }
    }

    /// A failed record carrying an error message.
    pub fn error(name: impl Into<String>, anchor: &str, message: impl std::fmt::Display) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            computed: Value::String(format!("error: {message}")),
            expected: None,
            status: Status::Fail,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub target: String,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, target: &str, records: Vec<Record>) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Report {
            command: command.into(),
            target: target.into(),
            records,
            summary,
        }
    }

    pub fn exit_code(&self) -> u8 {
        u8::from(self.summary.fail > 0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Aligned text rendered from the JSON form of each record.
    pub fn to_table(&self) -> String {
        let json: Value = serde_json::to_value(self).expect("serializable");
        let rows: Vec<[String; 4]> = json["records"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|r| {
                let cell = |v: &Value| {
                    let s = match v {
                        Value::Null => "-".to_string(),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    truncate(s)
                };
                [
                    cell(&r["status"]).to_uppercase(),
                    cell(&r["name"]),
                    cell(&r["computed"]),
                    cell(&r["expected"]),
                ]
            })
            .collect();
        let header = [
            "STATUS".to_string(),
            "CHECK".into(),
            "COMPUTED".into(),
            "EXPECTED".into(),
        ];
        let mut widths = header.clone().map(|h| h.chars().count());
        for row in &rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = format!("{} {}\n", self.command, self.target);
        for row in std::iter::once(&header).chain(&rows) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            s.pass, s.fail, s.skipped
        ));
        out
    }
}
