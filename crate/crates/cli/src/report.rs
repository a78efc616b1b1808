//! Deterministic report emission: every command produces one `Report`
//! rendered either as plain text or as versioned JSON (`schema: 1`).
//! Identical invocations render byte-identical output.

use serde::Serialize;
use umod_core::umod::{Verdict, Witness};

pub const SCHEMA_VERSION: u32 = 1;

/// Output format selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub degree: u32,
    pub element: String,
}

#[derive(Serialize)]
pub struct Table {
    pub name: String,
    pub dims: Vec<usize>,
}

/// The full result of one command: an echo of the invocation, the degree
/// through which claims are certified, free-form detail lines, named rows
/// of graded dimensions, and an optional verdict with witness.
#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub certified_degree: u32,
    pub lines: Vec<String>,
    pub tables: Vec<Table>,
    pub verdict: Option<String>,
    pub witness: Option<WitnessReport>,
    pub budget_exhausted: bool,
}

impl Report {
    pub fn new(command: String, certified_degree: u32) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command,
            certified_degree,
            lines: Vec::new(),
            tables: Vec::new(),
            verdict: None,
            witness: None,
            budget_exhausted: false,
        }
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn table(&mut self, name: impl Into<String>, dims: Vec<usize>) -> &mut Self {
        self.tables.push(Table { name: name.into(), dims });
        self
    }

    pub fn holds(&mut self) -> &mut Self {
        self.verdict = Some(String::from("holds"));
        self
    }

    pub fn fails(&mut self, witness: Witness) -> &mut Self {
        self.verdict = Some(String::from("fails"));
        self.witness = Some(WitnessReport { degree: witness.degree, element: witness.element });
        self
    }

    pub fn verdict(&mut self, verdict: Verdict) -> &mut Self {
        match verdict {
            Verdict::Holds => self.holds(),
            Verdict::Fails(w) => self.fails(w),
        }
    }

    /// 0 when nothing failed, 1 when the verdict is `fails`.
    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_deref() {
            Some("fails") => 1,
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self)
                    .expect("report serialization is infallible");
                out.push('\n');
                out
            }
            Format::Text => {
                let mut out = String::new();
                out.push_str(&format!("command: {}\n", self.command));
                out.push_str(&format!("certified-degree: {}\n", self.certified_degree));
                for line in &self.lines {
                    out.push_str(line);
                    out.push('\n');
                }
                for table in &self.tables {
                    let dims: Vec<String> =
                        table.dims.iter().map(|d| d.to_string()).collect();
                    out.push_str(&format!("dims[{}]: {}\n", table.name, dims.join(" ")));
                }
                if let Some(v) = &self.verdict {
                    out.push_str(&format!("verdict: {v}\n"));
                }
                if let Some(w) = &self.witness {
                    out.push_str(&format!("witness: degree {}: {}\n", w.degree, w.element));
                }
                if self.budget_exhausted {
                    out.push_str("budget: exhausted\n");
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_is_stable() {
        let mut r = Report::new("module check x.mod --predicate hfree".into(), 16);
        r.line("note: example");
        r.table("module", vec![1, 1, 0]);
        r.fails(Witness { degree: 1, element: String::from("t*i") });
        let text = r.render(Format::Text);
        assert_eq!(
            text,
            "command: module check x.mod --predicate hfree\n\
             certified-degree: 16\n\
             note: example\n\
             dims[module]: 1 1 0\n\
             verdict: fails\n\
             witness: degree 1: t*i\n"
        );
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn json_rendering_carries_the_schema_version() {
        let r = Report::new("adem Sq2 Sq2".into(), 16);
        let json = r.render(Format::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["schema"], 1);
        assert_eq!(value["command"], "adem Sq2 Sq2");
    }
}
