//! Command reports: a JSON document and a markdown rendering of the same data.

use serde_json::Value;

use crate::linalg::{fmt_rat, Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(format!("unknown format '{other}' (expected json or md)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub input: String,
    /// False when a check or certificate clause failed.
    pub passed: bool,
    pub json: Value,
    pub markdown: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = serde_json::json!({
                    "command": self.command,
                    "input": self.input,
                    "passed": self.passed,
                    "result": self.json,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Markdown => self.markdown.clone(),
        }
    }
}

/// Incremental markdown writer.
#[derive(Default)]
pub struct Markdown {
    out: String,
}

impl Markdown {
    pub fn new(title: &str) -> Self {
        let mut m = Self::default();
        m.out.push_str(&format!("# {title}\n\n"));
        m
    }

    pub fn section(&mut self, title: &str) -> &mut Self {
        self.out.push_str(&format!("## {title}\n\n"));
        self
    }

    pub fn line(&mut self, text: &str) -> &mut Self {
        self.out.push_str(text);
        self.out.push_str("\n\n");
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.out.push_str(&format!("- **{key}**: {value}\n"));
        self
    }

    pub fn end_list(&mut self) -> &mut Self {
        self.out.push('\n');
        self
    }

    pub fn table(&mut self, headers: &[&str], rows: &[Vec<String>]) -> &mut Self {
        self.out.push_str(&format!("| {} |\n", headers.join(" | ")));
        self.out.push_str(&format!(
            "|{}\n",
            headers.iter().map(|_| "---|").collect::<String>()
        ));
        for r in rows {
            let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
            self.out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        self.out.push('\n');
        self
    }

    pub fn code(&mut self, text: &str) -> &mut Self {
        self.out.push_str("```\n");
        self.out.push_str(text);
        if !text.ends_with('\n') {
            self.out.push('\n');
        }
        self.out.push_str("```\n\n");
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn ints(v: &[Int]) -> String {
    format!(
        "({})",
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

pub fn i64s(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

pub fn rats(v: &[Rat]) -> String {
    format!("({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

pub fn matrix_text(rows: &[Vec<Int>]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn int_rows_json(rows: &[Vec<Int>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn rats_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_rat(x))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn table_and_escape() {
        let mut m = Markdown::new("t");
        m.table(&["a", "b"], &[vec!["1/2".into(), "x|y".into()]]);
        let s = m.finish();
        assert!(s.contains("| 1/2 | x\\|y |"));
        assert!(s.starts_with("# t\n"));
    }

    #[test]
    fn formats() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert!("xml".parse::<Format>().is_err());
        assert_eq!(rats(&[rat(-1, 2), rat(3, 1)]), "(-1/2, 3)");
    }
}
