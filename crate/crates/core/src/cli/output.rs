use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// A command's result in every output format, plus whether it reports a
/// failed check.
#[derive(Debug, Clone)]
pub struct Report {
    /// one document, or one document per line when `json_lines` is set
    pub json: Vec<Value>,
    pub json_lines: bool,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub text: String,
    pub failed: bool,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json: vec![json],
            json_lines: false,
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
            text: String::new(),
            failed: false,
        }
    }

    pub fn lines(json: Vec<Value>) -> Self {
        Report {
            json_lines: true,
            ..Report::new(Value::Null)
        }
        .with_json(json)
    }

    fn with_json(mut self, json: Vec<Value>) -> Self {
        self.json = json;
        self
    }

    pub fn csv(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.csv_header = header;
        self.csv_rows = rows;
        self
    }

    pub fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    pub fn failed(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    pub fn write(&self, format: OutputFormat, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Json if self.json_lines => {
                for v in &self.json {
                    writeln!(out, "{}", serde_json::to_string(v)?)?;
                }
            }
            OutputFormat::Json => {
                for v in &self.json {
                    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
                }
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.csv_header)?;
                for row in &self.csv_rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            OutputFormat::Text => {
                write!(out, "{}", self.text)?;
                if !self.text.ends_with('\n') {
                    writeln!(out)?;
                }
            }
        }
        Ok(())
    }
}
