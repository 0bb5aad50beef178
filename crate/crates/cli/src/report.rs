//! Human or JSON output.

use std::io::Write;

use serde_json::{json, Value};

use crate::input::Failure;

pub struct Output {
    json: bool,
    batch: Vec<Value>,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Output {
            json,
            batch: Vec::new(),
        }
    }

    pub fn item(&mut self, v: Value, human: String) {
        if self.json {
            emit(&serde_json::to_string_pretty(&v).expect("json"));
        } else {
            emit(&human);
        }
    }

    /// Human text is printed at once; JSON is collected until
    /// [`finish_batch`](Self::finish_batch).
    pub fn batch_item(&mut self, v: Value, human: String) {
        if self.json {
            self.batch.push(v);
        } else if !human.is_empty() {
            emit(&human);
        }
    }

    /// A single input prints one object, anything else an array.
    pub fn finish_batch(&mut self, single: bool) {
        if !self.json {
            return;
        }
        let items = std::mem::take(&mut self.batch);
        let v = if single && items.len() == 1 {
            items.into_iter().next().expect("one item")
        } else {
            Value::Array(items)
        };
        emit(&serde_json::to_string_pretty(&v).expect("json"));
    }

    pub fn error(&mut self, f: &Failure) {
        if self.json {
            emit(&json!({ "error": f.message, "exit_code": f.code }).to_string());
        }
        eprintln!("error: {}", f.message);
    }
}

/// Writes a line to standard output, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}
