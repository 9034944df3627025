//! Writing reports: JSON objects with the config block under `"config"`, or
//! CSV with the config block on a leading `#` line.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::{CliError, Format};

pub fn config_block<T: Serialize>(command: &str, args: &T) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), command.into());
    map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    if let Value::Object(fields) = serde_json::to_value(args).expect("arguments serialize") {
        map.extend(fields);
    }
    Value::Object(map)
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Writes `body` (a JSON object) or `table` in the requested format.
pub fn emit(
    format: Format,
    path: Option<&Path>,
    config: Value,
    body: Value,
    table: Table,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut map = Map::new();
            map.insert("config".into(), config);
            match body {
                Value::Object(fields) => map.extend(fields),
                other => {
                    map.insert("result".into(), other);
                }
            }
            let mut text =
                serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize");
            text.push('\n');
            write_out(path, text.as_bytes())
        }
        Format::Csv => {
            let mut buf = format!("# config: {config}\n").into_bytes();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(&table.header)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                for row in &table.rows {
                    w.write_record(row)
                        .map_err(|e| CliError::Failed(e.to_string()))?;
                }
                w.flush()?;
            }
            write_out(path, &buf)
        }
    }
}
