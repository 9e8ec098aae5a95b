use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ricci::export::round_significant;
use serde::Serialize;
use serde_json::Value;

/// A named piece of command output, e.g. `curvature_star3.csv`.
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

impl Artifact {
    pub fn csv(stem: &str, contents: String) -> Self {
        Artifact {
            file_name: format!("{stem}.csv"),
            contents,
        }
    }

    pub fn json<T: Serialize>(stem: &str, value: &T) -> serde_json::Result<Self> {
        Ok(Artifact {
            file_name: format!("{stem}.json"),
            contents: to_json(value)?,
        })
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_numbers(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_significant(n.as_f64().unwrap_or(0.0));
            if let Some(num) = serde_json::Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map(|_| target)
}

/// Writes every artifact under `out`; without it only the first one goes to stdout.
pub fn emit(artifacts: &[Artifact], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(dir) => {
            for a in artifacts {
                let path = write_atomic(dir, &a.file_name, &a.contents)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if let Some(a) = artifacts.first() {
                lock.write_all(a.contents.as_bytes())?;
            }
            lock.flush()
        }
    }
}
