use std::fmt::Display;
use std::path::Path;

use quadra::linalg::IntMatrix;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Failure to read or interpret an input; exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<quadra::Error> for InputError {
    fn from(e: quadra::Error) -> Self {
        InputError(e.to_string())
    }
}

impl Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub type CmdResult<T> = std::result::Result<T, InputError>;

/// Where the data came from and its SHA-256.
#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub sha256: String,
}

impl InputInfo {
    pub fn builtin(kind: &str, name: &str) -> Self {
        let source = format!("builtin:{kind}:{name}");
        let sha256 = hex::encode(Sha256::digest(source.as_bytes()));
        InputInfo { source, sha256 }
    }
}

/// What a command hands back before the report is assembled.
pub struct Outcome {
    pub input: Option<InputInfo>,
    pub seed: Option<u64>,
    pub passed: bool,
    pub results: Map<String, Value>,
}

impl Outcome {
    pub fn new(input: Option<InputInfo>) -> Self {
        Outcome { input, seed: None, passed: true, results: Map::new() }
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn put_str(&mut self, key: &str, value: impl Display) {
        self.put(key, Value::String(value.to_string()));
    }

    pub fn require(&mut self, ok: bool) {
        self.passed &= ok;
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
    pub results: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<String>,
}

/// Reads a JSON file; errors name the file, the line and column, and the
/// path of the offending field.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> CmdResult<(T, InputInfo)> {
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = std::str::from_utf8(&bytes).map_err(|e| InputError(format!("{}: not UTF-8: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        InputError(format!("{}: field `{field}`: {inner}", path.display()))
    })?;
    Ok((value, InputInfo { source: path.display().to_string(), sha256 }))
}

pub fn s(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn strings<T: Display>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(strings).collect())
}

/// Power of ten bounding a floating residual, so reports stay stable
/// across platforms.
pub fn residual_bound(r: f64) -> String {
    if r <= 1e-15 {
        return "1e-15".into();
    }
    format!("1e{}", r.log10().ceil() as i32)
}
