//! Worked-example corpus, record persistence and brute-force oracles.
//!
//! A corpus is a JSON-lines file. Each line is one [`CorpusEntry`]:
//!
//! ```json
//! {"id": "...", "op": "gcd", "input": [<poly>, <poly>], "params": {...},
//!  "expected": <json>, "provenance": {"kind": "derived", "oracle": "exact-multiplication"}}
//! ```

pub mod oracle;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::factor::{self, Factorization, FactorizationJson};
use crate::fox::{partial_derivative, DerivativeIndex};
use crate::lambda::FreePolynomial;
use crate::repmod::{ModuleJson, OperatorModule};

pub use oracle::run_oracle_factor_search;

/// The corpus shipped with the crate.
pub const SHIPPED_CORPUS: &str = include_str!("../../corpus/examples.jsonl");

/// Names accepted in `derived` provenance records.
pub const ORACLES: &[&str] = &[
    "exact-multiplication",
    "exhaustive-factor-search",
    "lattice-dimension",
    "module-isomorphism",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    /// A value quoted from the literature.
    Literature { citation: String },
    /// Immediate from definitions.
    Trivial { note: String },
    /// Computed by an independent oracle listed in [`ORACLES`].
    Derived { oracle: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub op: String,
    pub input: Vec<FreePolynomial>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
    pub expected: Value,
    pub provenance: Provenance,
}

impl CorpusEntry {
    fn validate(&self) -> std::result::Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("empty id".into());
        }
        match &self.provenance {
            Provenance::Literature { citation } if citation.trim().is_empty() => {
                Err("literature entry without citation".into())
            }
            Provenance::Trivial { note } if note.trim().is_empty() => {
                Err("trivial entry without note".into())
            }
            Provenance::Derived { oracle } if !ORACLES.contains(&oracle.as_str()) => {
                Err(format!("unregistered oracle {oracle:?}"))
            }
            _ => Ok(()),
        }
    }

    /// Runs the operation and returns its result as JSON.
    pub fn evaluate(&self) -> Result<Value> {
        evaluate(&self.op, &self.input, &self.params).map(|o| o.into_json())
    }

    /// `Ok(())` when the operation reproduces `expected`.
    pub fn check(&self) -> std::result::Result<(), String> {
        let out =
            evaluate(&self.op, &self.input, &self.params).map_err(|e| format!("error: {e}"))?;
        let same = match &out {
            Outcome::Poly(p) => serde_json::from_value::<FreePolynomial>(self.expected.clone())
                .map(|q| &q == p)
                .unwrap_or(false),
            Outcome::Json(v) => v == &self.expected,
        };
        if same {
            Ok(())
        } else {
            Err(out.into_json().to_string())
        }
    }
}

/// Parses a JSON-lines corpus. Blank lines and lines starting with `#` are skipped.
pub fn load_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::CorpusFormat { line: line_no, msg };
        let raw: Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        if raw.get("provenance").is_none() {
            return Err(bad("entry has no provenance".into()));
        }
        let entry: CorpusEntry = serde_json::from_value(raw).map_err(|e| bad(e.to_string()))?;
        entry.validate().map_err(bad)?;
        out.push(entry);
    }
    Ok(out)
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    load_corpus(&read(path.as_ref())?)
}

pub fn write_corpus(path: impl AsRef<Path>, entries: &[CorpusEntry]) -> Result<()> {
    let mut text = String::new();
    for e in entries {
        text.push_str(&serde_json::to_string(e).map_err(|e| Error::Io(e.to_string()))?);
        text.push('\n');
    }
    write(path.as_ref(), &text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub id: String,
    pub expected: Value,
    pub actual: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CorpusReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn verify_entries(entries: &[CorpusEntry]) -> CorpusReport {
    let mut report = CorpusReport::default();
    for e in entries {
        report.checked += 1;
        if let Err(actual) = e.check() {
            report.mismatches.push(Mismatch {
                id: e.id.clone(),
                expected: e.expected.clone(),
                actual,
            });
        }
    }
    report
}

/// Loads the corpus at `path` and re-runs every entry.
pub fn corpus_verify(path: impl AsRef<Path>) -> Result<CorpusReport> {
    Ok(verify_entries(&read_corpus(path)?))
}

pub fn save_module(path: impl AsRef<Path>, m: &OperatorModule) -> Result<()> {
    write_json(path.as_ref(), &m.to_json())
}

pub fn load_module(path: impl AsRef<Path>) -> Result<OperatorModule> {
    let j: ModuleJson = read_json(path.as_ref())?;
    OperatorModule::from_json(&j)
}

pub fn save_factorization(
    path: impl AsRef<Path>,
    f: &Factorization,
    input: &FreePolynomial,
) -> Result<()> {
    write_json(path.as_ref(), &f.to_json(input.rank(), input))
}

pub fn load_factorization(path: impl AsRef<Path>) -> Result<FactorizationJson> {
    read_json(path.as_ref())
}

enum Outcome {
    Poly(FreePolynomial),
    Json(Value),
}

impl Outcome {
    fn into_json(self) -> Value {
        match self {
            Outcome::Poly(p) => serde_json::to_value(p.to_json()).expect("serializable"),
            Outcome::Json(v) => v,
        }
    }
}

fn evaluate(op: &str, input: &[FreePolynomial], params: &Value) -> Result<Outcome> {
    let arg = |k: usize| {
        input
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("{op} needs {} inputs", k + 1)))
    };
    let json = |v: Value| Ok(Outcome::Json(v));
    match op {
        "augmentation" => json(Value::String(arg(0)?.augmentation().to_string())),
        "product" => Ok(Outcome::Poly(arg(0)?.try_mul(arg(1)?)?)),
        "derive" => {
            let d: DerivativeIndex = serde_json::from_value(params.clone())
                .map_err(|e| Error::Invalid(format!("derive params: {e}")))?;
            Ok(Outcome::Poly(partial_derivative(d, arg(0)?)?))
        }
        "maximal" => json(to_value(&arg(0)?.strictly_maximal()?.words)),
        "length" => json(arg(0)?.length()?.into()),
        "order" => json(arg(0)?.order()?.into()),
        "irreducible" => json(factor::is_irreducible(arg(0)?)?.into()),
        "lattice_dim" => json(factor::lattice_of(&arg(0)?.comonic()?)?.dim().into()),
        "endo_dim" => json(factor::endo_dim(arg(0)?)?.into()),
        "similar" => json(factor::similar(arg(0)?, arg(1)?)?.into()),
        "gcd" => Ok(Outcome::Poly(factor::gcd_set(input)?)),
        "divide" => Ok(Outcome::Poly(factor::divide_right(arg(0)?, arg(1)?, None)?)),
        "factor" => {
            let g = arg(0)?;
            let f = factor::factorize(g)?;
            json(serde_json::json!({
                "length": f.len(),
                "verified": &f.product(g.rank()) == g,
            }))
        }
        "oracle_factor_search" => {
            let max_len = params
                .get("max_len")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Invalid("oracle_factor_search needs max_len".into()))?;
            let pairs = run_oracle_factor_search(arg(0)?, max_len as usize)?;
            json(pairs.len().into())
        }
        _ => Err(Error::Invalid(format!("unknown corpus operation {op:?}"))),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    write(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_corpus_passes() {
        let entries = load_corpus(SHIPPED_CORPUS).unwrap();
        assert!(entries.len() >= 15);
        let report = verify_entries(&entries);
        assert!(report.passed(), "{:?}", report.mismatches);
    }

    #[test]
    fn empty_corpus_passes() {
        let report = verify_entries(&load_corpus("\n\n").unwrap());
        assert_eq!(report.checked, 0);
        assert!(report.passed());
    }

    #[test]
    fn corrupted_coefficient_is_reported() {
        let line = SHIPPED_CORPUS
            .lines()
            .find(|l| l.contains("\"id\":\"product-inverse-pair\""))
            .unwrap();
        let bad = line.replacen("\"coeff\":\"2\"", "\"coeff\":\"3\"", 1);
        assert_ne!(bad, line);
        let report = verify_entries(&load_corpus(&bad).unwrap());
        assert_eq!(report.mismatches.len(), 1);
        assert_eq!(report.mismatches[0].id, "product-inverse-pair");
    }

    #[test]
    fn loader_rejects_untagged_and_unregistered() {
        let line = SHIPPED_CORPUS
            .lines()
            .find(|l| l.contains("\"kind\":\"derived\""))
            .unwrap();
        let mut v: Value = serde_json::from_str(line).unwrap();
        v["provenance"]["oracle"] = "guesswork".into();
        assert!(matches!(
            load_corpus(&v.to_string()),
            Err(Error::CorpusFormat { line: 1, .. })
        ));
        v.as_object_mut().unwrap().remove("provenance");
        let text = format!("\n{v}");
        assert!(matches!(
            load_corpus(&text),
            Err(Error::CorpusFormat { line: 2, .. })
        ));
    }

    #[test]
    fn records_round_trip_through_files() {
        let dir = std::env::temp_dir().join(format!("foxfactor-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let g = load_corpus(SHIPPED_CORPUS)
            .unwrap()
            .into_iter()
            .find(|e| e.id == "factor-rational-quadratic")
            .unwrap()
            .input[0]
            .clone();
        let f = factor::factorize(&g).unwrap();
        save_factorization(dir.join("f.json"), &f, &g).unwrap();
        let back = load_factorization(dir.join("f.json")).unwrap();
        assert!(back.verified);
        assert_eq!(back.length, 2);

        let m = factor::lattice_of(&g.comonic().unwrap()).unwrap().module;
        save_module(dir.join("m.json"), &m).unwrap();
        assert_eq!(
            load_module(dir.join("m.json")).unwrap().to_json(),
            m.to_json()
        );

        let entries = load_corpus(SHIPPED_CORPUS).unwrap();
        write_corpus(dir.join("c.jsonl"), &entries).unwrap();
        assert_eq!(read_corpus(dir.join("c.jsonl")).unwrap(), entries);
        fs::remove_dir_all(&dir).unwrap();
    }
}
