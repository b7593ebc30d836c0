//! JSON form of formulas. Integers are decimal strings:
//!
//! ```json
//! {"k":3,"u1":"5","u2":{"num":"-239","den":"1"}}
//! {"terms":[{"a":"4","b":{"num":"5","den":"1"}},{"a":"-1","b":{"num":"239","den":"1"}}]}
//! ```
//!
//! Integers longer than a threshold (default 10^6 digits) are written to a
//! sidecar file next to the document and referenced as
//! `{"path": "...", "sha256": "..."}`; the digest is checked on load.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{MachinFormula, MachinTerm, TwoTermFormula};
use crate::error::{Error, Result};

/// Default digit count above which integers move to sidecar files.
pub const SIDECAR_THRESHOLD_DIGITS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum IntField {
    Inline(String),
    Sidecar { path: String, sha256: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RationalField {
    num: IntField,
    den: IntField,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoTermDoc {
    k: u32,
    u1: IntField,
    u2: RationalField,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    a: IntField,
    b: RationalField,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralDoc {
    terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Doc {
    TwoTerm(TwoTermDoc),
    General(GeneralDoc),
}

/// A parsed formula document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaDoc {
    TwoTerm(TwoTermFormula),
    General(MachinFormula),
}

impl FormulaDoc {
    pub fn to_machin(&self) -> MachinFormula {
        match self {
            FormulaDoc::TwoTerm(f) => f.to_machin(),
            FormulaDoc::General(f) => f.clone(),
        }
    }
}

/// Where and when integers are moved out of the JSON text.
#[derive(Debug, Clone)]
pub struct SidecarPolicy {
    pub threshold_digits: usize,
    /// Directory receiving sidecar files; required only when one is written.
    pub dir: Option<PathBuf>,
    /// File-name prefix for sidecars.
    pub stem: String,
}

impl Default for SidecarPolicy {
    fn default() -> Self {
        SidecarPolicy {
            threshold_digits: SIDECAR_THRESHOLD_DIGITS,
            dir: None,
            stem: "formula".into(),
        }
    }
}

struct Writer<'a> {
    policy: &'a SidecarPolicy,
}

impl Writer<'_> {
    fn int(&self, n: &BigInt, field: &str) -> Result<IntField> {
        let text = n.to_string();
        let digits = text.trim_start_matches('-').len();
        if digits <= self.policy.threshold_digits {
            return Ok(IntField::Inline(text));
        }
        let dir = self.policy.dir.as_ref().ok_or_else(|| {
            Error::Invalid(format!(
                "{field} has {digits} digits; a sidecar directory is required"
            ))
        })?;
        let name = format!("{}.{field}.txt", self.policy.stem);
        fs::write(dir.join(&name), &text).map_err(|e| Error::Io(format!("{name}: {e}")))?;
        Ok(IntField::Sidecar {
            path: name,
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        })
    }

    fn rational(&self, r: &BigRational, field: &str) -> Result<RationalField> {
        Ok(RationalField {
            num: self.int(r.numer(), &format!("{field}.num"))?,
            den: self.int(r.denom(), &format!("{field}.den"))?,
        })
    }
}

fn read_int(f: &IntField, base_dir: Option<&Path>) -> Result<BigInt> {
    let text = match f {
        IntField::Inline(s) => s.clone(),
        IntField::Sidecar { path, sha256 } => {
            let p = match base_dir {
                Some(d) => d.join(path),
                None => PathBuf::from(path),
            };
            let bytes = fs::read(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let digest = hex::encode(Sha256::digest(&bytes));
            if !digest.eq_ignore_ascii_case(sha256) {
                return Err(Error::Parse(format!(
                    "{}: sha256 mismatch (expected {sha256}, found {digest})",
                    p.display()
                )));
            }
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?
        }
    };
    BigInt::from_str(text.trim()).map_err(|_| Error::Parse(format!("not an integer: {text:?}")))
}

fn read_rational(f: &RationalField, base_dir: Option<&Path>) -> Result<BigRational> {
    let num = read_int(&f.num, base_dir)?;
    let den = read_int(&f.den, base_dir)?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

/// Serialises a two-term formula to compact JSON.
pub fn two_term_to_json(f: &TwoTermFormula, policy: &SidecarPolicy) -> Result<String> {
    let w = Writer { policy };
    let doc = TwoTermDoc {
        k: f.k,
        u1: w.int(&f.u1, "u1")?,
        u2: w.rational(&f.u2, "u2")?,
    };
    serde_json::to_string(&doc).map_err(|e| Error::Invalid(e.to_string()))
}

/// Serialises a general formula to compact JSON.
pub fn machin_to_json(f: &MachinFormula, policy: &SidecarPolicy) -> Result<String> {
    let w = Writer { policy };
    let terms = f
        .terms()
        .iter()
        .enumerate()
        .map(|(j, t)| {
            Ok(TermDoc {
                a: w.int(&t.coef, &format!("a{j}"))?,
                b: w.rational(&t.base, &format!("b{j}"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_string(&GeneralDoc { terms }).map_err(|e| Error::Invalid(e.to_string()))
}

pub fn formula_to_json(f: &FormulaDoc, policy: &SidecarPolicy) -> Result<String> {
    match f {
        FormulaDoc::TwoTerm(t) => two_term_to_json(t, policy),
        FormulaDoc::General(g) => machin_to_json(g, policy),
    }
}

/// Parses a document; sidecar paths are resolved against `base_dir`.
pub fn parse_formula(text: &str, base_dir: Option<&Path>) -> Result<FormulaDoc> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let invalid_to_parse = |e: Error| match e {
        Error::Invalid(m) => Error::Parse(m),
        other => other,
    };
    match doc {
        Doc::TwoTerm(d) => {
            let u1 = read_int(&d.u1, base_dir)?;
            let u2 = read_rational(&d.u2, base_dir)?;
            TwoTermFormula::new(d.k, u1, u2)
                .map(FormulaDoc::TwoTerm)
                .map_err(invalid_to_parse)
        }
        Doc::General(d) => {
            let terms = d
                .terms
                .iter()
                .map(|t| Ok(MachinTerm::new(read_int(&t.a, base_dir)?, read_rational(&t.b, base_dir)?)))
                .collect::<Result<Vec<_>>>()?;
            MachinFormula::new(terms)
                .map(FormulaDoc::General)
                .map_err(invalid_to_parse)
        }
    }
}

/// Reads a document from disk, resolving sidecars next to it.
pub fn load_formula(path: &Path) -> Result<FormulaDoc> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_formula(&text, path.parent())
}

/// Writes a document (plus any sidecars) to `path`.
pub fn save_formula(path: &Path, f: &FormulaDoc, threshold_digits: usize) -> Result<()> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "formula".into());
    let dir = path
        .parent()
        .map(|p| if p.as_os_str().is_empty() { Path::new(".") } else { p })
        .map(Path::to_path_buf);
    let policy = SidecarPolicy {
        threshold_digits,
        dir,
        stem,
    };
    let mut text = formula_to_json(f, &policy)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn two_term_shape() {
        let f = TwoTermFormula::new(3, BigInt::from(5), ratio(-239, 1)).unwrap();
        let s = two_term_to_json(&f, &SidecarPolicy::default()).unwrap();
        assert_eq!(s, r#"{"k":3,"u1":"5","u2":{"num":"-239","den":"1"}}"#);
        assert_eq!(parse_formula(&s, None).unwrap(), FormulaDoc::TwoTerm(f));
    }

    #[test]
    fn general_round_trip() {
        let f = MachinFormula::kanada2();
        let s = machin_to_json(&f, &SidecarPolicy::default()).unwrap();
        assert!(s.starts_with(r#"{"terms":[{"a":"12","b":{"num":"49","den":"1"}}"#));
        assert_eq!(parse_formula(&s, None).unwrap(), FormulaDoc::General(f));
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(parse_formula("{", None), Err(Error::Parse(_))));
        assert!(matches!(
            parse_formula(r#"{"k":3,"u1":"x5","u2":{"num":"1","den":"1"}}"#, None),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_formula(r#"{"terms":[{"a":"1","b":{"num":"1","den":"0"}}]}"#, None),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_formula(r#"{"terms":[]}"#, None),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn sidecars_are_written_and_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        let f = TwoTermFormula::new(6, BigInt::from(40), ratio(-123456789, 1000)).unwrap();
        save_formula(&path, &FormulaDoc::TwoTerm(f.clone()), 4).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains(r#""u1":"40""#));
        assert!(text.contains("f.u2.num.txt"));
        assert_eq!(load_formula(&path).unwrap(), FormulaDoc::TwoTerm(f));
        fs::write(dir.path().join("f.u2.num.txt"), "-123456780").unwrap();
        assert!(matches!(load_formula(&path), Err(Error::Parse(_))));
    }

    #[test]
    fn sidecar_needs_a_directory() {
        let f = TwoTermFormula::new(2, BigInt::from(123456), ratio(-7, 1)).unwrap();
        let policy = SidecarPolicy {
            threshold_digits: 3,
            ..SidecarPolicy::default()
        };
        assert!(matches!(two_term_to_json(&f, &policy), Err(Error::Invalid(_))));
    }
}
