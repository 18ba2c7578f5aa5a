//! Input files and atomic JSON output.

use crate::certify::SemialgSystem;
use crate::error::{Error, Result};
use crate::numfmt::canonical_floats;
use crate::polyalg::json::{mono_from_json, TermJson};
use crate::polyalg::{MonomialPoly, SimplexDomain};
use crate::rational::parse_rational;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityJson {
    #[serde(default)]
    pub name: Option<String>,
    pub terms: Vec<TermJson>,
}

/// Raw constraints g_i ≥ 0; every command normalizes them itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default)]
    pub inequalities: Vec<InequalityJson>,
    #[serde(default)]
    pub s_hat: Option<String>,
    #[serde(default)]
    pub metadata: serde_json::Value,
}

impl SystemFile {
    pub fn to_system(&self) -> Result<SemialgSystem> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if !self.variables.is_empty() && self.variables.len() != self.n {
            return Err(Error::InvalidInput(format!("{} variable names for n = {}", self.variables.len(), self.n)));
        }
        let dom = match &self.s_hat {
            Some(s) => SimplexDomain::new(self.n, parse_rational(s)?)?,
            None => SimplexDomain::default_for(self.n),
        };
        let g = self.inequalities.iter().map(|i| mono_from_json(self.n, &i.terms)).collect::<Result<Vec<_>>>()?;
        let names = self.inequalities.iter().enumerate().map(|(k, i)| i.name.clone().unwrap_or_else(|| format!("g{}", k + 1))).collect();
        SemialgSystem::with_names(dom, g, names)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ObjectiveFile {
    Terms(Vec<TermJson>),
    Object {
        #[serde(default)]
        n: Option<usize>,
        terms: Vec<TermJson>,
    },
}

/// A bare term list or `{"n": .., "terms": [..]}`; n defaults to the system's, then to the exponent length.
pub fn parse_objective(text: &str, n: Option<usize>) -> Result<MonomialPoly> {
    let file: ObjectiveFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("objective: {e}")))?;
    let (declared, terms) = match file {
        ObjectiveFile::Terms(t) => (None, t),
        ObjectiveFile::Object { n, terms } => (n, terms),
    };
    let n = match (n, declared) {
        (Some(a), Some(b)) if a != b => return Err(Error::DimensionMismatch { expected: a, got: b }),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => terms.first().map(|t| t.exp.len()).ok_or_else(|| Error::Parse("objective: empty term list without n".into()))?,
    };
    mono_from_json(n, &terms)
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("system: {e}")))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Pretty JSON with 17-digit floats and a trailing newline.
pub fn render<T: Serialize>(value: &T) -> Result<String> {
    let v = canonical_floats(serde_json::to_value(value)?);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
