//! Complex files: JSON `{name, dim, facets}` or plain text with one facet per
//! line and `#` comments. Inputs may also name a builtin as `builtin:<name>`.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tighttri::builtin;
use tighttri::complex::{Complex, VertexId};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub name: String,
    pub dim: usize,
    pub facets: Vec<Vec<VertexId>>,
}

impl ComplexFile {
    /// Canonical form of `x`: vertices sorted within facets and facets sorted.
    pub fn from_complex(name: &str, x: &Complex) -> ComplexFile {
        ComplexFile { name: name.to_string(), dim: x.dim().unwrap_or(0), facets: x.facet_lists() }
    }

    pub fn to_complex(&self) -> Result<Complex, CliError> {
        if self.facets.is_empty() || self.facets.iter().any(|f| f.is_empty()) {
            return Err(CliError::Input(format!("{}: facets must be nonempty", self.name)));
        }
        let x = Complex::from_facets(&self.facets).map_err(|e| CliError::Input(format!("{}: {e}", self.name)))?;
        let d = x.dim().unwrap_or(0);
        if d != self.dim {
            return Err(CliError::Input(format!("{}: declared dim {} but facets have dim {d}", self.name, self.dim)));
        }
        Ok(x)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {}\n", self.name);
        for f in &self.facets {
            let line: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse either format; JSON is recognised by a leading `{`.
    pub fn parse(text: &str, default_name: &str) -> Result<ComplexFile, CliError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| CliError::Input(format!("{default_name}: {e}")));
        }
        let mut name = None;
        let mut facets = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let (body, comment) = match line.split_once('#') {
                Some((b, c)) => (b, Some(c)),
                None => (line, None),
            };
            // the first comment before any facet is taken as the name
            if let (None, Some(c), true) = (&name, comment, facets.is_empty()) {
                if body.trim().is_empty() && !c.trim().is_empty() {
                    name = Some(c.trim().to_string());
                }
            }
            if body.trim().is_empty() {
                continue;
            }
            let facet = body
                .split_whitespace()
                .map(|t| t.parse::<VertexId>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Input(format!("{default_name}:{}: {e}", i + 1)))?;
            facets.push(facet);
        }
        if facets.is_empty() {
            return Err(CliError::Input(format!("{default_name}: no facets")));
        }
        let mut sorted: Vec<Vec<VertexId>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        sorted.sort();
        let dim = sorted.iter().map(|f| f.len()).max().unwrap_or(1) - 1;
        Ok(ComplexFile { name: name.unwrap_or_else(|| default_name.to_string()), dim, facets: sorted })
    }
}

/// Read a complex from a path, `-` for stdin, or `builtin:<name>`.
pub fn load(spec: &str) -> Result<(String, Complex), CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let x = builtin::by_name(name).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok((spec.to_string(), x));
    }
    let text = read_text(spec)?;
    let stem = Path::new(spec).file_stem().and_then(|s| s.to_str()).unwrap_or("stdin");
    let file = ComplexFile::parse(&text, stem)?;
    let x = file.to_complex()?;
    Ok((file.name, x))
}

pub fn read_text(spec: &str) -> Result<String, CliError> {
    if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(spec).map_err(|e| CliError::Input(format!("{spec}: {e}")))
}

pub fn write_text(path: &str, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{path}: {e}")))
}
