//! Line-oriented algebra description files.
//!
//! ```text
//! # comments and blank lines are ignored
//! kind: polyhedral
//! name: square
//! dim: 3
//! unit: 0,0,1
//! gen: 1,0,0
//! gen: 0,1,0
//! gen: -1,0,1
//! gen: 0,-1,1
//! expect: nonspectral
//! ```
//!
//! `kind` is `classical`, `polyhedral` or `spin`. For `spin`, `dim` is the
//! dimension of the ambient space, so `spin(d)` has `dim: d+1`. Entries are
//! integers or `p/q` fractions; decimals are rejected.

use std::fmt;
use std::str::FromStr;

use speclat_core::rational::RatVector;
use speclat_core::{make_algebra, AlgebraKind, AlgebraSpec, EffectAlgebra};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: speclat_core::Error,
    },
    #[error("{0}")]
    Algebra(#[from] speclat_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    Classical,
    Polyhedral,
    Spin,
}

impl FromStr for DocKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classical" => Ok(DocKind::Classical),
            "polyhedral" => Ok(DocKind::Polyhedral),
            "spin" => Ok(DocKind::Spin),
            other => Err(format!("unknown kind `{other}`")),
        }
    }
}

impl fmt::Display for DocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DocKind::Classical => "classical",
            DocKind::Polyhedral => "polyhedral",
            DocKind::Spin => "spin",
        })
    }
}

/// What the file's author claims about spectrality; checked by `check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Spectral,
    NonSpectral,
}

impl FromStr for Expectation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spectral" => Ok(Expectation::Spectral),
            "nonspectral" => Ok(Expectation::NonSpectral),
            other => Err(format!("unknown expectation `{other}`")),
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Spectral => "spectral",
            Expectation::NonSpectral => "nonspectral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<T> {
    pub line: usize,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub kind: DocKind,
    pub dim: usize,
    pub name: String,
    pub unit: Option<Located<RatVector>>,
    pub generators: Vec<Located<RatVector>>,
    pub expectation: Option<Expectation>,
}

fn syntax(line: usize, message: impl Into<String>) -> DocumentError {
    DocumentError::Syntax {
        line,
        message: message.into(),
    }
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let mut kind = None;
        let mut dim = None;
        let mut name = None;
        let mut unit = None;
        let mut generators = Vec::new();
        let mut expectation = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected `key: value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let once = |slot: bool| {
                if slot {
                    Err(syntax(line, format!("duplicate key `{key}`")))
                } else {
                    Ok(())
                }
            };
            let vector = |v: &str| {
                RatVector::parse(v).map_err(|e| DocumentError::Invalid { line, source: e })
            };
            match key {
                "kind" => {
                    once(kind.is_some())?;
                    kind = Some(value.parse::<DocKind>().map_err(|e| syntax(line, e))?);
                }
                "dim" => {
                    once(dim.is_some())?;
                    let d: usize = value
                        .parse()
                        .map_err(|_| syntax(line, format!("`{value}` is not a dimension")))?;
                    if d == 0 {
                        return Err(syntax(line, "dimension must be positive"));
                    }
                    dim = Some(d);
                }
                "name" => {
                    once(name.is_some())?;
                    name = Some(value.to_string());
                }
                "unit" => {
                    once(unit.is_some())?;
                    unit = Some(Located {
                        line,
                        value: vector(value)?,
                    });
                }
                "gen" => generators.push(Located {
                    line,
                    value: vector(value)?,
                }),
                "expect" => {
                    once(expectation.is_some())?;
                    expectation = Some(value.parse().map_err(|e: String| syntax(line, e))?);
                }
                other => return Err(syntax(line, format!("unknown key `{other}`"))),
            }
        }
        let kind = kind.ok_or(DocumentError::Missing("kind"))?;
        let dim = dim.ok_or(DocumentError::Missing("dim"))?;
        let doc = AlgebraDocument {
            kind,
            dim,
            name: name.unwrap_or_else(|| kind.to_string()),
            unit,
            generators,
            expectation,
        };
        doc.check_dimensions()?;
        Ok(doc)
    }

    fn check_dimensions(&self) -> Result<(), DocumentError> {
        for v in self.unit.iter().chain(&self.generators) {
            if v.value.dim() != self.dim {
                return Err(DocumentError::Invalid {
                    line: v.line,
                    source: speclat_core::Error::DimensionMismatch {
                        expected: self.dim,
                        got: v.value.dim(),
                    },
                });
            }
        }
        if self.kind == DocKind::Spin && self.dim < 2 {
            return Err(syntax(0, "spin documents need dim of at least 2"));
        }
        Ok(())
    }

    /// Builds and validates the algebra.
    pub fn to_algebra(&self) -> Result<EffectAlgebra, DocumentError> {
        let spec = match self.kind {
            DocKind::Classical => AlgebraSpec::Classical(self.dim),
            DocKind::Spin => AlgebraSpec::Spin(self.dim - 1),
            DocKind::Polyhedral => {
                let unit = self.unit.as_ref().ok_or(DocumentError::Missing("unit"))?;
                if self.generators.is_empty() {
                    return Err(DocumentError::Missing("gen"));
                }
                AlgebraSpec::Polyhedral {
                    generators: self.generators.iter().map(|g| g.value.clone()).collect(),
                    unit: unit.value.clone(),
                }
            }
        };
        let alg = make_algebra(spec, &self.name).map_err(|e| match (&e, &self.unit) {
            (speclat_core::Error::UnitNotOrderUnit, Some(u)) => DocumentError::Invalid {
                line: u.line,
                source: e,
            },
            _ => DocumentError::Algebra(e),
        })?;
        if self.kind != DocKind::Polyhedral {
            if let Some(u) = &self.unit {
                if &u.value != alg.unit() {
                    return Err(syntax(
                        u.line,
                        format!("unit of a {} algebra is {}", self.kind, alg.unit()),
                    ));
                }
            }
            if let Some(g) = self.generators.first() {
                return Err(syntax(
                    g.line,
                    format!("`gen` is not allowed for kind {}", self.kind),
                ));
            }
        }
        Ok(alg)
    }

    pub fn from_algebra(alg: &EffectAlgebra, expectation: Option<Expectation>) -> Self {
        let plain = |value: RatVector| Located { line: 0, value };
        let (kind, generators) = match alg.kind() {
            AlgebraKind::Classical(_) => (DocKind::Classical, Vec::new()),
            AlgebraKind::Spin(_) => (DocKind::Spin, Vec::new()),
            AlgebraKind::Polyhedral => (
                DocKind::Polyhedral,
                alg.cone()
                    .map(|c| c.generators().iter().cloned().map(plain).collect())
                    .unwrap_or_default(),
            ),
        };
        AlgebraDocument {
            kind,
            dim: alg.dim(),
            name: alg.name().to_string(),
            unit: Some(plain(alg.unit().clone())),
            generators,
            expectation,
        }
    }

    pub fn to_text(&self) -> String {
        let row = |v: &RatVector| v.to_strings().join(",");
        let mut out = format!(
            "kind: {}\nname: {}\ndim: {}\n",
            self.kind, self.name, self.dim
        );
        if let Some(u) = &self.unit {
            out += &format!("unit: {}\n", row(&u.value));
        }
        for g in &self.generators {
            out += &format!("gen: {}\n", row(&g.value));
        }
        if let Some(e) = self.expectation {
            out += &format!("expect: {e}\n");
        }
        out
    }
}
