//! Blow-up scripts: one centre per line.
//!
//! ```text
//! # main fibre of type D, level 3
//! smooth f0
//! node f0 e1
//! smooth e2
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fiber::FiberConfig;
use crate::transform::{blow_up, BlowUpCenter, TransformError};

/// An ordered list of blow-up centres, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlowUpScript {
    pub directives: Vec<BlowUpCenter>,
}

impl BlowUpScript {
    pub fn new(directives: Vec<BlowUpCenter>) -> Self {
        Self { directives }
    }

    pub fn len(&self) -> usize {
        self.directives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directives.is_empty()
    }

    pub fn push(&mut self, center: BlowUpCenter) {
        self.directives.push(center);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BlowUpCenter> {
        self.directives.iter()
    }
}

impl FromIterator<BlowUpCenter> for BlowUpScript {
    fn from_iter<T: IntoIterator<Item = BlowUpCenter>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl fmt::Display for BlowUpScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("script line {line}: {message}")]
pub struct ScriptParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for BlowUpScript {
    type Err = ScriptParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut directives = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| ScriptParseError {
                line: n + 1,
                message,
            };
            match tokens.as_slice() {
                [] => {}
                ["smooth", id] => directives.push(BlowUpCenter::smooth(*id)),
                ["node", a, b] => directives.push(BlowUpCenter::node(*a, *b)),
                ["smooth", ..] => return Err(err("`smooth` takes exactly one id".into())),
                ["node", ..] => return Err(err("`node` takes exactly two ids".into())),
                [other, ..] => {
                    return Err(err(format!(
                        "unknown directive `{other}` (expected `smooth` or `node`)"
                    )))
                }
            }
        }
        Ok(Self { directives })
    }
}

/// A directive that could not be applied; `step` counts from 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {step} (`{center}`): {source}")]
pub struct ScriptStepError {
    pub step: usize,
    pub center: BlowUpCenter,
    #[source]
    pub source: TransformError,
}

/// Left fold of [`blow_up`] over the script.
pub fn apply_script(
    config: &FiberConfig,
    script: &BlowUpScript,
) -> Result<FiberConfig, ScriptStepError> {
    script
        .iter()
        .enumerate()
        .try_fold(config.clone(), |acc, (i, center)| {
            blow_up(&acc, center).map_err(|source| ScriptStepError {
                step: i + 1,
                center: center.clone(),
                source,
            })
        })
}
