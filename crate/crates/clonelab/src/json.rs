//! JSON forms of matrices, ensembles and black-hole experiment configs.
//!
//! A matrix is `{"rows": r, "cols": c, "re": [...], "im": [...]}` with both
//! arrays row-major of length `r·c`. An ensemble file is a JSON list of such
//! matrices.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clonelab_core::designs::UnitaryEnsemble;
use clonelab_core::matcore::ComplexMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = anyhow::Error;

    fn try_from(m: &MatrixJson) -> Result<Self> {
        Ok(ComplexMatrix::from_parts(m.rows, m.cols, &m.re, &m.im)?)
    }
}

pub fn matrices_to_json(ms: &[ComplexMatrix]) -> String {
    let list: Vec<MatrixJson> = ms.iter().map(MatrixJson::from).collect();
    serde_json::to_string(&list).expect("matrices serialize")
}

pub fn matrices_from_json(text: &str) -> Result<Vec<ComplexMatrix>> {
    let list: Vec<MatrixJson> = serde_json::from_str(text)?;
    list.iter().map(ComplexMatrix::try_from).collect()
}

pub fn read_matrices(path: &Path) -> Result<Vec<ComplexMatrix>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    matrices_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads an ensemble file; `design_order` is what the caller vouches for.
pub fn read_ensemble(path: &Path, design_order: Option<usize>) -> Result<UnitaryEnsemble> {
    Ok(UnitaryEnsemble::explicit(read_matrices(path)?, design_order)?)
}

/// Which scrambler a black-hole run averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScramblerKind {
    /// The full Clifford group, averaged exactly.
    Clifford,
    /// Haar samples with a reported standard error.
    HaarMc,
}

/// An observer description in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObserverJson {
    /// One `U†` call that routes the infalling qubits to the readout.
    RadiationDecoder,
    /// Ignores its register and guesses.
    Oblivious,
    /// Always answers `x`.
    Constant { x: usize },
    Explicit { ancillas: usize, call: CallJson, v1: MatrixJson, v2: MatrixJson },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CallJson {
    Forward,
    Adjoint,
}

/// `channel` is either `"identity"` (everything radiated) or the path of a
/// Kraus file, in which case `horizon_dim · radiation_dim` must be its output
/// dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlackHoleConfig {
    pub n: usize,
    pub k: usize,
    pub ensemble: ScramblerKind,
    pub channel: String,
    #[serde(default)]
    pub horizon_dim: Option<usize>,
    #[serde(default)]
    pub radiation_dim: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    pub bob: ObserverJson,
    pub charlie: ObserverJson,
}

impl BlackHoleConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: BlackHoleConfig = serde_json::from_str(text)?;
        if cfg.channel != "identity" && (cfg.horizon_dim.is_none() || cfg.radiation_dim.is_none()) {
            bail!("a Kraus-file channel needs horizon_dim and radiation_dim");
        }
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
