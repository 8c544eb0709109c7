//! Completion metrics: character n-gram F-score, embedding cosine
//! similarity, and mean ± standard error aggregation.

use std::collections::HashMap;
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChrFParams {
    pub max_ngram_order: usize,
    pub beta: f64,
    pub whitespace_ignored: bool,
}

impl Default for ChrFParams {
    fn default() -> Self {
        ChrFParams {
            max_ngram_order: 6,
            beta: 2.0,
            whitespace_ignored: true,
        }
    }
}

impl ChrFParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_ngram_order < 1 {
            return Err(Error::InvalidInput("max_ngram_order must be at least 1".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidInput("beta must be positive".into()));
        }
        Ok(())
    }
}

fn ngram_counts(chars: &[char], n: usize) -> HashMap<&[char], u32> {
    let mut counts = HashMap::new();
    for gram in chars.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Character n-gram F-score in `[0, 100]`.
///
/// Precision and recall are averaged over the orders `1..=max_ngram_order`
/// that have at least one n-gram on either side, then combined with
/// recall weighted `beta` times as much as precision.
pub fn chrf(hypothesis: &str, reference: &str, p: &ChrFParams) -> f64 {
    let prep = |s: &str| -> Vec<char> {
        if p.whitespace_ignored {
            s.chars().filter(|c| !c.is_whitespace()).collect()
        } else {
            s.chars().collect()
        }
    };
    let hyp = prep(hypothesis);
    let refr = prep(reference);
    match (hyp.is_empty(), refr.is_empty()) {
        (true, true) => return 100.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }

    let mut precision_sum = 0.0;
    let mut recall_sum = 0.0;
    let mut orders = 0usize;
    for n in 1..=p.max_ngram_order {
        let hyp_total = hyp.len().saturating_sub(n - 1);
        let ref_total = refr.len().saturating_sub(n - 1);
        if hyp_total == 0 && ref_total == 0 {
            continue;
        }
        let hyp_counts = ngram_counts(&hyp, n);
        let ref_counts = ngram_counts(&refr, n);
        let matches: u32 = hyp_counts
            .iter()
            .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
        if hyp_total > 0 {
            precision_sum += matches as f64 / hyp_total as f64;
        }
        if ref_total > 0 {
            recall_sum += matches as f64 / ref_total as f64;
        }
        orders += 1;
    }
    let chrp = precision_sum / orders as f64;
    let chrr = recall_sum / orders as f64;
    let b2 = p.beta * p.beta;
    let denom = b2 * chrp + chrr;
    if denom == 0.0 {
        return 0.0;
    }
    100.0 * (1.0 + b2) * chrp * chrr / denom
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("embedding has no dimensions".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("embedding has a non-finite entry".into()));
        }
        Ok(EmbeddingVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn cosine_similarity(u: &EmbeddingVector, v: &EmbeddingVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::InvalidInput("cosine similarity of a zero vector".into()));
    }
    let dot: f64 = u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Reads one vector per line (space-separated decimals). Blank lines are
/// errors since line `i` must align with sentence `i`.
pub fn read_embeddings<R: BufRead>(reader: R) -> Result<Vec<EmbeddingVector>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Read {
            line: idx + 1,
            source,
        })?;
        let values = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Data {
                line: idx + 1,
                message: format!("bad number: {e}"),
            })?;
        let vector = EmbeddingVector::new(values).map_err(|e| Error::Data {
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(vector);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`; 0 when `n == 1`.
    pub standard_error: f64,
    pub n: usize,
    pub per_item: Vec<f64>,
}

pub fn aggregate(per_item: Vec<f64>) -> Result<ScoreReport> {
    let n = per_item.len();
    if n == 0 {
        return Err(Error::InvalidInput("cannot aggregate an empty score list".into()));
    }
    let mean = per_item.iter().sum::<f64>() / n as f64;
    let standard_error = if n < 2 {
        0.0
    } else {
        let ss: f64 = per_item.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
    };
    Ok(ScoreReport {
        mean,
        standard_error,
        n,
        per_item,
    })
}

/// ChrF for aligned hypothesis/reference lists.
pub fn score_chrf(hyps: &[String], refs: &[String], p: &ChrFParams) -> Result<ScoreReport> {
    p.validate()?;
    if hyps.len() != refs.len() {
        return Err(Error::InvalidInput(format!(
            "{} hypotheses but {} references",
            hyps.len(),
            refs.len()
        )));
    }
    let scores: Vec<f64> = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| chrf(h, r, p))
        .collect();
    aggregate(scores)
}

pub fn score_cosine(hyps: &[EmbeddingVector], refs: &[EmbeddingVector]) -> Result<ScoreReport> {
    if hyps.len() != refs.len() {
        return Err(Error::InvalidInput(format!(
            "{} hypothesis embeddings but {} reference embeddings",
            hyps.len(),
            refs.len()
        )));
    }
    let scores = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(u, v)| cosine_similarity(u, v))
        .collect::<Result<Vec<f64>>>()?;
    aggregate(scores)
}
