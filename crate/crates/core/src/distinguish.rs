//! Balanced two-population classification with multinomial Naive Bayes.
//!
//! Measures how separable two sentence sets are: balance the sets, split
//! train/test, fit a unigram bag-of-words model with additive smoothing and
//! report held-out accuracy.

use std::collections::{BTreeSet, HashMap};

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDoc {
    pub text: String,
    pub label: usize,
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct Split {
    pub train: Vec<LabeledDoc>,
    pub test: Vec<LabeledDoc>,
}

/// Balances `a` (label 0) and `b` (label 1) by random truncation of the
/// larger set, then sends `floor(ratio * N)` documents to training.
///
/// The training quota is split between classes as evenly as possible
/// (class 0 takes the odd one), so both partitions stay balanced within one
/// document. Each partition is shuffled. Blank documents are ignored.
pub fn balanced_split(a: &[String], b: &[String], ratio: f64, seed: u64) -> Result<Split> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidInput(format!("split ratio {ratio} outside [0, 1]")));
    }
    let keep = |docs: &[String]| -> Vec<String> {
        docs.iter().filter(|d| !d.trim().is_empty()).cloned().collect()
    };
    let (a, b) = (keep(a), keep(b));
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("both document sets must be non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = a.len().min(b.len());
    let mut classes: Vec<Vec<String>> = [a, b]
        .into_iter()
        .map(|docs| {
            let mut picked = index::sample(&mut rng, docs.len(), m).into_vec();
            picked.sort_unstable();
            let mut chosen: Vec<String> = picked.into_iter().map(|i| docs[i].clone()).collect();
            chosen.shuffle(&mut rng);
            chosen
        })
        .collect();

    let n_train = (ratio * (2 * m) as f64).floor() as usize;
    let quotas = [n_train.div_ceil(2), n_train / 2];
    let mut split = Split::default();
    for (label, (docs, quota)) in classes.iter_mut().zip(quotas).enumerate() {
        let rest = docs.split_off(quota);
        split
            .train
            .extend(docs.drain(..).map(|text| LabeledDoc { text, label }));
        split
            .test
            .extend(rest.into_iter().map(|text| LabeledDoc { text, label }));
    }
    split.train.shuffle(&mut rng);
    split.test.shuffle(&mut rng);
    Ok(split)
}

/// Multinomial Naive Bayes over unigram counts, parameters in log space.
#[derive(Debug, Clone)]
pub struct NBModel {
    pub classes: Vec<usize>,
    pub class_log_priors: Vec<f64>,
    /// Per word, one log-likelihood per entry of `classes`.
    pub word_log_likelihoods: HashMap<String, Vec<f64>>,
    /// Log of `alpha / (total_c + alpha * V)`, used for out-of-vocabulary words.
    pub unseen_log_likelihoods: Vec<f64>,
    pub vocabulary: BTreeSet<String>,
    pub alpha: f64,
}

pub fn nb_fit(train: &[LabeledDoc], alpha: f64) -> Result<NBModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("smoothing alpha must be positive, got {alpha}")));
    }
    let classes: Vec<usize> = train
        .iter()
        .map(|d| d.label)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if classes.len() < 2 {
        return Err(Error::InvalidInput(
            "training data must contain at least two classes".into(),
        ));
    }
    let slot: HashMap<usize, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let k = classes.len();

    let mut doc_counts = vec![0usize; k];
    let mut token_totals = vec![0usize; k];
    let mut counts: HashMap<String, Vec<usize>> = HashMap::new();
    for doc in train {
        let c = slot[&doc.label];
        doc_counts[c] += 1;
        for tok in tokenize(&doc.text) {
            counts.entry(tok).or_insert_with(|| vec![0; k])[c] += 1;
            token_totals[c] += 1;
        }
    }
    let v = counts.len() as f64;
    let denoms: Vec<f64> = token_totals.iter().map(|&t| t as f64 + alpha * v).collect();
    let n_docs = train.len() as f64;
    let class_log_priors = doc_counts.iter().map(|&c| (c as f64 / n_docs).ln()).collect();
    let unseen_log_likelihoods = denoms.iter().map(|d| (alpha / d).ln()).collect();
    let vocabulary = counts.keys().cloned().collect();
    let word_log_likelihoods = counts
        .into_iter()
        .map(|(w, cs)| {
            let ll = cs
                .iter()
                .zip(&denoms)
                .map(|(&n, d)| ((n as f64 + alpha) / d).ln())
                .collect();
            (w, ll)
        })
        .collect();
    Ok(NBModel {
        classes,
        class_log_priors,
        word_log_likelihoods,
        unseen_log_likelihoods,
        vocabulary,
        alpha,
    })
}

impl NBModel {
    /// Unnormalized log posterior per class (same order as `classes`).
    pub fn joint_log_likelihood(&self, text: &str) -> Vec<f64> {
        let mut scores = self.class_log_priors.clone();
        for tok in tokenize(text) {
            let ll = self
                .word_log_likelihoods
                .get(&tok)
                .unwrap_or(&self.unseen_log_likelihoods);
            for (s, l) in scores.iter_mut().zip(ll) {
                *s += l;
            }
        }
        scores
    }

    /// Normalized posterior probabilities.
    pub fn posterior(&self, text: &str) -> Vec<f64> {
        let jll = self.joint_log_likelihood(text);
        let max = jll.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = jll.iter().map(|s| (s - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        exps.into_iter().map(|e| e / z).collect()
    }

    /// Highest-scoring class; ties go to the lower class id.
    pub fn predict(&self, text: &str) -> usize {
        let jll = self.joint_log_likelihood(text);
        let mut best = 0;
        for (i, s) in jll.iter().enumerate().skip(1) {
            if *s > jll[best] {
                best = i;
            }
        }
        self.classes[best]
    }
}

pub fn evaluate_accuracy(model: &NBModel, test: &[LabeledDoc]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::InvalidInput("test set is empty".into()));
    }
    let correct = test.iter().filter(|d| model.predict(&d.text) == d.label).count();
    Ok(correct as f64 / test.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub accuracy: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

/// Split, fit and score in one go.
pub fn distinguish(a: &[String], b: &[String], ratio: f64, alpha: f64, seed: u64) -> Result<DistinguishReport> {
    let split = balanced_split(a, b, ratio, seed)?;
    let model = nb_fit(&split.train, alpha)?;
    let accuracy = evaluate_accuracy(&model, &split.test)?;
    Ok(DistinguishReport {
        accuracy,
        n_train: split.train.len(),
        n_test: split.test.len(),
        seed,
    })
}
