//! Synthetic telegraphic-sentence generation.
//!
//! A sentence passes a pre-filter (length, punctuation, noun/verb phrase
//! ratio), then every token gets independent Bernoulli draws according to
//! its part of speech:
//!
//! | UPOS                                  | rule                         | default p |
//! |---------------------------------------|------------------------------|-----------|
//! | NOUN, PROPN (with `Number`)           | flip grammatical number      | 0.30      |
//! | ADJ, ADV, VERB                        | drop                         | 0.50      |
//! | surviving VERB, AUX                   | replace by lemma             | 0.50      |
//! | PRON with `Poss=Yes` / `PronType=Dem` | swap within pronoun set      | 0.40      |
//! | DET, ADP, PART                        | drop                         | 0.70      |
//!
//! Everything else is copied. The result is kept only if it has enough words
//! and its word count stays within a band relative to the original.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textmorph::{
    capitalize_first, match_case_first, swap_pronoun, toggle_number, GrammaticalNumber,
    IrregularLexicon, PronounSets,
};
use crate::ud_parse::{count_phrases, ParsedSentence, UdToken, Upos};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleConfig {
    pub p_noun_number: f64,
    pub p_content_discard: f64,
    pub p_pronoun_swap: f64,
    pub p_function_discard: f64,
    pub p_verb_lemma: f64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            p_noun_number: 0.30,
            p_content_discard: 0.50,
            p_pronoun_swap: 0.40,
            p_function_discard: 0.70,
            p_verb_lemma: 0.50,
        }
    }
}

impl RuleConfig {
    /// Every probability set to zero.
    pub fn disabled() -> Self {
        RuleConfig {
            p_noun_number: 0.0,
            p_content_discard: 0.0,
            p_pronoun_swap: 0.0,
            p_function_discard: 0.0,
            p_verb_lemma: 0.0,
        }
    }

    pub fn probability(&self, rule: Rule) -> f64 {
        match rule {
            Rule::NounNumber => self.p_noun_number,
            Rule::DiscardContent => self.p_content_discard,
            Rule::PronounSwap => self.p_pronoun_swap,
            Rule::DiscardFunction => self.p_function_discard,
            Rule::VerbLemma => self.p_verb_lemma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for rule in Rule::ALL {
            let p = self.probability(rule);
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!(
                    "probability for {rule} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub max_words: usize,
    pub max_np_vp_ratio: f64,
    pub min_synth_words: usize,
    pub ratio_band: (f64, f64),
    pub allowed_punct: Vec<char>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            max_words: 15,
            max_np_vp_ratio: 2.0,
            min_synth_words: 3,
            ratio_band: (0.25, 0.75),
            allowed_punct: vec![',', '.'],
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        let (low, high) = self.ratio_band;
        if !(0.0 < low && low < high && high <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "ratio_band must satisfy 0 < low < high <= 1, got [{low}, {high}]"
            )));
        }
        if self.min_synth_words < 1 {
            return Err(Error::InvalidInput("min_synth_words must be at least 1".into()));
        }
        if !(self.max_np_vp_ratio.is_finite() && self.max_np_vp_ratio >= 0.0) {
            return Err(Error::InvalidInput("max_np_vp_ratio must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    NounNumber,
    DiscardContent,
    PronounSwap,
    DiscardFunction,
    VerbLemma,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::NounNumber,
        Rule::DiscardContent,
        Rule::PronounSwap,
        Rule::DiscardFunction,
        Rule::VerbLemma,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::NounNumber => "noun_number",
            Rule::DiscardContent => "discard_content",
            Rule::PronounSwap => "pronoun_swap",
            Rule::DiscardFunction => "discard_function",
            Rule::VerbLemma => "verb_lemma",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub i: usize,
    pub rule: Rule,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticPair {
    pub id: String,
    pub original: String,
    pub synthetic: String,
    pub trace: Vec<TraceEntry>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefilterReason {
    Length,
    Punctuation,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PostfilterReason {
    TooShort,
    Band,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict<R> {
    Accept,
    Reject(R),
}

impl<R> Verdict<R> {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

pub fn prefilter(s: &ParsedSentence, cfg: &FilterConfig) -> Verdict<PrefilterReason> {
    if s.word_count() > cfg.max_words {
        return Verdict::Reject(PrefilterReason::Length);
    }
    let clean = s.text.chars().all(|c| {
        c.is_alphanumeric() || c == ' ' || is_apostrophe(c) || cfg.allowed_punct.contains(&c)
    });
    if !clean {
        return Verdict::Reject(PrefilterReason::Punctuation);
    }
    if !count_phrases(s).ratio_within(cfg.max_np_vp_ratio) {
        return Verdict::Reject(PrefilterReason::Ratio);
    }
    Verdict::Accept
}

/// Words in a detokenized string: whitespace-separated chunks containing at
/// least one letter or digit.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace()
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .count()
}

pub fn postfilter(original_wc: usize, synthetic_wc: usize, cfg: &FilterConfig) -> Verdict<PostfilterReason> {
    if synthetic_wc < cfg.min_synth_words {
        return Verdict::Reject(PostfilterReason::TooShort);
    }
    let ratio = synthetic_wc as f64 / original_wc.max(1) as f64;
    let (low, high) = cfg.ratio_band;
    if ratio < low || ratio > high {
        return Verdict::Reject(PostfilterReason::Band);
    }
    Verdict::Accept
}

/// A token that survived degradation, with its possibly rewritten form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputToken {
    pub index: usize,
    pub form: String,
    pub upos: Upos,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTally {
    pub eligible: u64,
    pub applied: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleTallies([RuleTally; 5]);

impl RuleTallies {
    pub fn get(&self, rule: Rule) -> RuleTally {
        self.0[rule.slot()]
    }

    fn draw<R: Rng + ?Sized>(&mut self, rule: Rule, p: f64, rng: &mut R) -> bool {
        let fired = rng.random_bool(p);
        let t = &mut self.0[rule.slot()];
        t.eligible += 1;
        t.applied += fired as u64;
        fired
    }

    fn merge(&mut self, other: &RuleTallies) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            a.eligible += b.eligible;
            a.applied += b.applied;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degradation {
    pub tokens: Vec<OutputToken>,
    pub trace: Vec<TraceEntry>,
    pub tallies: RuleTallies,
}

/// Lexical resources used by the substitution rules.
#[derive(Debug, Clone, Default)]
pub struct Morphology {
    pub lexicon: IrregularLexicon,
    pub pronouns: PronounSets,
}

fn keep(tok: &UdToken, form: String) -> OutputToken {
    OutputToken {
        index: tok.index,
        form,
        upos: tok.upos.clone(),
    }
}

/// Applies the part-of-speech rules to every token of `s`, in order.
pub fn degrade_sentence<R: Rng + ?Sized>(
    s: &ParsedSentence,
    rules: &RuleConfig,
    morph: &Morphology,
    rng: &mut R,
) -> Degradation {
    let mut out = Degradation {
        tokens: Vec::with_capacity(s.tokens.len()),
        trace: Vec::new(),
        tallies: RuleTallies::default(),
    };
    let record = |trace: &mut Vec<TraceEntry>, tok: &UdToken, rule, after: &str| {
        trace.push(TraceEntry {
            i: tok.index,
            rule,
            before: tok.form.clone(),
            after: after.to_string(),
        })
    };

    for tok in &s.tokens {
        match tok.upos {
            Upos::Noun | Upos::Propn => {
                let number = GrammaticalNumber::from_feature(tok.feat("Number"));
                if number != GrammaticalNumber::Unknown
                    && out.tallies.draw(Rule::NounNumber, rules.p_noun_number, rng)
                {
                    let toggled = toggle_number(&tok.form, number, &morph.lexicon);
                    record(&mut out.trace, tok, Rule::NounNumber, &toggled);
                    out.tokens.push(keep(tok, toggled));
                } else {
                    out.tokens.push(keep(tok, tok.form.clone()));
                }
            }
            Upos::Adj | Upos::Adv | Upos::Verb => {
                if out.tallies.draw(Rule::DiscardContent, rules.p_content_discard, rng) {
                    record(&mut out.trace, tok, Rule::DiscardContent, "");
                    continue;
                }
                if tok.upos == Upos::Verb {
                    out.tokens.push(lemma_rule(tok, rules, &mut out.tallies, &mut out.trace, rng));
                } else {
                    out.tokens.push(keep(tok, tok.form.clone()));
                }
            }
            Upos::Aux => {
                out.tokens.push(lemma_rule(tok, rules, &mut out.tallies, &mut out.trace, rng));
            }
            Upos::Pron => {
                let marked = tok.feat("Poss") == Some("Yes") || tok.feat("PronType") == Some("Dem");
                if marked
                    && morph.pronouns.class_of(&tok.form).is_some()
                    && out.tallies.draw(Rule::PronounSwap, rules.p_pronoun_swap, rng)
                {
                    let swapped = swap_pronoun(&tok.form, &morph.pronouns, rng)
                        .expect("class membership checked above");
                    record(&mut out.trace, tok, Rule::PronounSwap, &swapped);
                    out.tokens.push(keep(tok, swapped));
                    continue;
                }
                out.tokens.push(keep(tok, tok.form.clone()));
            }
            Upos::Det | Upos::Adp | Upos::Part => {
                if out.tallies.draw(Rule::DiscardFunction, rules.p_function_discard, rng) {
                    record(&mut out.trace, tok, Rule::DiscardFunction, "");
                } else {
                    out.tokens.push(keep(tok, tok.form.clone()));
                }
            }
            _ => out.tokens.push(keep(tok, tok.form.clone())),
        }
    }
    out
}

fn lemma_rule<R: Rng + ?Sized>(
    tok: &UdToken,
    rules: &RuleConfig,
    tallies: &mut RuleTallies,
    trace: &mut Vec<TraceEntry>,
    rng: &mut R,
) -> OutputToken {
    let has_lemma = !tok.lemma.is_empty() && tok.lemma != "_";
    if has_lemma && tallies.draw(Rule::VerbLemma, rules.p_verb_lemma, rng) {
        let lemma = match_case_first(&tok.form, &tok.lemma.to_lowercase());
        trace.push(TraceEntry {
            i: tok.index,
            rule: Rule::VerbLemma,
            before: tok.form.clone(),
            after: lemma.clone(),
        });
        return keep(tok, lemma);
    }
    keep(tok, tok.form.clone())
}

fn attaches_left(form: &str) -> bool {
    form.starts_with(['\'', '\u{2019}']) || form.eq_ignore_ascii_case("n't")
}

/// Joins token forms into a sentence: single spaces, commas and stops
/// attached to the preceding word, clitics (`'s`, `n't`) glued to their
/// host, lowercase except for the first character.
pub fn detokenize<'a, I>(forms: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = String::new();
    let mut last_punct: Option<char> = None;
    for form in forms {
        let form = form.trim();
        if form.is_empty() {
            continue;
        }
        match form {
            "," => {
                if !out.is_empty() && last_punct.is_none() {
                    out.push(',');
                    last_punct = Some(',');
                }
            }
            "." => {
                if !out.is_empty() && last_punct != Some('.') {
                    if last_punct == Some(',') {
                        out.pop();
                    }
                    out.push('.');
                    last_punct = Some('.');
                }
            }
            _ => {
                let lower = form.to_lowercase();
                if last_punct == Some('.') {
                    // sentence-internal stop followed by more words
                    out.pop();
                }
                if !out.is_empty() && !(attaches_left(form) && last_punct.is_none()) {
                    out.push(' ');
                }
                out.push_str(&lower);
                last_punct = None;
            }
        }
    }
    capitalize_first(&out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PrefilterRejections {
    pub length: u64,
    pub punctuation: u64,
    pub ratio: u64,
}

impl PrefilterRejections {
    pub fn total(&self) -> u64 {
        self.length + self.punctuation + self.ratio
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PostfilterRejections {
    pub too_short: u64,
    pub band: u64,
}

impl PostfilterRejections {
    pub fn total(&self) -> u64 {
        self.too_short + self.band
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleReport {
    pub eligible: u64,
    pub applied: u64,
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerationReport {
    pub input_sentences: u64,
    pub rejected_prefilter: PrefilterRejections,
    pub rejected_postfilter: PostfilterRejections,
    pub emitted: u64,
    pub tallies: RuleTallies,
}

impl GenerationReport {
    pub fn rule(&self, rule: Rule) -> RuleReport {
        let t = self.tallies.get(rule);
        RuleReport {
            eligible: t.eligible,
            applied: t.applied,
            rate: (t.eligible > 0).then(|| t.applied as f64 / t.eligible as f64),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rules: serde_json::Map<String, serde_json::Value> = Rule::ALL
            .iter()
            .map(|r| (r.as_str().to_string(), serde_json::to_value(self.rule(*r)).unwrap()))
            .collect();
        serde_json::json!({
            "input_sentences": self.input_sentences,
            "rejected_prefilter": self.rejected_prefilter,
            "rejected_postfilter": self.rejected_postfilter,
            "emitted": self.emitted,
            "rules": rules,
        })
    }
}

enum Outcome {
    Pre(PrefilterReason),
    Post(PostfilterReason, RuleTallies),
    Emit(SyntheticPair, RuleTallies),
}

/// The random stream for sentence `ordinal` under run seed `seed`: a ChaCha
/// key derived from the seed, with the ordinal as stream id.
pub fn sentence_rng(seed: u64, ordinal: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ordinal);
    rng
}

#[derive(Debug, Clone, Default)]
pub struct Generator {
    pub rules: RuleConfig,
    pub filters: FilterConfig,
    pub morphology: Morphology,
}

impl Generator {
    pub fn new(rules: RuleConfig, filters: FilterConfig) -> Result<Self> {
        rules.validate()?;
        filters.validate()?;
        Ok(Generator {
            rules,
            filters,
            morphology: Morphology::default(),
        })
    }

    fn process(&self, ordinal: usize, s: &ParsedSentence, seed: u64) -> Outcome {
        if let Verdict::Reject(reason) = prefilter(s, &self.filters) {
            return Outcome::Pre(reason);
        }
        let mut rng = sentence_rng(seed, ordinal as u64);
        let degraded = degrade_sentence(s, &self.rules, &self.morphology, &mut rng);
        let original = detokenize(s.tokens.iter().map(|t| t.form.as_str()));
        let synthetic = detokenize(degraded.tokens.iter().map(|t| t.form.as_str()));
        match postfilter(word_count(&original), word_count(&synthetic), &self.filters) {
            Verdict::Reject(reason) => Outcome::Post(reason, degraded.tallies),
            Verdict::Accept => Outcome::Emit(
                SyntheticPair {
                    id: s.id.clone().unwrap_or_else(|| format!("s{ordinal}")),
                    original,
                    synthetic,
                    trace: degraded.trace,
                    seed,
                },
                degraded.tallies,
            ),
        }
    }

    /// Produces zero or one pair per input sentence, in corpus order. The
    /// result depends only on the corpus, the configuration and `seed`.
    pub fn generate(&self, corpus: &[ParsedSentence], seed: u64) -> (Vec<SyntheticPair>, GenerationReport) {
        let outcomes: Vec<Outcome> = corpus
            .par_iter()
            .enumerate()
            .map(|(ordinal, s)| self.process(ordinal, s, seed))
            .collect();

        let mut report = GenerationReport {
            input_sentences: corpus.len() as u64,
            ..Default::default()
        };
        let mut pairs = Vec::new();
        for outcome in outcomes {
            match outcome {
                Outcome::Pre(reason) => match reason {
                    PrefilterReason::Length => report.rejected_prefilter.length += 1,
                    PrefilterReason::Punctuation => report.rejected_prefilter.punctuation += 1,
                    PrefilterReason::Ratio => report.rejected_prefilter.ratio += 1,
                },
                Outcome::Post(reason, tallies) => {
                    report.tallies.merge(&tallies);
                    match reason {
                        PostfilterReason::TooShort => report.rejected_postfilter.too_short += 1,
                        PostfilterReason::Band => report.rejected_postfilter.band += 1,
                    }
                }
                Outcome::Emit(pair, tallies) => {
                    report.tallies.merge(&tallies);
                    report.emitted += 1;
                    pairs.push(pair);
                }
            }
        }
        (pairs, report)
    }
}

pub fn generate_dataset(
    corpus: &[ParsedSentence],
    rules: &RuleConfig,
    filters: &FilterConfig,
    seed: u64,
) -> Result<(Vec<SyntheticPair>, GenerationReport)> {
    let generator = Generator::new(*rules, filters.clone())?;
    Ok(generator.generate(corpus, seed))
}
