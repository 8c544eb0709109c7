//! CoNLL-U reading and writing, plus the noun/verb phrase head counts used
//! by the sentence pre-filter.
//!
//! Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped. Every
//! returned [`ParsedSentence`] has contiguous ids, exactly one root, heads in
//! range and no head cycles.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use thiserror::Error;

/// Universal part-of-speech tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
    Other(String),
}

impl Upos {
    pub fn parse(tag: &str) -> Upos {
        match tag {
            "ADJ" => Upos::Adj,
            "ADP" => Upos::Adp,
            "ADV" => Upos::Adv,
            "AUX" => Upos::Aux,
            "CCONJ" => Upos::Cconj,
            "DET" => Upos::Det,
            "INTJ" => Upos::Intj,
            "NOUN" => Upos::Noun,
            "NUM" => Upos::Num,
            "PART" => Upos::Part,
            "PRON" => Upos::Pron,
            "PROPN" => Upos::Propn,
            "PUNCT" => Upos::Punct,
            "SCONJ" => Upos::Sconj,
            "SYM" => Upos::Sym,
            "VERB" => Upos::Verb,
            "X" => Upos::X,
            other => Upos::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
            Upos::Other(tag) => tag,
        }
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self, Upos::Noun | Upos::Propn | Upos::Pron)
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UdToken {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: Upos,
    pub xpos: Option<String>,
    pub feats: BTreeMap<String, String>,
    pub head: usize,
    pub deprel: String,
    pub deps: Option<String>,
    pub misc: Option<String>,
}

impl UdToken {
    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }

    pub fn is_punct(&self) -> bool {
        self.upos == Upos::Punct
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSentence {
    pub id: Option<String>,
    pub text: String,
    pub tokens: Vec<UdToken>,
}

impl ParsedSentence {
    /// Number of non-punctuation tokens.
    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| !t.is_punct()).count()
    }

    /// Checks the structural invariants. `first_line` is only used to
    /// position errors.
    pub fn validate(&self, first_line: usize) -> Result<(), ConlluError> {
        let n = self.tokens.len();
        if n == 0 {
            return Err(ConlluError::new(first_line, ConlluErrorKind::EmptySentence));
        }
        for (pos, tok) in self.tokens.iter().enumerate() {
            if tok.index != pos + 1 {
                return Err(ConlluError::new(
                    first_line,
                    ConlluErrorKind::NonContiguousIds {
                        expected: pos + 1,
                        found: tok.index,
                    },
                ));
            }
            if tok.head > n {
                return Err(ConlluError::new(
                    first_line,
                    ConlluErrorKind::HeadOutOfRange {
                        token: tok.index,
                        head: tok.head,
                    },
                ));
            }
        }
        let roots = self.tokens.iter().filter(|t| t.head == 0).count();
        if roots != 1 {
            return Err(ConlluError::new(first_line, ConlluErrorKind::RootCount(roots)));
        }
        // Walking up from any token must reach the root within n steps.
        for tok in &self.tokens {
            let mut cur = tok.index;
            let mut steps = 0;
            while cur != 0 {
                cur = self.tokens[cur - 1].head;
                steps += 1;
                if steps > n {
                    return Err(ConlluError::new(
                        first_line,
                        ConlluErrorKind::Cycle { token: tok.index },
                    ));
                }
            }
        }
        Ok(())
    }

    /// Writes the sentence in CoNLL-U, including the trailing blank line.
    pub fn write_conllu<W: fmt::Write>(&self, out: &mut W) -> fmt::Result {
        if let Some(id) = &self.id {
            writeln!(out, "# sent_id = {id}")?;
        }
        writeln!(out, "# text = {}", self.text)?;
        for t in &self.tokens {
            let feats = if t.feats.is_empty() {
                "_".to_string()
            } else {
                t.feats
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index,
                t.form,
                t.lemma,
                t.upos,
                t.xpos.as_deref().unwrap_or("_"),
                feats,
                t.head,
                t.deprel,
                t.deps.as_deref().unwrap_or("_"),
                t.misc.as_deref().unwrap_or("_"),
            )?;
        }
        writeln!(out)
    }
}

pub fn to_conllu(sentences: &[ParsedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        s.write_conllu(&mut out).expect("writing to a String cannot fail");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConlluErrorKind {
    #[error("expected 10 tab-separated columns, found {0}")]
    ColumnCount(usize),
    #[error("invalid token id {0:?}")]
    BadId(String),
    #[error("invalid head {0:?}")]
    BadHead(String),
    #[error("malformed feature {0:?}")]
    BadFeature(String),
    #[error("duplicate feature key {0:?}")]
    DuplicateFeature(String),
    #[error("expected token id {expected}, found {found}")]
    NonContiguousIds { expected: usize, found: usize },
    #[error("token {token} has head {head} outside the sentence")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("expected exactly one root, found {0}")]
    RootCount(usize),
    #[error("head links starting at token {token} form a cycle")]
    Cycle { token: usize },
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("CoNLL-U line {line}: {kind}")]
pub struct ConlluError {
    pub line: usize,
    pub kind: ConlluErrorKind,
}

impl ConlluError {
    fn new(line: usize, kind: ConlluErrorKind) -> Self {
        ConlluError { line, kind }
    }
}

fn opt_field(col: &str) -> Option<String> {
    (col != "_").then(|| col.to_string())
}

fn parse_feats(col: &str) -> Result<BTreeMap<String, String>, ConlluErrorKind> {
    let mut feats = BTreeMap::new();
    if col == "_" {
        return Ok(feats);
    }
    for pair in col.split('|') {
        let (k, v) = pair
            .split_once('=')
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .ok_or_else(|| ConlluErrorKind::BadFeature(pair.to_string()))?;
        if feats.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConlluErrorKind::DuplicateFeature(k.to_string()));
        }
    }
    Ok(feats)
}

/// `None` for multiword-token and empty-node lines.
fn parse_token_line(line: &str) -> Result<Option<UdToken>, ConlluErrorKind> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(ConlluErrorKind::ColumnCount(cols.len()));
    }
    let id = cols[0];
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    let index: usize = id
        .parse()
        .ok()
        .filter(|&i| i >= 1)
        .ok_or_else(|| ConlluErrorKind::BadId(id.to_string()))?;
    let head: usize = cols[6]
        .parse()
        .map_err(|_| ConlluErrorKind::BadHead(cols[6].to_string()))?;
    Ok(Some(UdToken {
        index,
        form: cols[1].to_string(),
        lemma: cols[2].to_string(),
        upos: Upos::parse(cols[3]),
        xpos: opt_field(cols[4]),
        feats: parse_feats(cols[5])?,
        head,
        deprel: cols[7].to_string(),
        deps: opt_field(cols[8]),
        misc: opt_field(cols[9]),
    }))
}

/// Streaming CoNLL-U reader.
///
/// Yields one item per sentence block. After an error the rest of the
/// offending block is skipped, so callers can either stop at the first error
/// or keep going.
pub struct ConlluReader<R> {
    reader: R,
    line_no: usize,
    buf: Vec<u8>,
    done: bool,
}

impl<R: BufRead> ConlluReader<R> {
    pub fn new(reader: R) -> Self {
        ConlluReader {
            reader,
            line_no: 0,
            buf: Vec::new(),
            done: false,
        }
    }

    fn next_line(&mut self) -> Result<Option<String>, ConlluError> {
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => Ok(None),
            Ok(_) => {
                self.line_no += 1;
                let text = String::from_utf8_lossy(&self.buf);
                Ok(Some(text.trim_end_matches(['\n', '\r']).to_string()))
            }
            Err(e) => Err(ConlluError::new(
                self.line_no + 1,
                ConlluErrorKind::Io(e.to_string()),
            )),
        }
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<ParsedSentence, ConlluError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut id = None;
        let mut text = None;
        let mut tokens = Vec::new();
        let mut first_line = 0;
        let mut error: Option<ConlluError> = None;
        loop {
            let line = match self.next_line() {
                Ok(Some(line)) => line,
                Ok(None) => {
                    self.done = true;
                    break;
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            };
            if line.trim().is_empty() {
                if first_line == 0 {
                    continue;
                }
                break;
            }
            if first_line == 0 {
                first_line = self.line_no;
            }
            if error.is_some() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    match key.trim() {
                        "sent_id" => id = Some(value.trim().to_string()),
                        "text" => text = Some(value.trim().to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            match parse_token_line(&line) {
                Ok(Some(tok)) => tokens.push(tok),
                Ok(None) => {}
                Err(kind) => error = Some(ConlluError::new(self.line_no, kind)),
            }
        }
        if first_line == 0 {
            return None;
        }
        if let Some(e) = error {
            return Some(Err(e));
        }
        let text = text.unwrap_or_else(|| {
            tokens
                .iter()
                .map(|t| t.form.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        });
        let sentence = ParsedSentence { id, text, tokens };
        Some(sentence.validate(first_line).map(|_| sentence))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Default)]
pub struct ParsedCorpus {
    pub sentences: Vec<ParsedSentence>,
    pub errors: Vec<ConlluError>,
}

/// Reads a whole CoNLL-U stream. In strict mode the first error is returned;
/// in lenient mode bad sentences are recorded and skipped.
pub fn parse_conllu<R: BufRead>(reader: R, mode: ParseMode) -> Result<ParsedCorpus, ConlluError> {
    let mut corpus = ParsedCorpus::default();
    for item in ConlluReader::new(reader) {
        match item {
            Ok(s) => corpus.sentences.push(s),
            Err(e @ ConlluError {
                kind: ConlluErrorKind::Io(_),
                ..
            }) => return Err(e),
            Err(e) if mode == ParseMode::Strict => return Err(e),
            Err(e) => corpus.errors.push(e),
        }
    }
    Ok(corpus)
}

const NON_HEAD_NOMINAL_RELS: [&str; 4] = ["compound", "flat", "fixed", "goeswith"];

fn base_rel(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

/// Noun-phrase and verb-phrase head counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhraseCounts {
    pub noun_phrases: usize,
    pub verb_phrases: usize,
}

impl PhraseCounts {
    /// `noun_phrases <= max_ratio * verb_phrases`, with zero verb phrases
    /// treated as an unbounded ratio.
    pub fn ratio_within(&self, max_ratio: f64) -> bool {
        self.verb_phrases > 0 && self.noun_phrases as f64 <= max_ratio * self.verb_phrases as f64
    }
}

/// Counts maximal nominal heads and clause-heading verbal predicates.
///
/// A nominal token attached by `compound`, `flat`, `fixed` or `goeswith`
/// (subtypes included) is part of a larger chunk and is not counted.
pub fn count_phrases(s: &ParsedSentence) -> PhraseCounts {
    let mut counts = PhraseCounts {
        noun_phrases: 0,
        verb_phrases: 0,
    };
    for t in &s.tokens {
        let rel = base_rel(&t.deprel);
        if t.upos.is_nominal() && !NON_HEAD_NOMINAL_RELS.contains(&rel) {
            counts.noun_phrases += 1;
        }
        if t.upos == Upos::Verb || (t.upos == Upos::Aux && rel == "root") {
            counts.verb_phrases += 1;
        }
    }
    counts
}
