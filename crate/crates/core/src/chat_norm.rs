//! Cleaning of CHAT-style transcript tiers into plain sentences.
//!
//! A tier line goes through a fixed chain: timestamps, pauses, fillers,
//! action codes, bracketed spans, fragments and unintelligible codes, runs of
//! X, special-character tokens, retracing repetitions, contractions, and
//! finally whitespace/case/terminal-stop normalization.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::contractions::expand_word;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Aphasic,
    NeurotypicalControl,
    Sbcsae,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Aphasic => "aphasic",
            Source::NeurotypicalControl => "neurotypical_control",
            Source::Sbcsae => "sbcsae",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aphasic" => Ok(Source::Aphasic),
            "control" | "neurotypical_control" => Ok(Source::NeurotypicalControl),
            "sbcsae" => Ok(Source::Sbcsae),
            other => Err(Error::InvalidInput(format!("unknown source {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub id: String,
    pub source: Source,
    pub text: String,
}

const PAUSES: [&str; 4] = ["(.)", "(..)", "(...)", "+..."];
const UNINTELLIGIBLE: [&str; 3] = ["xxx", "yyy", "www"];
const SPECIAL_TOKENS: [&str; 6] = ["‡", "+/.", "@o", "=@", "+\"/.", "+\"\""];

fn is_timestamp(tok: &str) -> bool {
    let tok = tok.trim_matches('\u{15}');
    match tok.split_once('_') {
        Some((a, b)) => {
            !a.is_empty()
                && !b.is_empty()
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.bytes().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

fn is_pause(tok: &str) -> bool {
    if PAUSES.contains(&tok) {
        return true;
    }
    // timed pauses such as (1.5) or (2:03.1)
    tok.len() > 2
        && tok.starts_with('(')
        && tok.ends_with(')')
        && tok[1..tok.len() - 1]
            .chars()
            .all(|c| c.is_ascii_digit() || c == '.' || c == ':')
}

fn is_x_run(tok: &str) -> bool {
    tok.chars().count() >= 2 && tok.chars().all(|c| c == 'x' || c == 'X')
}

fn is_special(c: char) -> bool {
    !c.is_alphanumeric() && c != '\''
}

fn is_special_token(tok: &str) -> bool {
    if SPECIAL_TOKENS.contains(&tok) {
        return true;
    }
    if tok != "," && tok != "." && !tok.chars().any(char::is_alphanumeric) {
        return true;
    }
    let mut chars = tok.chars();
    let first = chars.next().unwrap_or(' ');
    let second = chars.next();
    if matches!(first, '*' | '?' | '!') {
        return true;
    }
    if is_special(first) && first != '(' {
        // special character followed by digits, or two specials followed by text
        if second.is_some_and(|c| c.is_ascii_digit()) {
            return true;
        }
        if second.is_some_and(is_special) {
            return true;
        }
    }
    false
}

/// Removes `[...]` and `<...>` spans (brackets included). An unmatched
/// opening bracket is dropped on its own.
fn strip_brackets(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let close = match c {
            '[' => Some(']'),
            '<' => Some('>'),
            ']' | '>' => {
                out.push(' ');
                i += 1;
                continue;
            }
            _ => None,
        };
        match close {
            Some(close) => {
                let mut depth = 0usize;
                let mut end = None;
                for (j, &d) in chars.iter().enumerate().skip(i) {
                    if d == c {
                        depth += 1;
                    } else if d == close {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(j);
                            break;
                        }
                    }
                }
                out.push(' ');
                i = end.map_or(i + 1, |j| j + 1);
            }
            None => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Word(String),
    Comma,
    Stop,
}

/// Strips CHAT word-internal markup and splits trailing commas/stops.
fn clean_token(tok: &str, out: &mut Vec<Piece>) {
    if tok == "," {
        out.push(Piece::Comma);
        return;
    }
    if tok == "." {
        out.push(Piece::Stop);
        return;
    }
    let body = tok.split('@').next().unwrap_or("");
    let core = body.trim_end_matches([',', '.']);
    let tail = &body[core.len()..];
    // compounds (ice_cream, choo+choo) and hyphenations become separate words
    for part in core.split(['_', '-', '+', '/']) {
        let word: String = part
            .chars()
            .map(|c| if c == '\u{2019}' || c == '\u{2018}' { '\'' } else { c })
            .filter(|c| c.is_alphanumeric() || *c == '\'')
            .collect();
        if !word.is_empty() {
            out.push(Piece::Word(word));
        }
    }
    match tail.chars().last() {
        Some(',') => out.push(Piece::Comma),
        Some('.') => out.push(Piece::Stop),
        _ => {}
    }
}

fn collapse_repeats(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if let (Piece::Word(w), Some(Piece::Word(prev))) = (&p, out.last()) {
            if w.to_lowercase() == prev.to_lowercase() {
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Normalizes a raw tier line. Returns an empty string when nothing
/// alphabetic survives.
pub fn normalize_utterance(line: &str) -> String {
    let line: String = line
        .chars()
        .filter(|&c| c != '\u{FFFD}')
        .map(|c| if c.is_control() { ' ' } else { c })
        .collect();

    let early: Vec<&str> = line
        .split_whitespace()
        .filter(|t| !is_timestamp(t))
        .filter(|t| !is_pause(t))
        .filter(|t| !t.starts_with("&-"))
        .filter(|t| !t.starts_with("&="))
        .collect();
    let unbracketed = strip_brackets(&early.join(" "));

    let mut pieces = Vec::new();
    for tok in unbracketed.split_whitespace() {
        if tok.starts_with('&')
            || UNINTELLIGIBLE.contains(&tok.to_lowercase().as_str())
            || is_x_run(tok)
            || is_special_token(tok)
            || is_timestamp(tok)
            || is_pause(tok)
        {
            continue;
        }
        clean_token(tok, &mut pieces);
    }
    // sentence-internal stops are dropped; one terminal stop is added at the end
    pieces.retain(|p| *p != Piece::Stop);
    let pieces = collapse_repeats(pieces);

    let mut expanded = Vec::with_capacity(pieces.len());
    for p in pieces {
        match p {
            Piece::Word(w) => match expand_word(&w) {
                Some(exp) => expanded.extend(exp.split(' ').map(|s| Piece::Word(s.to_string()))),
                None => expanded.push(Piece::Word(w)),
            },
            other => expanded.push(other),
        }
    }
    let pieces = collapse_repeats(expanded);

    let mut words: Vec<String> = Vec::new();
    let mut pending_comma = false;
    for p in pieces {
        match p {
            Piece::Word(w) => {
                let w = w.trim_matches('\'');
                if w.is_empty() {
                    continue;
                }
                if pending_comma {
                    if let Some(last) = words.last_mut() {
                        last.push(',');
                    }
                }
                pending_comma = false;
                words.push(w.to_lowercase());
            }
            Piece::Comma => pending_comma = !words.is_empty(),
            Piece::Stop => {}
        }
    }
    if !words.iter().any(|w| w.chars().any(char::is_alphabetic)) {
        return String::new();
    }
    let sentence = words.join(" ");
    let mut out = crate::textmorph::capitalize_first(&sentence);
    out.push('.');
    out
}

/// Like [`normalize_utterance`] but accepts arbitrary bytes; invalid UTF-8
/// sequences are removed.
pub fn normalize_bytes(line: &[u8]) -> String {
    normalize_utterance(&String::from_utf8_lossy(line))
}

#[derive(Debug, Clone, Default)]
pub struct ExtractOptions {
    /// Speaker codes to keep (e.g. `PAR`). `None` keeps every speaker tier.
    pub speakers: Option<Vec<String>>,
}

fn speaker_tier(line: &str) -> Option<(&str, &str)> {
    let rest = line.strip_prefix('*')?;
    let (code, content) = rest.split_once(':')?;
    if code.is_empty() || code.len() > 8 || !code.chars().all(|c| c.is_alphanumeric() || c == '_')
    {
        return None;
    }
    Some((code, content))
}

/// Reads a transcript and returns one utterance per tier whose normalization
/// is non-empty.
///
/// `*SPK:` lines are speaker tiers, `%` and `@` lines are skipped, indented
/// lines continue the preceding tier, and any other line is taken as a bare
/// utterance. Ids are `<file_name>:<line>` of the tier's first line.
pub fn extract_utterances<R: BufRead>(
    mut reader: R,
    source: Source,
    file_name: &str,
    opts: &ExtractOptions,
) -> Result<Vec<Utterance>> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    let mut buf = Vec::new();
    let mut line_no = 0;

    let flush = |pending: &mut Option<(usize, String)>, out: &mut Vec<Utterance>| {
        if let Some((start, text)) = pending.take() {
            let text = normalize_utterance(&text);
            if !text.is_empty() {
                out.push(Utterance {
                    id: format!("{file_name}:{start}"),
                    source,
                    text,
                });
            }
        }
    };

    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf).map_err(|source| Error::Read {
            line: line_no + 1,
            source,
        })?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let line = String::from_utf8_lossy(&buf);
        let line = line.trim_end_matches(['\n', '\r']);

        if line.starts_with([' ', '\t']) {
            if let Some((_, text)) = pending.as_mut() {
                text.push(' ');
                text.push_str(line);
                continue;
            }
        }
        flush(&mut pending, &mut out);
        if line.trim().is_empty() || line.starts_with('%') || line.starts_with('@') {
            continue;
        }
        if let Some((code, content)) = speaker_tier(line) {
            let wanted = opts
                .speakers
                .as_ref()
                .is_none_or(|s| s.iter().any(|w| w == code));
            if wanted {
                pending = Some((line_no, content.to_string()));
            }
            continue;
        }
        pending = Some((line_no, line.to_string()));
    }
    flush(&mut pending, &mut out);
    Ok(out)
}

pub fn write_jsonl<W: Write>(mut w: W, utterances: &[Utterance]) -> Result<()> {
    for u in utterances {
        serde_json::to_writer(&mut w, u)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
