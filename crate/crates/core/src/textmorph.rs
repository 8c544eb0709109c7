//! English noun number inflection and same-type pronoun substitution.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// Grammatical number as carried by the `Number` morphological feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammaticalNumber {
    Sing,
    Plur,
    Unknown,
}

impl GrammaticalNumber {
    pub fn from_feature(value: Option<&str>) -> Self {
        match value {
            Some("Sing") => GrammaticalNumber::Sing,
            Some("Plur") => GrammaticalNumber::Plur,
            _ => GrammaticalNumber::Unknown,
        }
    }
}

// Irregular plurals, invariant nouns, and nouns whose plural the suffix rules
// cannot invert unambiguously.
const DEFAULT_PAIRS: &[(&str, &str)] = &[
    ("man", "men"),
    ("woman", "women"),
    ("child", "children"),
    ("person", "people"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("goose", "geese"),
    ("mouse", "mice"),
    ("louse", "lice"),
    ("ox", "oxen"),
    ("die", "dice"),
    ("knife", "knives"),
    ("wife", "wives"),
    ("life", "lives"),
    ("scarf", "scarves"),
    ("dwarf", "dwarves"),
    ("potato", "potatoes"),
    ("tomato", "tomatoes"),
    ("hero", "heroes"),
    ("echo", "echoes"),
    ("veto", "vetoes"),
    ("cactus", "cacti"),
    ("fungus", "fungi"),
    ("nucleus", "nuclei"),
    ("radius", "radii"),
    ("stimulus", "stimuli"),
    ("syllabus", "syllabi"),
    ("analysis", "analyses"),
    ("crisis", "crises"),
    ("thesis", "theses"),
    ("diagnosis", "diagnoses"),
    ("hypothesis", "hypotheses"),
    ("phenomenon", "phenomena"),
    ("criterion", "criteria"),
    ("datum", "data"),
    ("medium", "media"),
    ("curriculum", "curricula"),
    ("index", "indices"),
    ("appendix", "appendices"),
    ("matrix", "matrices"),
    ("quiz", "quizzes"),
    ("sheep", "sheep"),
    ("fish", "fish"),
    ("deer", "deer"),
    ("moose", "moose"),
    ("series", "series"),
    ("species", "species"),
    ("aircraft", "aircraft"),
    ("offspring", "offspring"),
    ("chief", "chiefs"),
    ("belief", "beliefs"),
    ("brief", "briefs"),
    ("safe", "safes"),
    ("cafe", "cafes"),
    ("valve", "valves"),
    ("movie", "movies"),
    ("cookie", "cookies"),
    ("pie", "pies"),
    ("tie", "ties"),
    ("lie", "lies"),
    ("zombie", "zombies"),
    ("rookie", "rookies"),
    ("calorie", "calories"),
    ("prairie", "prairies"),
    ("brownie", "brownies"),
    ("stomach", "stomachs"),
    ("monarch", "monarchs"),
    ("epoch", "epochs"),
    ("ache", "aches"),
    ("headache", "headaches"),
    ("niche", "niches"),
    ("cache", "caches"),
    ("avalanche", "avalanches"),
    ("moustache", "moustaches"),
    ("cliche", "cliches"),
    ("gas", "gases"),
    ("lens", "lenses"),
    ("atlas", "atlases"),
    ("canvas", "canvases"),
    ("iris", "irises"),
    ("bias", "biases"),
    ("abuse", "abuses"),
    ("excuse", "excuses"),
    ("fuse", "fuses"),
    ("use", "uses"),
    ("muse", "muses"),
    ("ruse", "ruses"),
];

/// Singular/plural pairs consulted before the suffix rules.
///
/// Lookup is case-insensitive; a self-paired entry marks an invariant noun.
#[derive(Debug, Clone)]
pub struct IrregularLexicon {
    to_plural: HashMap<String, String>,
    to_singular: HashMap<String, String>,
}

impl Default for IrregularLexicon {
    fn default() -> Self {
        let mut lex = IrregularLexicon::empty();
        for (sing, plur) in DEFAULT_PAIRS {
            lex.insert(sing, plur)
                .expect("built-in lexicon is consistent");
        }
        lex
    }
}

impl IrregularLexicon {
    pub fn empty() -> Self {
        IrregularLexicon {
            to_plural: HashMap::new(),
            to_singular: HashMap::new(),
        }
    }

    /// Adds a pair. A word already used on the other side of a different
    /// pair is rejected.
    pub fn insert(&mut self, singular: &str, plural: &str) -> Result<()> {
        let sing = singular.trim().to_lowercase();
        let plur = plural.trim().to_lowercase();
        if sing.is_empty() || plur.is_empty() {
            return Err(Error::InvalidInput("empty lexicon entry".into()));
        }
        let invariant = sing == plur;
        let sing_is_plural = self
            .to_singular
            .get(&sing)
            .is_some_and(|s| !(invariant && *s == sing));
        let plur_is_singular = self
            .to_plural
            .get(&plur)
            .is_some_and(|p| !(invariant && *p == plur));
        if sing_is_plural || plur_is_singular {
            return Err(Error::InvalidInput(format!(
                "lexicon entry {sing}/{plur} conflicts with an existing pair"
            )));
        }
        if let Some(old) = self.to_plural.insert(sing.clone(), plur.clone()) {
            self.to_singular.remove(&old);
        }
        self.to_singular.insert(plur, sing);
        Ok(())
    }

    /// Extends the lexicon from a two-column (singular, plural) TSV. Blank
    /// lines and lines starting with `#` are ignored.
    pub fn extend_from_tsv<R: BufRead>(&mut self, reader: R) -> Result<usize> {
        let mut added = 0;
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| Error::Read {
                line: idx + 1,
                source,
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut cols = trimmed.split('\t');
            match (cols.next(), cols.next(), cols.next()) {
                (Some(s), Some(p), None) => {
                    self.insert(s, p).map_err(|e| Error::Data {
                        line: idx + 1,
                        message: e.to_string(),
                    })?;
                    added += 1;
                }
                _ => {
                    return Err(Error::Data {
                        line: idx + 1,
                        message: "expected two tab-separated columns".into(),
                    })
                }
            }
        }
        Ok(added)
    }

    pub fn load_tsv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Open {
            path: path.to_path_buf(),
            source,
        })?;
        let mut lex = IrregularLexicon::default();
        lex.extend_from_tsv(std::io::BufReader::new(file))?;
        Ok(lex)
    }

    pub fn plural_of(&self, singular: &str) -> Option<&str> {
        self.to_plural.get(singular).map(String::as_str)
    }

    pub fn singular_of(&self, plural: &str) -> Option<&str> {
        self.to_singular.get(plural).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.to_plural.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_plural.is_empty()
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn penultimate(word: &str) -> Option<char> {
    word.chars().rev().nth(1)
}

fn pluralize_regular(word: &str) -> String {
    if word.ends_with('s')
        || word.ends_with("sh")
        || word.ends_with("ch")
        || word.ends_with('x')
        || word.ends_with('z')
    {
        return format!("{word}es");
    }
    if word.ends_with('y') && penultimate(word).is_some_and(|c| !is_vowel(c)) {
        return format!("{}ies", &word[..word.len() - 1]);
    }
    if word.ends_with("fe") && !word.ends_with("ffe") {
        return format!("{}ves", &word[..word.len() - 2]);
    }
    if word.ends_with("lf") || word.ends_with("eaf") || word.ends_with("oaf") || word.ends_with("ief")
    {
        return format!("{}ves", &word[..word.len() - 1]);
    }
    format!("{word}s")
}

fn singularize_regular(word: &str) -> String {
    let strip = |n: usize| word[..word.len() - n].to_string();
    if let Some(stem) = word.strip_suffix("ves") {
        if stem.ends_with('l') || stem.ends_with("ea") || stem.ends_with("oa") || stem.ends_with("ie")
        {
            return format!("{stem}f");
        }
        return format!("{stem}ve");
    }
    if let Some(stem) = word.strip_suffix("ies") {
        if stem.chars().last().is_some_and(|c| !is_vowel(c)) && stem.len() >= 2 {
            return format!("{stem}y");
        }
    }
    if word.ends_with("sses")
        || word.ends_with("shes")
        || word.ends_with("ches")
        || word.ends_with("xes")
        || word.ends_with("zzes")
        || word.ends_with("tzes")
    {
        return strip(2);
    }
    if word.ends_with("uses") && !word.ends_with("ouses") && !word.ends_with("auses") {
        return strip(2);
    }
    if word.ends_with('s') && !word.ends_with("ss") && word.chars().count() > 1 {
        return strip(1);
    }
    word.to_string()
}

/// Re-applies the capitalization pattern of `source` to `word`.
pub(crate) fn match_case(source: &str, word: &str) -> String {
    let letters: Vec<char> = source.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return word.to_uppercase();
    }
    match source.chars().next() {
        Some(first) if first.is_uppercase() => capitalize_first(word),
        _ => word.to_string(),
    }
}

pub(crate) fn match_case_first(source: &str, word: &str) -> String {
    match source.chars().next() {
        Some(first) if first.is_uppercase() => capitalize_first(word),
        _ => word.to_string(),
    }
}

pub(crate) fn capitalize_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Flips the grammatical number of a noun. `number` is the number the form
/// currently has.
pub fn toggle_number(form: &str, number: GrammaticalNumber, lex: &IrregularLexicon) -> String {
    if form.is_empty() || form.chars().any(char::is_whitespace) {
        return form.to_string();
    }
    let lower = form.to_lowercase();
    let toggled = match number {
        GrammaticalNumber::Unknown => return form.to_string(),
        GrammaticalNumber::Sing => match lex.plural_of(&lower) {
            Some(p) => p.to_string(),
            None if lex.singular_of(&lower).is_some() => return form.to_string(),
            None => pluralize_regular(&lower),
        },
        GrammaticalNumber::Plur => match lex.singular_of(&lower) {
            Some(s) => s.to_string(),
            None if lex.plural_of(&lower).is_some() => return form.to_string(),
            None => singularize_regular(&lower),
        },
    };
    match_case(form, &toggled)
}

/// Pronoun classes eligible for same-type substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PronounClass {
    Possessive,
    Demonstrative,
}

#[derive(Debug, Clone)]
pub struct PronounSets {
    possessive: Vec<String>,
    demonstrative: Vec<String>,
}

impl Default for PronounSets {
    fn default() -> Self {
        PronounSets {
            possessive: ["my", "your", "his", "her", "its", "our", "their"]
                .map(String::from)
                .to_vec(),
            demonstrative: ["this", "that", "these", "those"].map(String::from).to_vec(),
        }
    }
}

impl PronounSets {
    pub fn new(possessive: Vec<String>, demonstrative: Vec<String>) -> Result<Self> {
        let possessive: Vec<String> = possessive.iter().map(|w| w.to_lowercase()).collect();
        let demonstrative: Vec<String> = demonstrative.iter().map(|w| w.to_lowercase()).collect();
        if possessive.len() < 2 || demonstrative.len() < 2 {
            return Err(Error::InvalidInput(
                "each pronoun set needs at least two members".into(),
            ));
        }
        if possessive.iter().any(|w| demonstrative.contains(w)) {
            return Err(Error::InvalidInput("pronoun sets must be disjoint".into()));
        }
        Ok(PronounSets {
            possessive,
            demonstrative,
        })
    }

    pub fn class_of(&self, form: &str) -> Option<PronounClass> {
        let lower = form.to_lowercase();
        if self.possessive.contains(&lower) {
            Some(PronounClass::Possessive)
        } else if self.demonstrative.contains(&lower) {
            Some(PronounClass::Demonstrative)
        } else {
            None
        }
    }

    pub fn members(&self, class: PronounClass) -> &[String] {
        match class {
            PronounClass::Possessive => &self.possessive,
            PronounClass::Demonstrative => &self.demonstrative,
        }
    }
}

/// Replaces a possessive or demonstrative with a different member of its set,
/// chosen uniformly. Returns `None` when `form` belongs to neither set.
pub fn swap_pronoun<R: Rng + ?Sized>(form: &str, sets: &PronounSets, rng: &mut R) -> Option<String> {
    let class = sets.class_of(form)?;
    let lower = form.to_lowercase();
    let candidates: Vec<&String> = sets.members(class).iter().filter(|w| **w != lower).collect();
    let pick = candidates[rng.random_range(0..candidates.len())];
    Some(match_case(form, pick))
}
