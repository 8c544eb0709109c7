//! Deterministic generator of short, conversational English sentences with
//! gold Universal Dependencies annotation. Stands in for a parsed spoken
//! corpus in the integration tests.

#![allow(dead_code)]

use std::fmt::Write as _;

use aphasim::ud_parse::{parse_conllu, ParseMode, ParsedSentence};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Tok {
    form: String,
    lemma: String,
    upos: &'static str,
    feats: String,
    head: usize,
    deprel: &'static str,
}

#[derive(Default)]
struct Sent {
    toks: Vec<Tok>,
}

impl Sent {
    fn push(&mut self, form: &str, lemma: &str, upos: &'static str, feats: &str, deprel: &'static str) -> usize {
        self.toks.push(Tok {
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos,
            feats: feats.to_string(),
            head: 0,
            deprel,
        });
        self.toks.len()
    }

    fn attach(&mut self, dep: usize, head: usize) {
        self.toks[dep - 1].head = head;
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (k, t) in self.toks.iter().enumerate() {
            let glue = t.form == "n't" || t.form.starts_with('\'') || t.upos == "PUNCT";
            if k > 0 && !glue {
                out.push(' ');
            }
            out.push_str(&t.form);
        }
        out
    }

    fn write(&mut self, id: &str, out: &mut String) {
        if let Some(first) = self.toks.first_mut() {
            let mut cs = first.form.chars();
            if let Some(c) = cs.next() {
                first.form = c.to_uppercase().chain(cs).collect();
            }
        }
        let _ = writeln!(out, "# sent_id = {id}");
        let _ = writeln!(out, "# text = {}", self.text());
        for (k, t) in self.toks.iter().enumerate() {
            let feats = if t.feats.is_empty() { "_" } else { &t.feats };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t_",
                k + 1,
                t.form,
                t.lemma,
                t.upos,
                feats,
                t.head,
                t.deprel
            );
        }
        out.push('\n');
    }
}

const NOUNS: &[(&str, &str)] = &[
    ("dog", "dogs"), ("car", "cars"), ("house", "houses"), ("friend", "friends"),
    ("kid", "kids"), ("child", "children"), ("book", "books"), ("job", "jobs"),
    ("party", "parties"), ("box", "boxes"), ("knife", "knives"), ("man", "men"),
    ("woman", "women"), ("person", "people"), ("class", "classes"), ("city", "cities"),
    ("game", "games"), ("week", "weeks"), ("day", "days"), ("school", "schools"),
    ("teacher", "teachers"), ("movie", "movies"), ("store", "stores"), ("story", "stories"),
    ("phone", "phones"), ("key", "keys"), ("room", "rooms"), ("door", "doors"),
    ("table", "tables"), ("cat", "cats"), ("bus", "buses"), ("dish", "dishes"),
    ("church", "churches"), ("foot", "feet"), ("mouse", "mice"), ("leaf", "leaves"),
    ("shelf", "shelves"), ("baby", "babies"), ("brother", "brothers"), ("sister", "sisters"),
    ("doctor", "doctors"), ("truck", "trucks"), ("apple", "apples"), ("cookie", "cookies"),
    ("bag", "bags"), ("chair", "chairs"), ("tree", "trees"), ("garden", "gardens"),
    ("window", "windows"), ("picture", "pictures"), ("letter", "letters"), ("bike", "bikes"),
    ("horse", "horses"), ("computer", "computers"), ("dinner", "dinners"), ("idea", "ideas"),
    ("problem", "problems"), ("question", "questions"), ("tooth", "teeth"), ("wife", "wives"),
    ("kitchen", "kitchens"), ("office", "offices"), ("boss", "bosses"), ("coat", "coats"),
];

const NAMES: &[&str] = &["John", "Mary", "Sarah", "Mike", "Texas", "Chicago", "Linda", "Dave"];

const ADJS: &[&str] = &[
    "big", "little", "old", "new", "nice", "good", "bad", "whole", "last", "next", "small",
    "great", "funny", "red", "other",
];

const ADVS: &[&str] = &[
    "just", "really", "actually", "still", "always", "never", "probably", "already", "then",
    "there", "here", "back", "too", "again",
];

// lemma, third singular, past, past participle, gerund
type Verb = (&'static str, &'static str, &'static str, &'static str, &'static str);

const TRANSITIVE: &[Verb] = &[
    ("see", "sees", "saw", "seen", "seeing"),
    ("get", "gets", "got", "gotten", "getting"),
    ("take", "takes", "took", "taken", "taking"),
    ("make", "makes", "made", "made", "making"),
    ("buy", "buys", "bought", "bought", "buying"),
    ("find", "finds", "found", "found", "finding"),
    ("tell", "tells", "told", "told", "telling"),
    ("bring", "brings", "brought", "brought", "bringing"),
    ("call", "calls", "called", "called", "calling"),
    ("like", "likes", "liked", "liked", "liking"),
    ("love", "loves", "loved", "loved", "loving"),
    ("watch", "watches", "watched", "watched", "watching"),
    ("fix", "fixes", "fixed", "fixed", "fixing"),
    ("clean", "cleans", "cleaned", "cleaned", "cleaning"),
    ("drive", "drives", "drove", "driven", "driving"),
    ("eat", "eats", "ate", "eaten", "eating"),
    ("read", "reads", "read", "read", "reading"),
    ("write", "writes", "wrote", "written", "writing"),
    ("sell", "sells", "sold", "sold", "selling"),
    ("pick", "picks", "picked", "picked", "picking"),
    ("carry", "carries", "carried", "carried", "carrying"),
    ("leave", "leaves", "left", "left", "leaving"),
    ("open", "opens", "opened", "opened", "opening"),
    ("visit", "visits", "visited", "visited", "visiting"),
    ("cook", "cooks", "cooked", "cooked", "cooking"),
    ("build", "builds", "built", "built", "building"),
];

const INTRANSITIVE: &[Verb] = &[
    ("go", "goes", "went", "gone", "going"),
    ("come", "comes", "came", "come", "coming"),
    ("walk", "walks", "walked", "walked", "walking"),
    ("work", "works", "worked", "worked", "working"),
    ("live", "lives", "lived", "lived", "living"),
    ("sleep", "sleeps", "slept", "slept", "sleeping"),
    ("run", "runs", "ran", "run", "running"),
    ("talk", "talks", "talked", "talked", "talking"),
    ("wait", "waits", "waited", "waited", "waiting"),
    ("stay", "stays", "stayed", "stayed", "staying"),
    ("move", "moves", "moved", "moved", "moving"),
];

const CATENATIVE: &[(&str, &str)] = &[("want", "wanted"), ("try", "tried"), ("need", "needed"), ("decide", "decided")];

const PREPS: &[&str] = &["in", "at", "on", "with", "to", "from", "for", "after", "about"];
const MODALS: &[&str] = &["can", "will", "would", "should", "could"];
const POSS: &[&str] = &["my", "your", "his", "her", "its", "our", "their"];

#[derive(Clone, Copy)]
struct Subject {
    head: usize,
    third_sing: bool,
    plural: bool,
}

fn noun_phrase(s: &mut Sent, rng: &mut ChaCha8Rng, deprel: &'static str) -> usize {
    let plural = rng.random_bool(0.3);
    let (sing, plur) = *NOUNS.choose(rng).unwrap();
    let (form, number) = if plural { (plur, "Plur") } else { (sing, "Sing") };
    let mut deps = Vec::new();
    match rng.random_range(0..10) {
        0..=3 => {
            let det = if plural {
                *["the", "some", "the", "these", "those"].choose(rng).unwrap()
            } else {
                *["the", "a", "the", "this", "that", "every"].choose(rng).unwrap()
            };
            let feats = match det {
                "the" => "Definite=Def|PronType=Art",
                "a" => "Definite=Ind|PronType=Art",
                "this" | "that" => "Number=Sing|PronType=Dem",
                "these" | "those" => "Number=Plur|PronType=Dem",
                _ => "PronType=Ind",
            };
            deps.push(s.push(det, det, "DET", feats, "det"));
        }
        4..=7 => {
            let p = *POSS.choose(rng).unwrap();
            deps.push(s.push(p, p, "PRON", "Poss=Yes|PronType=Prs", "nmod:poss"));
        }
        _ => {}
    }
    if rng.random_bool(0.3) {
        let a = *ADJS.choose(rng).unwrap();
        deps.push(s.push(a, a, "ADJ", "Degree=Pos", "amod"));
    }
    // a/an agreement with whatever follows the article
    if let Some(&first) = deps.first() {
        if s.toks[first - 1].form == "a" {
            let next = if deps.len() > 1 { s.toks[deps[1] - 1].form.clone() } else { form.to_string() };
            if next.starts_with(['a', 'e', 'i', 'o', 'u']) {
                s.toks[first - 1].form = "an".into();
            }
        }
    }
    let head = s.push(form, sing, "NOUN", &format!("Number={number}"), deprel);
    for d in deps {
        s.attach(d, head);
    }
    head
}

fn subject(s: &mut Sent, rng: &mut ChaCha8Rng) -> Subject {
    match rng.random_range(0..10) {
        0..=5 => {
            let (form, feats, third_sing, plural) = *[
                ("I", "Case=Nom|Number=Sing|Person=1|PronType=Prs", false, false),
                ("you", "Case=Nom|Person=2|PronType=Prs", false, true),
                ("we", "Case=Nom|Number=Plur|Person=1|PronType=Prs", false, true),
                ("they", "Case=Nom|Number=Plur|Person=3|PronType=Prs", false, true),
                ("he", "Case=Nom|Gender=Masc|Number=Sing|Person=3|PronType=Prs", true, false),
                ("she", "Case=Nom|Gender=Fem|Number=Sing|Person=3|PronType=Prs", true, false),
            ]
            .choose(rng)
            .unwrap();
            let head = s.push(form, form, "PRON", feats, "nsubj");
            Subject { head, third_sing, plural }
        }
        6 => {
            let name = *NAMES.choose(rng).unwrap();
            let head = s.push(name, name, "PROPN", "Number=Sing", "nsubj");
            Subject { head, third_sing: true, plural: false }
        }
        _ => {
            let head = noun_phrase(s, rng, "nsubj");
            let plural = s.toks[head - 1].feats.contains("Plur");
            Subject { head, third_sing: !plural, plural }
        }
    }
}

fn object(s: &mut Sent, rng: &mut ChaCha8Rng) -> usize {
    if rng.random_bool(0.25) {
        let (form, feats) = *[
            ("me", "Case=Acc|Number=Sing|Person=1|PronType=Prs"),
            ("him", "Case=Acc|Gender=Masc|Number=Sing|Person=3|PronType=Prs"),
            ("her", "Case=Acc|Gender=Fem|Number=Sing|Person=3|PronType=Prs"),
            ("them", "Case=Acc|Number=Plur|Person=3|PronType=Prs"),
            ("it", "Case=Acc|Number=Sing|Person=3|PronType=Prs"),
            ("that", "Number=Sing|PronType=Dem"),
            ("this", "Number=Sing|PronType=Dem"),
        ]
        .choose(rng)
        .unwrap();
        let lemma = match form {
            "me" => "I",
            "him" => "he",
            "her" => "she",
            "them" => "they",
            f => f,
        };
        s.push(form, lemma, "PRON", feats, "obj")
    } else {
        noun_phrase(s, rng, "obj")
    }
}

fn prep_phrase(s: &mut Sent, rng: &mut ChaCha8Rng, verb: usize) {
    let p = *PREPS.choose(rng).unwrap();
    let case = s.push(p, p, "ADP", "", "case");
    let head = if rng.random_bool(0.15) {
        let name = *NAMES.choose(rng).unwrap();
        s.push(name, name, "PROPN", "Number=Sing", "obl")
    } else {
        noun_phrase(s, rng, "obl")
    };
    s.attach(case, head);
    s.attach(head, verb);
}

fn maybe_adverb(s: &mut Sent, rng: &mut ChaCha8Rng, p: f64) -> Option<usize> {
    rng.random_bool(p).then(|| {
        let a = *ADVS.choose(rng).unwrap();
        s.push(a, a, "ADV", "", "advmod")
    })
}

const PAST: &str = "Mood=Ind|Tense=Past|VerbForm=Fin";
const PRES3: &str = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin";
const PRES: &str = "Mood=Ind|Tense=Pres|VerbForm=Fin";
const INF: &str = "VerbForm=Inf";
const GER: &str = "Tense=Pres|VerbForm=Part";
const PART: &str = "Tense=Past|VerbForm=Part";

/// Builds one clause and returns the index of its head verb. The head verb
/// carries `deprel`; its own head is left for the caller.
fn clause(s: &mut Sent, rng: &mut ChaCha8Rng, deprel: &'static str) -> usize {
    let subj = subject(s, rng);
    let adv = maybe_adverb(s, rng, 0.2);
    let mut aux = Vec::new();
    let verb;
    match rng.random_range(0..8) {
        0 | 1 => {
            let v = TRANSITIVE.choose(rng).unwrap();
            verb = s.push(v.2, v.0, "VERB", PAST, deprel);
            let o = object(s, rng);
            s.attach(o, verb);
        }
        2 => {
            let form = if subj.plural { "were" } else { "was" };
            aux.push(s.push(form, "be", "AUX", PAST, "aux"));
            let v = if rng.random_bool(0.5) { TRANSITIVE } else { INTRANSITIVE }.choose(rng).unwrap();
            verb = s.push(v.4, v.0, "VERB", GER, deprel);
            if TRANSITIVE.iter().any(|t| t.0 == v.0) {
                let o = object(s, rng);
                s.attach(o, verb);
            }
        }
        3 => {
            let past = rng.random_bool(0.5);
            let form = match (past, subj.third_sing) {
                (true, _) => "did",
                (false, true) => "does",
                (false, false) => "do",
            };
            aux.push(s.push(form, "do", "AUX", if past { PAST } else { PRES }, "aux"));
            let neg = if rng.random_bool(0.5) { "n't" } else { "not" };
            aux.push(s.push(neg, "not", "PART", "Polarity=Neg", "advmod"));
            let v = TRANSITIVE.choose(rng).unwrap();
            verb = s.push(v.0, v.0, "VERB", INF, deprel);
            let o = object(s, rng);
            s.attach(o, verb);
        }
        4 => {
            let form = if subj.third_sing { "has" } else { "have" };
            aux.push(s.push(form, "have", "AUX", PRES, "aux"));
            let v = TRANSITIVE.choose(rng).unwrap();
            verb = s.push(v.3, v.0, "VERB", PART, deprel);
            let o = object(s, rng);
            s.attach(o, verb);
        }
        5 => {
            let m = *MODALS.choose(rng).unwrap();
            aux.push(s.push(m, m, "AUX", "VerbForm=Fin", "aux"));
            let v = TRANSITIVE.choose(rng).unwrap();
            verb = s.push(v.0, v.0, "VERB", INF, deprel);
            let o = object(s, rng);
            s.attach(o, verb);
        }
        6 => {
            let (lemma, past) = *CATENATIVE.choose(rng).unwrap();
            verb = s.push(past, lemma, "VERB", PAST, deprel);
            let to = s.push("to", "to", "PART", "", "mark");
            let v = TRANSITIVE.choose(rng).unwrap();
            let x = s.push(v.0, v.0, "VERB", INF, "xcomp");
            s.attach(to, x);
            s.attach(x, verb);
            let o = object(s, rng);
            s.attach(o, x);
        }
        _ => {
            let v = INTRANSITIVE.choose(rng).unwrap();
            let (form, feats) = match rng.random_range(0..3) {
                0 if subj.third_sing => (v.1, PRES3),
                0 => (v.0, PRES),
                _ => (v.2, PAST),
            };
            verb = s.push(form, v.0, "VERB", feats, deprel);
        }
    }
    s.attach(subj.head, verb);
    for a in aux {
        s.attach(a, verb);
    }
    if let Some(a) = adv {
        s.attach(a, verb);
    }
    if rng.random_bool(0.45) {
        prep_phrase(s, rng, verb);
    }
    if let Some(a) = maybe_adverb(s, rng, 0.15) {
        s.attach(a, verb);
    }
    verb
}

fn sentence(rng: &mut ChaCha8Rng) -> Sent {
    let mut s = Sent::default();
    let mut lead = Vec::new();
    let roll = rng.random_range(0..100);
    if roll < 20 {
        let w = *["well", "yeah", "oh", "so", "okay"].choose(rng).unwrap();
        lead.push(s.push(w, w, "INTJ", "", "discourse"));
        lead.push(s.push(",", ",", "PUNCT", "", "punct"));
    } else if roll < 32 {
        let w = *["and", "but", "so"].choose(rng).unwrap();
        lead.push(s.push(w, w, "CCONJ", "", "cc"));
    }

    let root;
    if rng.random_bool(0.06) {
        // copular clause: no verb phrase under the counting rule
        let d = *["that", "this", "it"].choose(rng).unwrap();
        let subj = s.push(d, d, "PRON", "Number=Sing|PronType=Dem", "nsubj");
        let cop = s.push("was", "be", "AUX", PAST, "cop");
        let adv = maybe_adverb(&mut s, rng, 0.5);
        let a = *ADJS.choose(rng).unwrap();
        root = s.push(a, a, "ADJ", "Degree=Pos", "root");
        s.attach(subj, root);
        s.attach(cop, root);
        if let Some(adv) = adv {
            s.attach(adv, root);
        }
    } else {
        root = clause(&mut s, rng, "root");
        if rng.random_bool(0.15) {
            let cc = s.push("and", "and", "CCONJ", "", "cc");
            let conj = clause(&mut s, rng, "conj");
            s.attach(cc, conj);
            s.attach(conj, root);
        }
    }
    for l in lead {
        s.attach(l, root);
    }
    let end = if rng.random_bool(0.05) { "?" } else { "." };
    let p = s.push(end, end, "PUNCT", "", "punct");
    s.attach(p, root);
    s
}

/// `n` sentences of CoNLL-U, identical for identical `(n, seed)`.
pub fn spoken_conllu(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for k in 0..n {
        let mut s = sentence(&mut rng);
        s.write(&format!("gen-{seed}-{k}"), &mut out);
    }
    out
}

pub fn spoken_corpus(n: usize, seed: u64) -> Vec<ParsedSentence> {
    parse_conllu(spoken_conllu(n, seed).as_bytes(), ParseMode::Strict)
        .expect("generated corpus is well formed")
        .sentences
}

/// Lowercased regular nouns from the fixture list.
pub fn regular_nouns() -> Vec<String> {
    include_str!("../fixtures/regular_nouns.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
