//! Built-in contraction and informal-fusion expansions.

use std::collections::HashMap;
use std::sync::OnceLock;

// Forms whose expansion is not a plain pronoun + suffix combination.
const FIXED: &[(&str, &str)] = &[
    ("ain't", "are not"),
    ("aren't", "are not"),
    ("can't", "can not"),
    ("can't've", "can not have"),
    ("couldn't", "could not"),
    ("couldn't've", "could not have"),
    ("daren't", "dare not"),
    ("didn't", "did not"),
    ("doesn't", "does not"),
    ("don't", "do not"),
    ("hadn't", "had not"),
    ("hasn't", "has not"),
    ("haven't", "have not"),
    ("isn't", "is not"),
    ("mightn't", "might not"),
    ("mustn't", "must not"),
    ("needn't", "need not"),
    ("oughtn't", "ought not"),
    ("shan't", "shall not"),
    ("shouldn't", "should not"),
    ("shouldn't've", "should not have"),
    ("wasn't", "was not"),
    ("weren't", "were not"),
    ("won't", "will not"),
    ("won't've", "will not have"),
    ("wouldn't", "would not"),
    ("wouldn't've", "would not have"),
    ("could've", "could have"),
    ("should've", "should have"),
    ("would've", "would have"),
    ("might've", "might have"),
    ("must've", "must have"),
    ("let's", "let us"),
    ("y'all", "you all"),
    ("y'all'd", "you all would"),
    ("y'all're", "you all are"),
    ("y'all've", "you all have"),
    ("ya'll", "you all"),
    ("ma'am", "madam"),
    ("o'er", "over"),
    ("'cause", "because"),
    ("'em", "them"),
    ("'til", "until"),
    ("'bout", "about"),
    ("gonna", "going to"),
    ("wanna", "want to"),
    ("gotta", "got to"),
    ("gimme", "give me"),
    ("lemme", "let me"),
    ("kinda", "kind of"),
    ("sorta", "sort of"),
    ("outta", "out of"),
    ("lotta", "lot of"),
    ("dunno", "do not know"),
    ("whatcha", "what are you"),
    ("gotcha", "got you"),
    ("betcha", "bet you"),
];

const M_HOSTS: &[&str] = &["i"];
const RE_HOSTS: &[&str] = &[
    "you", "we", "they", "what", "who", "where", "how", "there", "why", "when",
];
const VE_HOSTS: &[&str] = &[
    "i", "you", "we", "they", "who", "what", "where", "how", "there", "why",
];
const LL_HOSTS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "that", "there", "who", "what", "this", "where",
    "how",
];
const D_HOSTS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "that", "there", "who", "what", "where", "how",
    "why",
];
const S_HOSTS: &[&str] = &[
    "he", "she", "it", "that", "there", "here", "what", "who", "where", "when", "why", "how",
    "this", "everybody", "everyone", "somebody", "someone", "nobody", "something", "everything",
    "nothing",
];

fn table() -> &'static HashMap<String, String> {
    static TABLE: OnceLock<HashMap<String, String>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut map = HashMap::new();
        let suffixes: [(&[&str], &str, &str); 6] = [
            (M_HOSTS, "'m", "am"),
            (RE_HOSTS, "'re", "are"),
            (VE_HOSTS, "'ve", "have"),
            (LL_HOSTS, "'ll", "will"),
            (D_HOSTS, "'d", "would"),
            (S_HOSTS, "'s", "is"),
        ];
        for (hosts, suffix, full) in suffixes {
            for host in hosts {
                map.insert(format!("{host}{suffix}"), format!("{host} {full}"));
            }
        }
        for host in D_HOSTS {
            map.insert(format!("{host}'d've"), format!("{host} would have"));
        }
        for host in LL_HOSTS {
            map.insert(format!("{host}'ll've"), format!("{host} will have"));
        }
        for (short, long) in FIXED {
            map.insert(short.to_string(), long.to_string());
        }
        map
    })
}

/// Number of entries in the built-in table.
pub fn table_len() -> usize {
    table().len()
}

/// Expansion of a single word, or `None` when it is not a known contraction.
/// An initial capital on `word` is carried over to the expansion.
pub fn expand_word(word: &str) -> Option<String> {
    let key = word.replace(['\u{2019}', '\u{2018}'], "'").to_lowercase();
    let expansion = table().get(&key)?;
    Some(crate::textmorph::match_case_first(word, expansion))
}

/// Expands every recognized contraction in whitespace-separated text.
/// Trailing sentence punctuation on a token is kept.
pub fn expand_contractions(text: &str) -> String {
    text.split_whitespace()
        .map(|tok| {
            let core = tok.trim_end_matches([',', '.', '!', '?', ';', ':']);
            let tail = &tok[core.len()..];
            match expand_word(core) {
                Some(expanded) => format!("{expanded}{tail}"),
                None => tok.to_string(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_size() {
        assert!(table_len() >= 140, "only {} entries", table_len());
    }

    #[test]
    fn fixtures() {
        assert_eq!(expand_contractions("it's alright ."), "it is alright .");
        assert_eq!(expand_contractions("I wanna come ."), "I want to come .");
        assert_eq!(expand_contractions("the cat sat"), "the cat sat");
        assert_eq!(expand_contractions("You hafta come"), "You hafta come");
    }

    #[test]
    fn case_follows_source() {
        assert_eq!(expand_word("It's").as_deref(), Some("It is"));
        assert_eq!(expand_word("I'm").as_deref(), Some("I am"));
        assert_eq!(expand_word("i'm").as_deref(), Some("i am"));
        assert_eq!(expand_word("DON'T").as_deref(), Some("Do not"));
    }

    #[test]
    fn curly_apostrophe_and_punctuation() {
        assert_eq!(expand_contractions("don\u{2019}t, you'd."), "do not, you would.");
    }

    #[test]
    fn possessive_nouns_untouched() {
        assert_eq!(expand_contractions("John's dog"), "John's dog");
    }
}
