//! Shallow extraction of (entity, description) pairs from documents.
//!
//! Descriptions are noun phrases adjacent to a person name: a pre-modifier
//! NP directly before the name, or an apposition set off by commas. Entity
//! mentions come from a gazetteer when one is supplied, otherwise from a
//! capitalization heuristic.

use std::collections::BTreeSet;
use std::path::Path;

use crate::corpus::{Corpus, Document, Token, TokenKind};
use crate::error::{LexError, Result};

/// One observation of a description applied to an entity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EDTuple {
    pub entity: String,
    /// Lowered words, in surface order.
    pub description: Vec<String>,
    pub article_id: String,
    pub sentence_no: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternKind {
    PreModifier,
    AppositionAfter,
    AppositionBefore,
}

/// Token classes a pattern matches against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenClass {
    /// NP-internal token judged by part-of-speech tag.
    NounPhraseTagged,
    /// NP-internal token judged by the capitalization/stoplist heuristic.
    NounPhraseUntagged,
    /// A literal comma.
    Comma,
}

#[derive(Clone, Debug)]
pub struct PatternRule {
    pub name: String,
    pub kind: PatternKind,
    pub matchers: Vec<TokenClass>,
}

impl PatternRule {
    fn np_class(&self) -> TokenClass {
        *self
            .matchers
            .iter()
            .find(|c| **c != TokenClass::Comma)
            .expect("pattern has an NP class")
    }
}

/// Longest NP captured by any pattern, in tokens.
pub const MAX_NP_TOKENS: usize = 6;

/// Tags accepted inside an NP when part-of-speech tags are available.
const NP_TAGS: &[&str] = &[
    "NN", "NNS", "NNP", "NNPS", "JJ", "JJR", "JJS", "DT", "POS", "PRP$", "CD",
];

/// Words that terminate an untagged NP scan: frequent verbs, prepositions,
/// conjunctions, pronouns, and bare time expressions.
const NP_BOUNDARY: &[&str] = &[
    // verbs
    "said", "says", "saying", "met", "told", "tells", "saw", "sees", "visited", "visits",
    "arrived", "arrives", "spoke", "speaks", "discussed", "discusses", "rejected", "rejects",
    "accepted", "accepts", "announced", "announces", "reported", "reports", "added", "adds",
    "noted", "notes", "called", "calls", "asked", "asks", "urged", "urges", "warned", "warns",
    "declared", "declares", "signed", "signs", "joined", "joins", "praised", "praises",
    "quoted", "quotes", "won", "lost", "took", "gave", "made", "went", "came", "left", "held",
    "began", "ended", "became", "greeted", "greets", "resigned", "resigns", "returned",
    "insisted", "insists", "claimed", "claims", "denied", "denies", "confirmed", "confirms",
    "promised", "vowed", "pledged", "was", "were", "is", "are", "be", "been", "being", "has",
    "have", "had", "will", "would", "can", "could", "shall", "should", "may", "might", "must",
    "do", "does", "did", "not",
    // prepositions and conjunctions
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "over",
    "under", "during", "between", "against", "about", "near", "across", "through", "after",
    "before", "while", "when", "because", "although", "though", "if", "since", "until", "as",
    "than", "and", "or", "but", "nor", "so", "yet", "that", "which", "who", "whom", "whose",
    "where", "whether",
    // pronouns (possessives stay NP-internal)
    "he", "she", "it", "they", "we", "i", "you", "him", "them", "us", "me",
    // adverbs and deictics
    "there", "here", "now", "then", "also", "however", "meanwhile",
    // bare time expressions
    "yesterday", "today", "tomorrow", "monday", "tuesday", "wednesday", "thursday", "friday",
    "saturday", "sunday",
];

/// Function words trimmed from the front of a capitalized run when it
/// starts a sentence, where capitalization carries no name signal.
const SENTENCE_INITIAL_SKIP: &[&str] = &[
    "the", "a", "an", "his", "her", "its", "their", "this", "that", "these", "those", "it",
    "he", "she", "they", "we", "i", "you", "on", "in", "at", "after", "before", "when",
    "while", "but", "and", "or", "so", "yet", "for", "nor", "as", "by",
];

pub fn is_np_boundary_word(lowered: &str) -> bool {
    NP_BOUNDARY.contains(&lowered)
}

/// The shipped pattern set: pre-modifier, apposition-after, and
/// apposition-before shapes, each in a tagged and an untagged variant.
pub fn default_patterns() -> Vec<PatternRule> {
    use PatternKind::*;
    use TokenClass::*;
    let shape = |kind: PatternKind, np: TokenClass| match kind {
        PreModifier => vec![np],
        AppositionAfter => vec![Comma, np, Comma],
        AppositionBefore => vec![np, Comma],
    };
    let mut rules = Vec::new();
    for (kind, base) in [
        (PreModifier, "pre-modifier"),
        (AppositionAfter, "apposition-after"),
        (AppositionBefore, "apposition-before"),
    ] {
        for (np, suffix) in [(NounPhraseTagged, "tagged"), (NounPhraseUntagged, "untagged")] {
            rules.push(PatternRule {
                name: format!("{base}-{suffix}"),
                kind,
                matchers: shape(kind, np),
            });
        }
    }
    rules
}

/// Known entity names pinned for extraction; one name per line.
#[derive(Clone, Debug, Default)]
pub struct Gazetteer {
    names: Vec<Vec<String>>,
}

impl Gazetteer {
    pub fn new(names: impl IntoIterator<Item = impl AsRef<str>>) -> Gazetteer {
        let mut parsed: Vec<Vec<String>> = names
            .into_iter()
            .map(|n| {
                n.as_ref()
                    .split_whitespace()
                    .map(str::to_lowercase)
                    .collect()
            })
            .filter(|n: &Vec<String>| !n.is_empty())
            .collect();
        // longest first so the longest name wins at each position
        parsed.sort_by_key(|n| std::cmp::Reverse(n.len()));
        Gazetteer { names: parsed }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Gazetteer> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
        Ok(Gazetteer::new(text.lines().filter(|l| !l.trim().is_empty())))
    }

    fn match_at(&self, tokens: &[Token], pos: usize, end: usize) -> Option<usize> {
        'name: for name in &self.names {
            if pos + name.len() > end {
                continue;
            }
            for (i, word) in name.iter().enumerate() {
                let tok = &tokens[pos + i];
                let stem = tok.lowered.strip_suffix("'s").unwrap_or(&tok.lowered);
                if !tok.is_word() || (tok.lowered != *word && stem != word) {
                    continue 'name;
                }
            }
            return Some(pos + name.len());
        }
        None
    }
}

/// Extraction engine: a pattern list plus an optional gazetteer.
#[derive(Clone, Debug)]
pub struct Extractor {
    patterns: Vec<PatternRule>,
    gazetteer: Option<Gazetteer>,
}

impl Default for Extractor {
    fn default() -> Self {
        Extractor {
            patterns: default_patterns(),
            gazetteer: None,
        }
    }
}

impl Extractor {
    pub fn new(patterns: Vec<PatternRule>) -> Extractor {
        Extractor {
            patterns,
            gazetteer: None,
        }
    }

    pub fn with_gazetteer(mut self, gazetteer: Gazetteer) -> Extractor {
        self.gazetteer = Some(gazetteer);
        self
    }

    /// All tuples of a document, in document order. One description at
    /// most per (mention, pattern kind); the first matching variant of a
    /// kind wins.
    pub fn extract_pairs(&self, doc: &Document) -> Vec<EDTuple> {
        let mut out = Vec::new();
        for (sentence_no, &(s, e)) in doc.sentence_bounds.iter().enumerate() {
            for (m_start, m_end) in self.mentions(&doc.tokens, s, e) {
                let entity = canonicalize_entity(
                    &doc.tokens[m_start..m_end]
                        .iter()
                        .map(|t| t.surface.as_str())
                        .collect::<Vec<_>>()
                        .join(" "),
                );
                if entity.is_empty() {
                    continue;
                }
                let mut seen_kinds = Vec::new();
                for pattern in &self.patterns {
                    if seen_kinds.contains(&pattern.kind) {
                        continue;
                    }
                    let Some((d_start, d_end)) =
                        try_match(pattern, &doc.tokens, s, e, m_start, m_end)
                    else {
                        continue;
                    };
                    seen_kinds.push(pattern.kind);
                    let description: Vec<String> = doc.tokens[d_start..d_end]
                        .iter()
                        .filter(|t| t.is_word())
                        .map(|t| t.lowered.clone())
                        .collect();
                    if description.is_empty() {
                        continue;
                    }
                    if contains_entity_word(&description, &entity) {
                        continue;
                    }
                    out.push(EDTuple {
                        entity: entity.clone(),
                        description,
                        article_id: doc.id.clone(),
                        sentence_no,
                    });
                }
            }
        }
        out
    }

    pub fn extract_corpus(&self, corpus: &Corpus) -> Vec<EDTuple> {
        corpus
            .documents
            .iter()
            .flat_map(|d| self.extract_pairs(d))
            .collect()
    }

    /// Mention spans within one sentence, leftmost first.
    fn mentions(&self, tokens: &[Token], s: usize, e: usize) -> Vec<(usize, usize)> {
        match &self.gazetteer {
            Some(g) => {
                let mut spans = Vec::new();
                let mut pos = s;
                while pos < e {
                    if let Some(end) = g.match_at(tokens, pos, e) {
                        spans.push((pos, end));
                        pos = end;
                    } else {
                        pos += 1;
                    }
                }
                spans
            }
            None => heuristic_mentions(tokens, s, e),
        }
    }
}

/// Extraction for every document of a corpus with the default patterns.
pub fn extract_pairs(doc: &Document, patterns: &[PatternRule]) -> Vec<EDTuple> {
    Extractor::new(patterns.to_vec()).extract_pairs(doc)
}

fn np_token_ok(class: TokenClass, tok: &Token) -> Option<bool> {
    match class {
        TokenClass::NounPhraseTagged => {
            let tag = tok.pos_tag.as_deref()?;
            Some(NP_TAGS.contains(&tag))
        }
        TokenClass::NounPhraseUntagged => {
            Some(tok.kind == TokenKind::Word && !is_np_boundary_word(&tok.lowered))
        }
        TokenClass::Comma => Some(tok.surface == ","),
    }
}

fn is_comma(tok: &Token) -> bool {
    tok.surface == ","
}

fn is_sentence_final(tok: &Token) -> bool {
    matches!(tok.surface.as_str(), "." | "!" | "?")
}

/// Matches one pattern against one mention; returns the description's
/// token span.
fn try_match(
    pattern: &PatternRule,
    tokens: &[Token],
    s: usize,
    e: usize,
    m_start: usize,
    m_end: usize,
) -> Option<(usize, usize)> {
    let np = pattern.np_class();
    match pattern.kind {
        PatternKind::PreModifier => {
            let mut start = m_start;
            while start > s && m_start - start < MAX_NP_TOKENS {
                match np_token_ok(np, &tokens[start - 1]) {
                    Some(true) => start -= 1,
                    Some(false) => break,
                    None => return None, // untagged tokens, leave to the untagged variant
                }
            }
            (start < m_start).then_some((start, m_start))
        }
        PatternKind::AppositionAfter => {
            if m_end >= e || !is_comma(&tokens[m_end]) {
                return None;
            }
            let mut end = m_end + 1;
            while end < e && end - (m_end + 1) < MAX_NP_TOKENS {
                match np_token_ok(np, &tokens[end]) {
                    Some(true) => end += 1,
                    Some(false) => break,
                    None => return None,
                }
            }
            if end == m_end + 1 || end >= e {
                return None;
            }
            let closing = &tokens[end];
            (is_comma(closing) || is_sentence_final(closing)).then_some((m_end + 1, end))
        }
        PatternKind::AppositionBefore => {
            if m_start == s || !is_comma(&tokens[m_start - 1]) {
                return None;
            }
            let comma = m_start - 1;
            let mut start = comma;
            while start > s && comma - start < MAX_NP_TOKENS {
                match np_token_ok(np, &tokens[start - 1]) {
                    Some(true) => start -= 1,
                    Some(false) => break,
                    None => return None,
                }
            }
            (start < comma).then_some((start, comma))
        }
    }
}

/// Capitalized-run mention heuristic: a maximal run of two or more
/// name-like tokens. A run that opens the sentence first sheds leading
/// function words, since sentence-initial capitals carry no signal.
fn heuristic_mentions(tokens: &[Token], s: usize, e: usize) -> Vec<(usize, usize)> {
    let name_like = |tok: &Token| {
        tok.kind == TokenKind::Word
            && tok.surface.chars().next().is_some_and(char::is_uppercase)
            && !tok.surface.contains('.')
    };
    let possessive = |tok: &Token| tok.lowered.ends_with("'s") || tok.lowered.ends_with('\'');
    let mut spans = Vec::new();
    let mut i = s;
    while i < e {
        if !name_like(&tokens[i]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < e && name_like(&tokens[j]) {
            j += 1;
            if possessive(&tokens[j - 1]) {
                break; // a possessive can only close a run
            }
        }
        let mut start = i;
        if start == s {
            while start < j && SENTENCE_INITIAL_SKIP.contains(&tokens[start].lowered.as_str()) {
                start += 1;
            }
        }
        if j - start >= 2 {
            spans.push((start, j));
        }
        i = j;
    }
    spans
}

/// Strips honorifics and a trailing possessive marker, collapses internal
/// whitespace, and preserves capitalization.
pub fn canonicalize_entity(surface: &str) -> String {
    const HONORIFICS: &[&str] = &["mr.", "mr", "mrs.", "mrs", "ms.", "ms", "dr.", "dr"];
    let mut words: Vec<&str> = surface.split_whitespace().collect();
    while words.len() > 1 && HONORIFICS.contains(&words[0].to_lowercase().as_str()) {
        words.remove(0);
    }
    let mut out: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    if let Some(last) = out.last_mut() {
        if let Some(stripped) = last
            .strip_suffix("'s")
            .or_else(|| last.strip_suffix("\u{2019}s"))
            .or_else(|| last.strip_suffix('\''))
        {
            *last = stripped.to_string();
        }
    }
    out.retain(|w| !w.is_empty());
    out.join(" ")
}

fn contains_entity_word(description: &[String], entity: &str) -> bool {
    let entity_words: BTreeSet<String> =
        entity.split_whitespace().map(str::to_lowercase).collect();
    description.iter().any(|w| {
        let stem = w
            .strip_suffix("'s")
            .or_else(|| w.strip_suffix('\''))
            .unwrap_or(w);
        entity_words.contains(w) || entity_words.contains(stem)
    })
}

/// TSV persistence: entity, description (space-joined), article id,
/// sentence number.
pub fn save_tuples(path: impl AsRef<Path>, tuples: &[EDTuple]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for t in tuples {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            t.entity,
            t.description.join(" "),
            t.article_id,
            t.sentence_no
        ));
    }
    std::fs::write(path, out).map_err(|e| LexError::io(path, e))
}

pub fn load_tuples(path: impl AsRef<Path>) -> Result<Vec<EDTuple>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
    let mut tuples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(LexError::Parse {
                line: lineno + 1,
                msg: format!("expected 4 tab-separated fields, got {}", fields.len()),
            });
        }
        let sentence_no = fields[3].parse().map_err(|_| LexError::Parse {
            line: lineno + 1,
            msg: format!("bad sentence number {:?}", fields[3]),
        })?;
        let description: Vec<String> =
            fields[1].split_whitespace().map(str::to_string).collect();
        if description.is_empty() {
            return Err(LexError::Parse {
                line: lineno + 1,
                msg: "empty description".into(),
            });
        }
        tuples.push(EDTuple {
            entity: fields[0].to_string(),
            description,
            article_id: fields[2].to_string(),
            sentence_no,
        });
    }
    Ok(tuples)
}
