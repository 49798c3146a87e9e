//! Document loading, tokenization, and sentence segmentation.

pub mod synth;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{LexError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Punctuation,
    Number,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lowered: String,
    pub kind: TokenKind,
    pub pos_tag: Option<String>,
}

impl Token {
    fn new(surface: &str, kind: TokenKind) -> Token {
        Token {
            surface: surface.to_string(),
            lowered: surface.to_lowercase(),
            kind,
            pos_tag: None,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind != TokenKind::Punctuation
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub id: String,
    pub raw: String,
    pub tokens: Vec<Token>,
    /// Half-open token spans partitioning `[0, tokens.len())`.
    pub sentence_bounds: Vec<(usize, usize)>,
    /// Token count excluding punctuation.
    pub length_words: usize,
}

impl Document {
    pub fn new(id: impl Into<String>, raw: impl Into<String>, abbrevs: &AbbrevSet) -> Document {
        let raw = raw.into();
        let tokens = tokenize(&raw);
        Document::from_tokens(id, raw, tokens, abbrevs)
    }

    pub fn from_tokens(
        id: impl Into<String>,
        raw: impl Into<String>,
        tokens: Vec<Token>,
        abbrevs: &AbbrevSet,
    ) -> Document {
        let sentence_bounds = segment(&tokens, abbrevs);
        let length_words = tokens.iter().filter(|t| t.is_word()).count();
        Document {
            id: id.into(),
            raw: raw.into(),
            tokens,
            sentence_bounds,
            length_words,
        }
    }

    /// Index of the sentence containing token position `pos`.
    pub fn sentence_of(&self, pos: usize) -> Option<usize> {
        self.sentence_bounds
            .iter()
            .position(|&(s, e)| pos >= s && pos < e)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    PlainDir,
    Jsonl,
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusFormat::PlainDir => write!(f, "plain-dir"),
            CorpusFormat::Jsonl => write!(f, "jsonl"),
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plain-dir" | "dir" => Ok(CorpusFormat::PlainDir),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// Abbreviations that block a following period from ending a sentence.
/// Stored lowercased, trailing period included.
#[derive(Clone, Debug)]
pub struct AbbrevSet(std::collections::BTreeSet<String>);

impl Default for AbbrevSet {
    fn default() -> Self {
        AbbrevSet::parse(include_str!("../../data/abbreviations.txt"))
    }
}

impl AbbrevSet {
    pub fn empty() -> AbbrevSet {
        AbbrevSet(Default::default())
    }

    pub fn parse(text: &str) -> AbbrevSet {
        AbbrevSet(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<AbbrevSet> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
        Ok(AbbrevSet::parse(&text))
    }

    pub fn contains(&self, lowered_with_period: &str) -> bool {
        self.0.contains(lowered_with_period)
    }
}

/// Whitespace tokenization with leading/trailing punctuation split off as
/// separate tokens. Internal punctuation stays inside the token, so
/// "Iraq's" and "co-premier" survive intact; a trailing period is kept
/// when the token already has an internal one ("U.N.").
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let first_alnum = chars.iter().position(|c| c.is_alphanumeric());
        let Some(start) = first_alnum else {
            // all punctuation, one token per char
            for c in &chars {
                out.push(Token::new(&c.to_string(), TokenKind::Punctuation));
            }
            continue;
        };
        let mut end = chars.iter().rposition(|c| c.is_alphanumeric()).unwrap();
        let core_has_period = chars[start..=end].contains(&'.');
        if core_has_period && end + 1 < chars.len() && chars[end + 1] == '.' {
            end += 1; // abbreviation-like token keeps its period
        }
        for c in &chars[..start] {
            out.push(Token::new(&c.to_string(), TokenKind::Punctuation));
        }
        let core: String = chars[start..=end].iter().collect();
        out.push(Token::new(&core, classify(&core)));
        for c in &chars[end + 1..] {
            out.push(Token::new(&c.to_string(), TokenKind::Punctuation));
        }
    }
    out
}

fn classify(core: &str) -> TokenKind {
    let mut chars = core.chars();
    let first = chars.next().expect("core is non-empty");
    if first.is_ascii_digit() && core.chars().all(|c| c.is_ascii_digit() || ".,:-".contains(c)) {
        TokenKind::Number
    } else {
        TokenKind::Word
    }
}

/// Sentence spans over a token stream. A span ends after `.` `!` `?`
/// unless the period directly follows a known abbreviation; a trailing
/// span without final punctuation is still emitted.
pub fn segment(tokens: &[Token], abbrevs: &AbbrevSet) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0usize;
    for i in 0..tokens.len() {
        let t = &tokens[i];
        if t.kind != TokenKind::Punctuation {
            continue;
        }
        let is_final = matches!(t.surface.as_str(), "." | "!" | "?");
        if !is_final {
            continue;
        }
        if t.surface == "." && i > 0 {
            let prev = &tokens[i - 1];
            if prev.is_word() && abbrevs.contains(&format!("{}.", prev.lowered)) {
                continue;
            }
        }
        spans.push((start, i + 1));
        start = i + 1;
    }
    if start < tokens.len() {
        spans.push((start, tokens.len()));
    }
    spans
}

#[derive(Deserialize)]
struct JsonlRecord {
    id: String,
    text: String,
    #[serde(default)]
    tokens: Option<Vec<String>>,
}

/// Loads a corpus with deterministic document order (lexicographic by id).
pub fn load_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
    load_corpus_with(path, format, &AbbrevSet::default())
}

pub fn load_corpus_with(
    path: impl AsRef<Path>,
    format: CorpusFormat,
    abbrevs: &AbbrevSet,
) -> Result<Corpus> {
    let path = path.as_ref();
    let mut by_id: BTreeMap<String, Document> = BTreeMap::new();
    match format {
        CorpusFormat::PlainDir => {
            let entries = std::fs::read_dir(path).map_err(|e| LexError::io(path, e))?;
            let mut files: Vec<_> = entries
                .collect::<std::io::Result<Vec<_>>>()
                .map_err(|e| LexError::io(path, e))?
                .into_iter()
                .map(|e| e.path())
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for file in files {
                let id = file
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .ok_or_else(|| {
                        LexError::Validation(format!("non-utf8 filename {}", file.display()))
                    })?
                    .to_string();
                let text =
                    std::fs::read_to_string(&file).map_err(|e| LexError::io(&file, e))?;
                let doc = Document::new(id.clone(), text, abbrevs);
                if by_id.insert(id.clone(), doc).is_some() {
                    return Err(LexError::Validation(format!("duplicate document id {id:?}")));
                }
            }
        }
        CorpusFormat::Jsonl => {
            let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: JsonlRecord =
                    serde_json::from_str(line).map_err(|e| LexError::Parse {
                        line: lineno + 1,
                        msg: e.to_string(),
                    })?;
                let doc = match rec.tokens {
                    Some(tagged) => {
                        let tokens = parse_tagged_tokens(&tagged);
                        Document::from_tokens(rec.id.clone(), rec.text, tokens, abbrevs)
                    }
                    None => Document::new(rec.id.clone(), rec.text, abbrevs),
                };
                if by_id.insert(rec.id.clone(), doc).is_some() {
                    return Err(LexError::Validation(format!(
                        "duplicate document id {:?}",
                        rec.id
                    )));
                }
            }
        }
    }
    Ok(Corpus {
        documents: by_id.into_values().collect(),
    })
}

/// Pre-tagged input: each entry is `surface/TAG`; a missing slash leaves
/// the tag unset.
fn parse_tagged_tokens(entries: &[String]) -> Vec<Token> {
    entries
        .iter()
        .map(|entry| {
            let (surface, tag) = match entry.rsplit_once('/') {
                Some((s, t)) if !s.is_empty() => (s, Some(t.to_string())),
                _ => (entry.as_str(), None),
            };
            let kind = if surface.chars().all(|c| !c.is_alphanumeric()) {
                TokenKind::Punctuation
            } else {
                classify(surface)
            };
            let mut tok = Token::new(surface, kind);
            tok.pos_tag = tag;
            tok
        })
        .collect()
}
