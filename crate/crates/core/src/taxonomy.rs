//! Hypernym taxonomy keyed by numeric synset offsets.
//!
//! The on-disk format is one node per line:
//! `<offset8> <parent-offset8|-> <word1,word2,...>` with `#` starting a
//! comment. A `-` parent marks a root. The word index preserves file order,
//! so the first line mentioning a word defines its first sense.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LexError, Result};

/// Identifier of a concept node, rendered as 8-digit zero-padded text.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId(u32);

impl SynsetId {
    pub fn new(offset: u32) -> Self {
        SynsetId(offset)
    }

    pub fn offset(self) -> u32 {
        self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}", self.0)
    }
}

impl fmt::Debug for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:08}}}", self.0)
    }
}

impl FromStr for SynsetId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.len() != 8 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("synset offset must be 8 digits, got {s:?}"));
        }
        Ok(SynsetId(s.parse().expect("8 ascii digits")))
    }
}

impl Serialize for SynsetId {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SynsetId {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which offsets a description word contributes to its tag set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TagMode {
    /// The word's own first-sense offset only.
    WordOnly,
    /// The word's first-sense offset plus that sense's parent.
    WordParent,
}

impl TagMode {
    pub const ALL: [TagMode; 2] = [TagMode::WordOnly, TagMode::WordParent];
}

impl fmt::Display for TagMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagMode::WordOnly => write!(f, "word"),
            TagMode::WordParent => write!(f, "word+parent"),
        }
    }
}

impl FromStr for TagMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "word" | "word-only" => Ok(TagMode::WordOnly),
            "word+parent" | "word-parent" => Ok(TagMode::WordParent),
            other => Err(format!("unknown mode {other:?}, expected word|word+parent")),
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    words: Vec<String>,
    parent: Option<SynsetId>,
}

/// Immutable hypernym taxonomy with a word -> senses index.
#[derive(Clone, Debug, Default)]
pub struct Taxonomy {
    nodes: BTreeMap<SynsetId, Node>,
    word_index: BTreeMap<String, Vec<SynsetId>>,
}

impl Taxonomy {
    /// The mini-taxonomy shipped with the crate.
    pub fn builtin() -> Taxonomy {
        Taxonomy::parse(include_str!("../data/taxonomy.txt")).expect("bundled taxonomy is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Taxonomy> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
        Taxonomy::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Taxonomy> {
        let mut nodes = BTreeMap::new();
        let mut word_index: BTreeMap<String, Vec<SynsetId>> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (offset, parent, words) = match (parts.next(), parts.next(), parts.next()) {
                (Some(o), Some(p), Some(w)) => (o, p, w),
                _ => {
                    return Err(LexError::Parse {
                        line: lineno + 1,
                        msg: format!("expected `<offset> <parent|-> <words>`, got {line:?}"),
                    })
                }
            };
            let id: SynsetId = offset.parse().map_err(|msg| LexError::Parse {
                line: lineno + 1,
                msg,
            })?;
            let parent = match parent {
                "-" => None,
                p => Some(p.parse().map_err(|msg| LexError::Parse {
                    line: lineno + 1,
                    msg,
                })?),
            };
            let words: Vec<String> = words
                .split(',')
                .filter(|w| !w.is_empty())
                .map(|w| w.to_lowercase())
                .collect();
            if nodes
                .insert(
                    id,
                    Node {
                        words: words.clone(),
                        parent,
                    },
                )
                .is_some()
            {
                return Err(LexError::Validation(format!("duplicate synset offset {id}")));
            }
            for w in words {
                word_index.entry(w).or_default().push(id);
            }
        }
        let taxonomy = Taxonomy { nodes, word_index };
        taxonomy.validate()?;
        Ok(taxonomy)
    }

    /// Builds a taxonomy from (offset, parent, words) triples, with the
    /// same validation as the file loader.
    pub fn from_nodes(
        nodes: impl IntoIterator<Item = (SynsetId, Option<SynsetId>, Vec<String>)>,
    ) -> Result<Taxonomy> {
        let mut map = BTreeMap::new();
        let mut word_index: BTreeMap<String, Vec<SynsetId>> = BTreeMap::new();
        for (id, parent, words) in nodes {
            let words: Vec<String> = words.into_iter().map(|w| w.to_lowercase()).collect();
            if map
                .insert(
                    id,
                    Node {
                        words: words.clone(),
                        parent,
                    },
                )
                .is_some()
            {
                return Err(LexError::Validation(format!("duplicate synset offset {id}")));
            }
            for w in words {
                word_index.entry(w).or_default().push(id);
            }
        }
        let taxonomy = Taxonomy {
            nodes: map,
            word_index,
        };
        taxonomy.validate()?;
        Ok(taxonomy)
    }

    /// Renders the file format, nodes in ascending offset order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, node) in &self.nodes {
            let parent = node
                .parent
                .map_or_else(|| "-".to_string(), |p| p.to_string());
            out.push_str(&format!("{id} {parent} {}\n", node.words.join(",")));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| LexError::io(path, e))
    }

    fn validate(&self) -> Result<()> {
        for (id, node) in &self.nodes {
            if let Some(p) = node.parent {
                if !self.nodes.contains_key(&p) {
                    return Err(LexError::Validation(format!(
                        "node {id} references missing parent {p}"
                    )));
                }
            }
        }
        // A parent chain longer than the node count must revisit a node.
        for start in self.nodes.keys() {
            let mut cur = *start;
            let mut steps = 0usize;
            while let Some(next) = self.nodes[&cur].parent {
                cur = next;
                steps += 1;
                if steps > self.nodes.len() {
                    return Err(LexError::Validation(format!(
                        "cycle in parent chain through {cur}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: SynsetId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn parent(&self, id: SynsetId) -> Option<SynsetId> {
        self.nodes.get(&id).and_then(|n| n.parent)
    }

    pub fn gloss(&self, id: SynsetId) -> Option<&[String]> {
        self.nodes.get(&id).map(|n| n.words.as_slice())
    }

    /// All senses of a word in file order.
    pub fn senses(&self, word: &str) -> &[SynsetId] {
        self.word_index
            .get(word)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// First-listed sense, falling back to the possessive stem
    /// ("cambodia's" -> "cambodia") when the surface form has no senses.
    pub fn first_sense(&self, word: &str) -> Option<SynsetId> {
        if let Some(senses) = self.word_index.get(word) {
            return senses.first().copied();
        }
        for suffix in ["'s", "\u{2019}s"] {
            if let Some(stem) = word.strip_suffix(suffix) {
                if let Some(senses) = self.word_index.get(stem) {
                    return senses.first().copied();
                }
            }
        }
        None
    }

    /// Chain from `s` up to its root, both inclusive.
    pub fn hypernym_chain(&self, s: SynsetId) -> Result<Vec<SynsetId>> {
        if !self.nodes.contains_key(&s) {
            return Err(LexError::Lookup(format!("unknown synset {s}")));
        }
        let mut chain = vec![s];
        let mut cur = s;
        while let Some(p) = self.nodes[&cur].parent {
            chain.push(p);
            cur = p;
        }
        Ok(chain)
    }

    /// Tag set of a description: first sense of each word, plus that
    /// sense's parent in [`TagMode::WordParent`]. Words without senses
    /// contribute nothing.
    pub fn semantic_tags<S: AsRef<str>>(
        &self,
        description: &[S],
        mode: TagMode,
    ) -> std::collections::BTreeSet<SynsetId> {
        let mut tags = std::collections::BTreeSet::new();
        for word in description {
            let Some(sense) = self.first_sense(word.as_ref()) else {
                continue;
            };
            tags.insert(sense);
            if mode == TagMode::WordParent {
                if let Some(p) = self.parent(sense) {
                    tags.insert(p);
                }
            }
        }
        tags
    }
}
