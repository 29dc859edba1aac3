//! Tokens, words and the per-problem feature table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::TokenizeError;

/// Boolean features of one symbol. A missing key reads as `false`.
pub type Features = BTreeMap<String, bool>;

/// Record of which transformation produced a token during a pass.
///
/// Rendered as `{ReplaceBy, h}` (or `{Delete}` without a payload).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransformationTag {
    pub op_name: String,
    pub payload: Option<String>,
}

impl TransformationTag {
    pub fn new(op_name: impl Into<String>, payload: Option<String>) -> Self {
        TransformationTag { op_name: op_name.into(), payload }
    }

    /// Parses the `{Op, payload}` rendering.
    pub fn parse(text: &str) -> Option<Self> {
        let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
        match inner.split_once(',') {
            Some((op, payload)) => {
                let op = op.trim();
                let payload = payload.trim();
                if op.is_empty() || payload.is_empty() {
                    return None;
                }
                Some(TransformationTag::new(op, Some(payload.to_string())))
            }
            None => {
                let op = inner.trim();
                (!op.is_empty()).then(|| TransformationTag::new(op, None))
            }
        }
    }
}

impl fmt::Display for TransformationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Some(p) => write!(f, "{{{}, {}}}", self.op_name, p),
            None => write!(f, "{{{}}}", self.op_name),
        }
    }
}

/// A symbol with its features and the tags left by the previous pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub symbol: String,
    pub features: Arc<Features>,
    pub tags: BTreeSet<TransformationTag>,
}

impl Token {
    pub fn new(symbol: impl Into<String>, features: Arc<Features>) -> Self {
        Token { symbol: symbol.into(), features, tags: BTreeSet::new() }
    }

    /// A token with no features, mostly for tests.
    pub fn bare(symbol: impl Into<String>) -> Self {
        Token::new(symbol, Arc::new(Features::new()))
    }

    pub fn has_feature(&self, name: &str) -> bool {
        self.features.get(name).copied().unwrap_or(false)
    }

    pub fn has_tag(&self, tag: &TransformationTag) -> bool {
        self.tags.contains(tag)
    }

    pub fn untagged(mut self) -> Self {
        self.tags.clear();
        self
    }

    pub fn with_tag(mut self, tag: TransformationTag) -> Self {
        self.tags.clear();
        self.tags.insert(tag);
        self
    }
}

/// An ordered sequence of tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    pub tokens: Vec<Token>,
}

impl Word {
    pub fn new(tokens: Vec<Token>) -> Self {
        Word { tokens }
    }

    /// Builds a word from a space-delimited string without a feature table.
    pub fn from_symbols(raw: &str) -> Self {
        Word::new(raw.split_whitespace().map(Token::bare).collect())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The token at `pos + offset`, if inside the word.
    pub fn at(&self, pos: usize, offset: i32) -> Option<&Token> {
        let idx = pos as i64 + offset as i64;
        if idx < 0 {
            return None;
        }
        self.tokens.get(idx as usize)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.symbol.as_str())
    }

    /// Symbols joined with single spaces, the on-disk cell format.
    pub fn to_text(&self) -> String {
        self.symbols().collect::<Vec<_>>().join(" ")
    }

    pub fn same_symbols(&self, other: &Word) -> bool {
        self.len() == other.len() && self.symbols().eq(other.symbols())
    }

    pub fn strip_tags(mut self) -> Self {
        for t in &mut self.tokens {
            t.tags.clear();
        }
        self
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Maps each symbol of a problem to its feature set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureTable {
    entries: BTreeMap<String, Arc<Features>>,
}

impl FeatureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: impl Into<String>, features: Features) {
        self.entries.insert(symbol.into(), Arc::new(features));
    }

    pub fn get(&self, symbol: &str) -> Option<&Arc<Features>> {
        self.entries.get(symbol)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.entries.contains_key(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Arc<Features>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Token for a symbol produced by a transformation. Symbols outside the
    /// table get an empty feature set.
    pub fn token(&self, symbol: &str) -> Token {
        match self.entries.get(symbol) {
            Some(f) => Token::new(symbol, Arc::clone(f)),
            None => {
                log::warn!("symbol `{symbol}` has no feature entry; using empty features");
                Token::bare(symbol)
            }
        }
    }

    /// Re-reads features for every token of `word`, keeping tags.
    pub fn refresh(&self, word: &Word) -> Word {
        Word::new(
            word.tokens
                .iter()
                .map(|t| {
                    let mut fresh = self.token(&t.symbol);
                    fresh.tags = t.tags.clone();
                    fresh
                })
                .collect(),
        )
    }
}

/// Splits a space-delimited cell into tokens, looking features up in `table`.
pub fn tokenize(raw: &str, table: &FeatureTable) -> Result<Word, TokenizeError> {
    if raw.is_empty() {
        return Ok(Word::default());
    }
    let mut tokens = Vec::new();
    for sym in raw.split(' ') {
        if sym.is_empty() || sym.chars().any(char::is_whitespace) {
            return Err(TokenizeError::Separator(raw.to_string()));
        }
        let features = table.get(sym).ok_or_else(|| TokenizeError::UnknownSymbol(sym.to_string()))?;
        tokens.push(Token::new(sym, Arc::clone(features)));
    }
    Ok(Word::new(tokens))
}
