//! Phoneme featurization and dictionary-based text-to-phoneme conversion.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Pattern;

/// Features per phoneme.
pub const FEATURE_DIM: usize = 12;

/// Dense index of a phoneme inside a [`PhonemeTable`].
pub type PhonemeId = u16;

/// Symbol to 12-feature vector mapping, loaded from CSV
/// (`symbol,f1,...,f12`; `#` comments and one header row allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct PhonemeTable {
    symbols: Vec<String>,
    index: HashMap<String, PhonemeId>,
    features: Vec<[f64; FEATURE_DIM]>,
}

impl PhonemeTable {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut table = PhonemeTable {
            symbols: Vec::new(),
            index: HashMap::new(),
            features: Vec::new(),
        };
        let mut seen_header = false;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != FEATURE_DIM + 1 {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!(
                        "expected symbol and {FEATURE_DIM} features, found {} fields",
                        fields.len()
                    ),
                ));
            }
            let parsed: std::result::Result<Vec<f64>, _> = fields[1..].iter().map(|f| f.parse::<f64>()).collect();
            let values = match parsed {
                Ok(v) => v,
                Err(_) if !seen_header && table.symbols.is_empty() => {
                    seen_header = true;
                    continue;
                }
                Err(e) => return Err(Error::parse(origin, line_no, e.to_string())),
            };
            if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::parse(origin, line_no, "feature values must lie in [0, 1]"));
            }
            let symbol = fields[0].to_string();
            if table.index.contains_key(&symbol) {
                return Err(Error::parse(origin, line_no, format!("duplicate symbol `{symbol}`")));
            }
            let id = PhonemeId::try_from(table.symbols.len())
                .map_err(|_| Error::parse(origin, line_no, "too many symbols"))?;
            let mut row = [0.0; FEATURE_DIM];
            row.copy_from_slice(&values);
            table.index.insert(symbol.clone(), id);
            table.symbols.push(symbol);
            table.features.push(row);
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn id(&self, symbol: &str) -> Result<PhonemeId> {
        self.index
            .get(symbol)
            .copied()
            .ok_or_else(|| Error::UnknownPhoneme(symbol.to_string()))
    }

    pub fn symbol(&self, id: PhonemeId) -> &str {
        &self.symbols[id as usize]
    }

    pub fn features(&self, id: PhonemeId) -> &[f64; FEATURE_DIM] {
        &self.features[id as usize]
    }

    pub fn ids(&self) -> impl Iterator<Item = PhonemeId> {
        0..self.symbols.len() as PhonemeId
    }

    /// Concatenated features of `ids` (12 values per phoneme).
    pub fn featurize(&self, ids: &[PhonemeId]) -> Vec<f64> {
        let mut out = Vec::with_capacity(ids.len() * FEATURE_DIM);
        for &id in ids {
            out.extend_from_slice(self.features(id));
        }
        out
    }
}

/// Featurizes a symbol sequence into one pattern of `12 * len` values.
pub fn phonemes_to_features<S: AsRef<str>>(seq: &[S], table: &PhonemeTable) -> Result<Pattern> {
    if seq.is_empty() {
        return Err(Error::LengthBounds {
            len: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let ids = seq.iter().map(|s| table.id(s.as_ref())).collect::<Result<Vec<_>>>()?;
    Ok(Pattern::new(table.featurize(&ids)))
}

/// Word to phoneme-symbol lookup in the CMU dictionary layout:
/// `word PH1 PH2 ...`, one entry per line. Alternate pronunciations
/// (`word(2)`) are ignored, stress digits are stripped, words are matched
/// case-insensitively.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PronouncingDictionary {
    entries: HashMap<String, Vec<String>>,
}

impl PronouncingDictionary {
    pub fn parse(text: &str) -> Self {
        let mut entries = HashMap::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with(";;;") {
                continue;
            }
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            if word.ends_with(')') && word.contains('(') {
                continue;
            }
            let phones: Vec<String> = fields
                .map(|p| p.trim_end_matches(|c: char| c.is_ascii_digit()).to_string())
                .collect();
            if phones.is_empty() {
                continue;
            }
            entries.entry(word.to_lowercase()).or_insert(phones);
        }
        PronouncingDictionary { entries }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn lookup(&self, word: &str) -> Option<&[String]> {
        self.entries.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Lowercases a token and strips punctuation, keeping inner apostrophes.
pub fn normalize_word(token: &str) -> Option<String> {
    let cleaned: String = token
        .chars()
        .filter(|c| c.is_ascii_alphabetic() || *c == '\'')
        .collect::<String>()
        .to_lowercase();
    let cleaned = cleaned.trim_matches('\'');
    (!cleaned.is_empty()).then(|| cleaned.to_string())
}

/// Text converted to phonemes, one symbol list per recognized word.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Phonemized {
    pub words: Vec<Vec<String>>,
    /// Words missing from the dictionary, in order of appearance.
    pub oov: Vec<String>,
}

impl Phonemized {
    pub fn phonemes(&self) -> Vec<&str> {
        self.words.iter().flatten().map(String::as_str).collect()
    }

    /// Start index of each word inside [`Phonemized::phonemes`].
    pub fn word_starts(&self) -> Vec<usize> {
        self.words
            .iter()
            .scan(0, |pos, w| {
                let start = *pos;
                *pos += w.len();
                Some(start)
            })
            .collect()
    }
}

/// Looks every word of `text` up in `dict`. Unknown words are recorded and
/// skipped, or rejected when `strict` is set.
pub fn text_to_phonemes(text: &str, dict: &PronouncingDictionary, strict: bool) -> Result<Phonemized> {
    let mut out = Phonemized::default();
    for word in text.split_whitespace().filter_map(normalize_word) {
        match dict.lookup(&word) {
            Some(phones) => out.words.push(phones.to_vec()),
            None if strict => return Err(Error::OutOfVocabulary(word)),
            None => out.oov.push(word),
        }
    }
    Ok(out)
}
