//! Phoneme corpora with gold word boundaries, displacement windows, and
//! random non-word generation.
//!
//! Text layout: one utterance per line, phoneme symbols separated by spaces,
//! words separated by `;`:
//!
//! ```text
//! L UH K ; AE T ; DH AH ; B AO L
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::phonemes::{text_to_phonemes, PhonemeId, PhonemeTable, PronouncingDictionary};
use crate::error::{Error, Result};
use crate::model::Pattern;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub words: Vec<Vec<PhonemeId>>,
}

impl Utterance {
    pub fn phonemes(&self) -> Vec<PhonemeId> {
        self.words.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Word index of every phoneme position.
    fn word_of_position(&self) -> Vec<usize> {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(w, word)| std::iter::repeat_n(w, word.len()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub utterances: Vec<Utterance>,
    /// Distinct word forms.
    pub lexicon: BTreeSet<Vec<PhonemeId>>,
}

impl Corpus {
    pub fn new(utterances: Vec<Utterance>) -> Self {
        let utterances: Vec<Utterance> = utterances
            .into_iter()
            .map(|u| Utterance {
                words: u.words.into_iter().filter(|w| !w.is_empty()).collect(),
            })
            .filter(|u| !u.words.is_empty())
            .collect();
        let lexicon = utterances.iter().flat_map(|u| u.words.iter().cloned()).collect();
        Corpus { utterances, lexicon }
    }

    pub fn parse(text: &str, table: &PhonemeTable, origin: &Path) -> Result<Self> {
        let mut utterances = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let words = line
                .split(';')
                .map(|w| {
                    w.split_whitespace()
                        .map(|s| table.id(s).map_err(|e| Error::parse(origin, i + 1, e.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            utterances.push(Utterance { words });
        }
        Ok(Corpus::new(utterances))
    }

    pub fn load(path: &Path, table: &PhonemeTable) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, table, path)
    }

    /// Builds a corpus from an orthographic transcript, one utterance per
    /// line. Returns the out-of-vocabulary words alongside.
    pub fn from_transcript(
        text: &str,
        dict: &PronouncingDictionary,
        table: &PhonemeTable,
        strict: bool,
    ) -> Result<(Self, Vec<String>)> {
        let mut utterances = Vec::new();
        let mut oov = Vec::new();
        for line in text.lines() {
            let ph = text_to_phonemes(line, dict, strict)?;
            oov.extend(ph.oov);
            let words = ph
                .words
                .iter()
                .map(|w| w.iter().map(|s| table.id(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            utterances.push(Utterance { words });
        }
        Ok((Corpus::new(utterances), oov))
    }

    pub fn to_text(&self, table: &PhonemeTable) -> String {
        let mut out = String::new();
        for u in &self.utterances {
            let words: Vec<String> = u
                .words
                .iter()
                .map(|w| w.iter().map(|&p| table.symbol(p)).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = writeln!(out, "{}", words.join(" ; "));
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    /// Every word token in corpus order.
    pub fn word_tokens(&self) -> impl Iterator<Item = &Vec<PhonemeId>> {
        self.utterances.iter().flat_map(|u| u.words.iter())
    }

    pub fn phoneme_count(&self) -> usize {
        self.utterances.iter().map(Utterance::len).sum()
    }

    /// Phonemes that occur in the corpus, ascending.
    pub fn alphabet(&self) -> Vec<PhonemeId> {
        let set: BTreeSet<PhonemeId> = self.word_tokens().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Windows of `k` phonemes over every utterance, in corpus order.
    pub fn windows(&self, k: usize, stride: usize) -> Vec<Window> {
        self.utterances
            .iter()
            .enumerate()
            .flat_map(|(i, u)| window_stream(u, i, k, stride, &self.lexicon))
            .collect()
    }
}

/// A run of consecutive phonemes cut from one utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub phonemes: Vec<PhonemeId>,
    pub utterance: usize,
    pub start: usize,
    /// The window spans more than one word.
    pub crosses_boundary: bool,
    /// The window's phoneme string is a word of the lexicon.
    pub in_lexicon: bool,
}

impl Window {
    pub fn to_pattern(&self, table: &PhonemeTable) -> Pattern {
        Pattern::new(table.featurize(&self.phonemes))
    }
}

/// All `k`-phoneme windows of one utterance starting every `stride`
/// positions. Utterances shorter than `k` yield nothing.
pub fn window_stream(
    utterance: &Utterance,
    utterance_index: usize,
    k: usize,
    stride: usize,
    lexicon: &BTreeSet<Vec<PhonemeId>>,
) -> Vec<Window> {
    let seq = utterance.phonemes();
    if k == 0 || stride == 0 || seq.len() < k {
        return Vec::new();
    }
    let word_of = utterance.word_of_position();
    (0..=seq.len() - k)
        .step_by(stride)
        .map(|start| {
            let phonemes = seq[start..start + k].to_vec();
            Window {
                crosses_boundary: word_of[start] != word_of[start + k - 1],
                in_lexicon: lexicon.contains(&phonemes),
                phonemes,
                utterance: utterance_index,
                start,
            }
        })
        .collect()
}

/// Draws `n` random phoneme strings over `alphabet` that are not in
/// `true_set`. Lengths follow the length distribution of `true_set`.
/// Deterministic for a given seed.
pub fn generate_negatives(
    true_set: &[Vec<PhonemeId>],
    alphabet: &[PhonemeId],
    n: usize,
    seed: u64,
) -> Result<Vec<Vec<PhonemeId>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if alphabet.is_empty() {
        return Err(Error::InvalidArgument("empty phoneme alphabet".into()));
    }
    if true_set.is_empty() {
        return Err(Error::InvalidArgument("empty true set: no length distribution".into()));
    }
    let members: HashSet<&[PhonemeId]> = true_set.iter().map(Vec::as_slice).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_attempts = 1_000 + 100 * n;
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        if attempts == max_attempts {
            return Err(Error::Unsatisfiable {
                wanted: n,
                found: out.len(),
                attempts,
            });
        }
        attempts += 1;
        let len = true_set.choose(&mut rng).map_or(1, Vec::len).max(1);
        let candidate: Vec<PhonemeId> = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        if !members.contains(candidate.as_slice()) {
            out.push(candidate);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PhonemeTable {
        let mut csv = String::new();
        for (i, s) in ["A", "B", "C", "D", "E"].iter().enumerate() {
            let mut row = ["0"; 12];
            row[i] = "1";
            let _ = writeln!(csv, "{s},{}", row.join(","));
        }
        PhonemeTable::parse(&csv, Path::new("t")).unwrap()
    }

    fn corpus() -> Corpus {
        Corpus::parse("A B ; C\nD ; E A ; B\n", &table(), Path::new("c")).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let t = table();
        let c = corpus();
        assert_eq!(c.utterances.len(), 2);
        assert_eq!(c.lexicon.len(), 5);
        assert_eq!(c.to_text(&t), "A B ; C\nD ; E A ; B\n");
        assert!(Corpus::parse("A ; Q\n", &t, Path::new("c")).is_err());
    }

    #[test]
    fn window_counts() {
        let c = corpus();
        let u = &c.utterances[1]; // D E A B
        assert_eq!(window_stream(u, 1, 2, 1, &c.lexicon).len(), 3);
        assert_eq!(window_stream(u, 1, 4, 1, &c.lexicon).len(), 1);
        assert_eq!(window_stream(u, 1, 5, 1, &c.lexicon).len(), 0);
        assert_eq!(window_stream(u, 1, 1, 2, &c.lexicon).len(), 2);
        let five = Utterance {
            words: vec![vec![0, 1, 2, 3, 4]],
        };
        assert_eq!(window_stream(&five, 0, 2, 1, &c.lexicon).len(), 4);
    }

    #[test]
    fn window_flags() {
        let c = corpus();
        let w = window_stream(&c.utterances[1], 1, 2, 1, &c.lexicon);
        // D E | E A | A B
        assert!(w[0].crosses_boundary && !w[0].in_lexicon);
        assert!(!w[1].crosses_boundary && w[1].in_lexicon);
        assert!(w[2].crosses_boundary);
        // "A B" crosses a boundary here but is a word elsewhere
        assert!(w[2].in_lexicon);
        assert!(c.windows(2, 1).iter().all(|w| w.phonemes.len() == 2));
    }

    #[test]
    fn negatives_avoid_true_set() {
        let truth: Vec<Vec<PhonemeId>> = vec![vec![0, 1], vec![2], vec![3, 4, 0]];
        let alphabet = [0, 1, 2, 3, 4];
        assert!(generate_negatives(&truth, &alphabet, 0, 1).unwrap().is_empty());
        let neg = generate_negatives(&truth, &alphabet, 200, 9).unwrap();
        assert_eq!(neg.len(), 200);
        assert!(neg.iter().all(|n| !truth.contains(n)));
        assert!(neg.iter().all(|n| (1..=3).contains(&n.len())));
        assert_eq!(neg, generate_negatives(&truth, &alphabet, 200, 9).unwrap());
        assert_ne!(neg, generate_negatives(&truth, &alphabet, 200, 10).unwrap());
    }

    #[test]
    fn negatives_unsatisfiable() {
        let truth = vec![vec![0]];
        assert!(matches!(
            generate_negatives(&truth, &[0], 3, 1),
            Err(Error::Unsatisfiable {
                wanted: 3,
                found: 0,
                ..
            })
        ));
        assert!(generate_negatives(&truth, &[], 3, 1).is_err());
    }
}
