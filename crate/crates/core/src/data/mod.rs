//! Corpus ingestion and featurization.

pub mod corpus;
pub mod phonemes;
pub mod ucr;

pub use corpus::{generate_negatives, window_stream, Corpus, Utterance, Window};
pub use phonemes::{
    phonemes_to_features, text_to_phonemes, PhonemeId, PhonemeTable, Phonemized, PronouncingDictionary, FEATURE_DIM,
};
pub use ucr::{load_ucr, load_ucr_split, RawSeries};
