//! Sequence-labeling dataset construction and transformation: gazetteer
//! annotation, BILUO→BIO conversion, span decoding, SRL frame broadcasting,
//! class-weight emission, and frame→triple decoding.

mod frames;
mod gazetteer;
mod tags;
mod weights;

pub use frames::{
    broadcast_frames, frames_to_triple, read_frame_samples_jsonl, read_sentence_frames_jsonl,
    write_frame_samples_jsonl, FrameAnnotation, FrameSample, SentenceFrames, SRL_FRAME_TAGS,
};
pub use gazetteer::{gazetteer_tag, Gazetteer, GazetteerEntry};
pub use tags::{
    biluo_to_bio, decode_spans, read_labeled_tsv, write_labeled_tsv, EntitySpan, LabeledSequence,
    Scheme,
};
pub use weights::{class_weights, WeightMap};
