//! Readability scoring, editorial compliance checks, corpus sampling,
//! fine-tuning dataset construction, an OpenAI-compatible API client and an
//! evaluation harness for plain-language guidance writing.

pub mod text;
pub mod readability;
pub mod rng;
pub mod corpus;
pub mod prompt;
pub mod dataset;
pub mod llm;
pub mod evaluation;
