//! Core algorithms for turning structured paper records into a topic
//! taxonomy, trend analytics and a weighted multi-field retrieval index.
//!
//! Everything here is allocation-only (`no_std` + `alloc`). File formats,
//! the HTTP gateway and the command-line front end live in the companion
//! `topicscope` crate.
//!
//! Pipeline order: [`corpus`] records → [`vectorize`] (hash embedding, PCA)
//! → [`cluster`] (HDBSCAN) → [`topics`] (c-TF-IDF, naming, tree) →
//! [`analytics`]; [`retrieval`] answers query plans against the corpus.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod analytics;
pub mod cluster;
pub mod corpus;
mod error;
pub mod llm;
pub mod retrieval;
pub mod text;
pub mod topics;
pub mod vectorize;

pub use error::{Error, Result};
