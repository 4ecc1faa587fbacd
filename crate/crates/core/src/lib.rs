//! Interlinked spatial clustering over social graphs.
//!
//! Given a graph whose edges carry timestamped text interactions and a set
//! of context keys naming an event, the pipeline extracts burst words per
//! edge (words whose time profile correlates with the key's corpus-wide
//! profile and is temporally peaked), counts them as edge weights, and
//! reports the connected components of the threshold-filtered subgraph as
//! communities. A betweenness variant thresholds vertices instead.
//!
//! - [`graph`]: the data model, subgraph induction, components, tie strength
//! - [`text`]: tokenization, binning, Pearson correlation, burst search
//! - [`weighting`]: burst counts to adjacency matrix
//! - [`centrality`]: weighted shortest-path betweenness
//! - [`community`]: threshold filtering and community assembly
//! - [`io`]: document formats and exports
//! - [`synth`]: planted-community generator and recovery metrics

pub mod centrality;
pub mod community;
pub mod error;
pub mod graph;
pub mod io;
pub mod synth;
pub mod text;
pub mod weighting;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
