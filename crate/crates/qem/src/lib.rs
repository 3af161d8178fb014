//! File formats, parallel sampling and experiment pipelines on top of
//! `qem-core`, plus the `qem` command-line tool.

pub mod campaign;
pub mod formats;
pub mod pipeline;
