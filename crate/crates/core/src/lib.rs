//! Regular graphs with regular triangle degree: construction, verification,
//! classification of parameter pairs, local search and exhaustive enumeration.
//!
//! A graph is *K3-regular* with parameters `(r2, r3)` when every vertex has
//! degree `r2` and lies in exactly `r3` triangles.

pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod feasibility;
pub mod formats;
pub mod graph;
pub mod iso;
pub mod search;

pub use constructions::{construct_for, ConstructionRecipe, NamedGraph, Recipe};
pub use enumeration::{enumerate_regular, find_with_parameters, verify_turan_uniqueness, EnumSpec};
pub use error::{Error, Result};
pub use feasibility::{admissibility_table, classify, ForbiddingRule, Verdict};
pub use formats::{decode_edge_list, decode_graph6, encode_edge_list, encode_graph6, GraphFormat};
pub use graph::{Graph, Parameters};
pub use iso::are_isomorphic;
pub use search::{run_search, SearchConfig, SearchResult, SearchStatus};
