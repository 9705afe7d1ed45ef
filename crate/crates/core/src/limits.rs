//! Desk-scale refusal bounds.

use crate::error::{Error, Result};

/// Environment variable that overrides every edge bound at once.
pub const MAX_EDGES_VAR: &str = "TROPMOD_MAX_EDGES";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `3g - 3 + n` accepted by the graph generators.
    pub generation_edges: usize,
    /// Largest edge count of a base graph whose strata are enumerated.
    pub strata_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            generation_edges: 9,
            strata_edges: 20,
        }
    }
}

impl Limits {
    /// Defaults, with both bounds replaced by `TROPMOD_MAX_EDGES` if it is set
    /// to an integer.
    pub fn from_env() -> Self {
        let over = std::env::var(MAX_EDGES_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok());
        match over {
            Some(m) => Limits {
                generation_edges: m,
                strata_edges: m,
            },
            None => Limits::default(),
        }
    }

    pub fn uniform(max_edges: usize) -> Self {
        Limits {
            generation_edges: max_edges,
            strata_edges: max_edges,
        }
    }

    pub(crate) fn check_generation(&self, edges: usize) -> Result<()> {
        check("generation", edges, self.generation_edges)
    }

    pub(crate) fn check_strata(&self, edges: usize) -> Result<()> {
        check("stratification", edges, self.strata_edges.min(crate::graph::MAX_EDGES - 1))
    }
}

fn check(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::ScaleLimit { what, size, limit })
    } else {
        Ok(())
    }
}
