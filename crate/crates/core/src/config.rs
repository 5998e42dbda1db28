use crate::lexical::DEFAULT_SYNONYM_CAP;
use crate::query::{QueryError, WeightVector};
use crate::text::StopwordSet;
use crate::topology::{
    HierarchyContainment, DEFAULT_MAX_HOPS, DEFAULT_RELEVANT_CAP, DEFAULT_WCC_ITERATION_CAP,
};

pub const DEFAULT_GENERAL_STOPWORDS: &str = include_str!("../data/stopwords_general.txt");
pub const DEFAULT_VISUAL_STOPWORDS: &str = include_str!("../data/stopwords_visual.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub weights: WeightVector,
    pub max_hops: usize,
    pub synonym_cap: usize,
    pub wcc_iteration_cap: usize,
    /// Per-side limit on relevant articles.
    pub relevant_cap: usize,
    pub stopwords_general: StopwordSet,
    pub stopwords_visual: StopwordSet,
    pub hierarchy_containment: HierarchyContainment,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            weights: WeightVector::DEFAULT,
            max_hops: DEFAULT_MAX_HOPS,
            synonym_cap: DEFAULT_SYNONYM_CAP,
            wcc_iteration_cap: DEFAULT_WCC_ITERATION_CAP,
            relevant_cap: DEFAULT_RELEVANT_CAP,
            stopwords_general: StopwordSet::from_list(DEFAULT_GENERAL_STOPWORDS),
            stopwords_visual: StopwordSet::from_list(DEFAULT_VISUAL_STOPWORDS),
            hierarchy_containment: HierarchyContainment::Formula,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{0} must be at least 1")]
    ZeroCap(&'static str),
    #[error(transparent)]
    Weights(#[from] QueryError),
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.weights.validate()?;
        for (name, v) in [
            ("max_hops", self.max_hops),
            ("synonym_cap", self.synonym_cap),
            ("wcc_iteration_cap", self.wcc_iteration_cap),
            ("relevant_cap", self.relevant_cap),
        ] {
            if v == 0 {
                return Err(ConfigError::ZeroCap(name));
            }
        }
        Ok(())
    }
}
