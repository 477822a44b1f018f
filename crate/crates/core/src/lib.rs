//! Graph sampling through bipartite incidence graphs (BIGs): motif
//! enumeration, observation distances under snowball sampling, feasible BIG
//! construction, exact inclusion probabilities and unbiased estimators.

pub mod big;
pub mod builtin;
pub mod design;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod motif;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod rational;
pub mod report;

pub use big::{
    build_big_acs, build_big_tsbs, check_feasibility, load_big, AcsPopulation, AncestorRule, Big,
    FeasibilityReport, MotifEntry, ObservationProcedure,
};
pub use design::{
    acs_sample, first_order_inclusion, induced_sample, realize_sample_big, second_order_inclusion,
    snowball_sample, Design, SampleBig, SampleGraph,
};
pub use error::{BigsError, Result};
pub use estimator::{
    delta_matrix, exact_moments, hh_estimate, ht_estimate, modified_ht_acs, monte_carlo_moments,
    rao_blackwellize, EstimatorReport, EstimatorSpec, Scale, WeightScheme,
};
pub use graph::{Distance, Graph, NodeId};
pub use motif::{enumerate_motifs, Motif, MotifClass, MotifGeometry, MotifSet};
pub use num_rational::BigRational;
