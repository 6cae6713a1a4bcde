//! k-means over external edge embeddings and its agreement with the dimension
//! partition.

mod agreement;
mod ari;
mod kmeans;
mod vectors;

pub use agreement::{
    cluster_dimension_jaccard, cluster_profile, dimension_partition, sample_ids,
    write_assignments, AgreementReport, ClusterProfile, PairScore,
};
pub use ari::{adjusted_rand_index, ari_from_labels};
pub use kmeans::{kmeans, Clustering, KMeansParams};
pub use vectors::{load_vectors, VectorTable};
