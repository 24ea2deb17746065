//! Correlation, significance testing, structure preservation, classification
//! and clustering scores.

mod agglomerative;
mod correlation;
mod external;
mod kmeans;
mod knn;
mod mann_whitney;
mod preservation;
mod report;

pub use agglomerative::agglomerative;
pub use correlation::{average_ranks, pearson_r, spearman_rho};
pub use external::{ari, fmi};
pub use kmeans::{kmeans, KMeans, DEFAULT_RESTARTS, KMEANS_MAX_ITER};
pub use knn::{
    classification_scores, knn_evaluate, knn_predict, stratified_split, KnnScore, DEFAULT_KNN_K,
    DEFAULT_TEST_FRACTION,
};
pub use mann_whitney::{mann_whitney_u, MannWhitney, NORMAL_APPROX_MAX_ERROR};
pub use preservation::{
    bounding_box_areas, centroid_distance_preservation, class_centroids, cluster_area_preservation,
    distance_preservation, distance_preservation_on_pairs, per_class_distance_preservation,
};
pub use report::{keys, EvalReport, REPORT_SCHEMA_VERSION};
