//! Fan models: quotient representatives, the induced map on the quotient,
//! end-points of the two-sided product of `H`, and planar embeddings.

mod embed;
mod lelek;
mod quotient;

pub use embed::{
    cantor_svg, count_polylines, embed_cantor_fan, embed_lelek, legs_csv, lelek_svg, relation_svg, ternary, Leg,
};
pub use lelek::{
    endpoint_depth, is_endpoint_certified, lelek_endpoint_near, leg_window, random_window, EndpointCertificate,
};
pub use quotient::{canonicalize, canonicalize_collapsed, induced_map, CollapsedPoint, FanPoint, FanSymbols};
