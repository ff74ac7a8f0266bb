//! Polytopes on a shared normal fan: interpolation, facet measures, the
//! facet formula for `d/dλ μ(K_λ)`, combinatorial type changes, and first
//! variations of the measure.

mod deriv;
mod facets;
mod fan;
mod variation;

pub use deriv::{measure_derivative, strong_isomorphy_probe, DerivativeReport, IsoInterval, TYPE_CHANGE_TOL};
pub use facets::{facet_measures, facet_measures_of, FacetMeasureTable, FacetMethod};
pub use fan::{InterpHeights, IsomorphicPair, NormalFan};
pub use variation::{first_variation_check, surface_integral, FirstVariationReport, Perturbation, VARIATION_DIRECTIONS};
