//! Weighted GLM engine for unifed responses: IWLS fitting, Wald inference,
//! deviance accounting and the χ² goodness-of-fit test.

mod deviance;
mod fit;
mod link;
mod model;

pub use deviance::{
    deviance_residuals, goodness_of_fit, null_deviance, theta_from_coefficients, total_deviance,
    GoodnessOfFit,
};
pub use fit::{fit, fit_with_options, FitOptions, FitResult};
pub use link::LinkFunction;
pub use model::{DesignMatrix, WeightedResponse};
