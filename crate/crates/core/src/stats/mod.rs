//! Block-position regression: model matrices, least squares, forward
//! selection and column correlations.

mod correlation;
mod model;
mod regression;
mod tdist;

pub use correlation::{correlation_matrix, CorrelationMatrix};
pub use model::{block_label, model_matrix, ModelMatrix, ModelOrder, INTERCEPT};
pub use regression::{forward_select, ols, ForwardFit, OlsFit};
pub use tdist::{ln_gamma, regularized_beta, t_pvalue};
