//! Supporting numerics: adaptive quadrature, Bessel kernels, alternating
//! series acceleration and the small least-squares solve behind the
//! divergence fits.

pub mod bessel;
pub(crate) mod fit;
pub(crate) mod oscillatory;
pub mod quad;
pub(crate) mod series;
