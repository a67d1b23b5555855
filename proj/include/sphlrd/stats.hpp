#pragma once

// Small numerical statistics helpers shared by the test module and the
// experiment harness.

namespace sphlrd {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), accurate to ~1e-15.
double normal_quantile(double p);

}  // namespace sphlrd
