#pragma once

namespace elicit {

/// Numerical thresholds shared by every stage of the pipeline.
struct Tolerances {
  double sum = 1e-9;              // simplex coordinate-sum drift
  double norm = 1e-12;            // dual-norm normalization
  double level = 1e-8;            // "same level" comparisons on property values
  double residual = 1e-7;         // max |<z, x>| over level-set samples
  double rank = 1e-9;             // singular values below rank * largest are zero
  double interior_margin = 1e-3;  // fraction of the image trimmed at each end
};

}  // namespace elicit
