#pragma once

#include "nctheta/complex_structure.hpp"
#include "nctheta/config.hpp"
#include "nctheta/heisenberg_module.hpp"
#include "nctheta/report.hpp"

#include <Eigen/Dense>

namespace nctheta {

/// Runs the suite's checks. Module errors become failed checks; the config is assumed valid.
/// Randomized suites without a seed throw ConfigInvalid.
RunReport run_suite(const RunConfig& config, Suite suite);

/// 0 when every check passed, 1 otherwise.
int exit_code(const RunReport& report);

/// δ̂ satisfying the column condition for m, with θ34 = theta34 (det m must be nonzero).
Eigen::Matrix2d compatible_delta_hat(const Eigen::Matrix2i& m, double theta34);

/// Nowhere-vanishing function on Z_m1 x Z_m2 used as the finite factor of test vectors.
FiniteVector default_finite_vector(int m1, int m2);

/// Theta vector of the structure, carrying default_finite_vector when Φ has a finite part.
GaussianVector test_vector(const EmbeddingMap& phi, const ComplexStructure& cs);

}  // namespace nctheta
