#pragma once

#include <complex>
#include <functional>

namespace nctheta {

using cplx = std::complex<double>;

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Simpson on [a, b] with Richardson correction. Subintervals are accepted when
/// |S_left + S_right − S_whole| <= 15·abs_tol·(width fraction).
QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                    int max_depth = 48);

/// Integral over the real line of a function bounded by C·exp(−π·decay·(s − center)²).
/// The interval is cut where the envelope tail drops below tol/10 of the envelope mass.
QuadratureResult integrate_gaussian_envelope(const std::function<cplx(double)>& f, double center, double decay,
                                             double tol);

/// ∫_R exp(πi q s² + 2πi l s − π c) ds by quadrature. Im q <= 0 throws DivergentIntegral.
cplx gaussian_quadrature_oracle(cplx q, cplx l, cplx c, double tol = 1e-12);

}  // namespace nctheta
