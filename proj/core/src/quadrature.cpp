#include "nctheta/quadrature.hpp"

#include "nctheta/error.hpp"

#include <cmath>
#include <numbers>

namespace nctheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

struct Simpson {
    const std::function<cplx(double)>& f;
    int evaluations = 0;
    double error = 0.0;
    int max_depth;

    cplx eval(double x) {
        ++evaluations;
        return f(x);
    }

    cplx recurse(double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const cplx flm = eval(lm);
        const cplx frm = eval(rm);
        const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const cplx delta = left + right - whole;
        if (depth >= max_depth || std::abs(delta) <= 15.0 * tol) {
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                    int max_depth) {
    Simpson s{f, 0, 0.0, max_depth};
    // Start from a fixed partition so narrow features are not missed by the first estimate.
    constexpr int kPanels = 16;
    const double h = (b - a) / kPanels;
    cplx total{};
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * h;
        const double hi = lo + h;
        const cplx fa = s.eval(lo);
        const cplx fm = s.eval(0.5 * (lo + hi));
        const cplx fb = s.eval(hi);
        const cplx whole = h / 6.0 * (fa + 4.0 * fm + fb);
        total += s.recurse(lo, hi, fa, fm, fb, whole, abs_tol / kPanels, 0);
    }
    return {total, s.error, s.evaluations};
}

QuadratureResult integrate_gaussian_envelope(const std::function<cplx(double)>& f, double center, double decay,
                                             double tol) {
    if (!(decay > 0.0) || !std::isfinite(decay)) {
        throw Error(ErrorCode::DivergentIntegral, "integrand envelope does not decay");
    }
    // Tail mass beyond R relative to the envelope mass is below exp(-π·decay·R²).
    const double half_width = std::sqrt((std::log(10.0 / tol) + 2.0) / (kPi * decay));
    const double a = center - half_width;
    const double b = center + half_width;

    // Scale for the absolute tolerance: crude envelope mass from |f|.
    constexpr int kProbe = 512;
    double mass = 0.0;
    const double step = (b - a) / kProbe;
    for (int i = 0; i <= kProbe; ++i) mass += std::abs(f(a + i * step));
    mass *= step;
    if (!std::isfinite(mass)) throw Error(ErrorCode::DivergentIntegral, "integrand is not finite");
    if (mass == 0.0) return {cplx{}, 0.0, kProbe + 1};
    auto result = integrate_adaptive(f, a, b, tol * mass);
    result.evaluations += kProbe + 1;
    return result;
}

cplx gaussian_quadrature_oracle(cplx q, cplx l, cplx c, double tol) {
    if (!(q.imag() > 0.0)) throw Error(ErrorCode::DivergentIntegral, "quadratic coefficient needs Im q > 0");
    // |integrand| = exp(-π Im q s² - 2π Im l s - π Re c): peak at -Im l / Im q.
    const double center = -l.imag() / q.imag();
    auto f = [&](double s) { return std::exp(kI * kPi * q * s * s + 2.0 * kI * kPi * l * s - kPi * c); };
    return integrate_gaussian_envelope(f, center, q.imag(), tol).value;
}

}  // namespace nctheta
