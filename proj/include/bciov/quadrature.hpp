#ifndef BCIOV_QUADRATURE_HPP
#define BCIOV_QUADRATURE_HPP

#include <functional>
#include <stdexcept>

namespace bciov {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 60;
    // Forced bisection levels before the error test may accept a panel, so a
    // narrow peak inside a wide interval is not skipped by the first probe.
    int min_depth = 6;
};

/// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
/// Throws QuadratureError when the tolerance is not reached within max_depth
/// or when the integrand produces non-finite values.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace bciov

#endif
