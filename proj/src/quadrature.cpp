#include "bciov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bciov {

namespace {

struct Panel {
    double a, b;
    double fa, fm, fb;
    double whole;
};

struct SimpsonState {
    const std::function<double(double)>& f;
    int max_depth;
    int min_depth;
    bool converged = true;
};

double eval(const std::function<double(double)>& f, double x)
{
    const double y = f(x);
    if (!std::isfinite(y)) {
        throw QuadratureError("integrand is not finite");
    }
    return y;
}

double refine(SimpsonState& st, const Panel& p, double tol, int depth)
{
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = eval(st.f, lm);
    const double frm = eval(st.f, rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;

    // Accept at the tolerance or once the estimate is at its rounding floor.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(left) + std::abs(right));
    if (depth >= st.min_depth && std::abs(delta) <= std::max(15.0 * tol, floor)) {
        return left + right + delta / 15.0;
    }
    if (depth >= st.max_depth) {
        st.converged = false;
        return left + right + delta / 15.0;
    }
    const Panel lp{p.a, m, p.fa, flm, p.fm, left};
    const Panel rp{m, p.b, p.fm, frm, p.fb, right};
    return refine(st, lp, 0.5 * tol, depth + 1) + refine(st, rp, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts)
{
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw QuadratureError("integration limits must be finite");
    }
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate(f, b, a, opts);
    }
    SimpsonState st{f, opts.max_depth, opts.min_depth};
    const double fa = eval(f, a);
    const double fb = eval(f, b);
    const double m = 0.5 * (a + b);
    const double fm = eval(f, m);
    const Panel root{a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb)};
    const double result = refine(st, root, opts.abs_tol, 0);
    if (!st.converged) {
        throw QuadratureError("adaptive Simpson did not converge within the depth limit");
    }
    return result;
}

}  // namespace bciov
