#include "bns/quadrature.hpp"

#include <cmath>

#include "bns/errors.hpp"

namespace bns {
namespace {

// Kronrod-15 abscissae on [0, 1) plus centre; odd indices are the Gauss-7 nodes.
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double res_g = kWg[3] * fc;
    double res_k = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        double fa = f(c - h * kXgk[j]);
        double fb = f(c + h * kXgk[j]);
        res_k += kWgk[j] * (fa + fb);
        if (j % 2 == 1) res_g += kWg[j / 2] * (fa + fb);
    }
    res_g *= h;
    res_k *= h;
    return PanelResult{res_k, std::fabs(res_k - res_g)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, int max_depth) {
    PanelResult p = gk15(f, a, b);
    if (p.err <= tol) return p.kronrod;
    if (depth >= max_depth)
        throw QuadratureFailure("integrate_adaptive: tolerance not reached after max bisection depth");
    double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double abs_tol, int max_depth) {
    if (!(abs_tol > 0.0)) throw DomainError("integrate_adaptive: abs_tol must be positive");
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    return sign * adapt(f, a, b, abs_tol, 0, max_depth);
}

} // namespace bns
