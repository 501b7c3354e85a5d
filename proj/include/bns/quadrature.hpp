#ifndef BNS_QUADRATURE_HPP
#define BNS_QUADRATURE_HPP

#include <functional>

namespace bns {

// Adaptive Gauss-Kronrod 7-15 on [a, b]. Bisects until the local Kronrod
// error estimate meets the interval's share of abs_tol. Throws
// QuadratureFailure if the tolerance cannot be met within max_depth levels.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b,
                          double abs_tol = 1e-10,
                          int max_depth = 52);

} // namespace bns

#endif
