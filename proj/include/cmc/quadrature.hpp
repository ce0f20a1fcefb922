#pragma once

#include <functional>

namespace cmc {

struct QuadResult {
    double value;
    double error;
    int intervals;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with global absolute tolerance.
/// Throws NumericalError (carrying the best estimate) if the interval budget runs out.
QuadResult quad_detail(const std::function<double(double)>& f, double a, double b,
                       double tol, int max_intervals = 20000);

inline double quad(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-12) {
    return quad_detail(f, a, b, tol).value;
}

/// Single 15-point Kronrod rule; used for cumulative integrals on fine grids.
double gk15(const std::function<double(double)>& f, double a, double b);

} // namespace cmc
