#pragma once

#include <vector>

namespace cvbit {

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

/// Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre rule: `panels` equal subintervals of [a, b],
/// `per_panel` nodes each.
QuadRule composite_gauss_legendre(double a, double b, int panels, int per_panel);

/// Gauss-Hermite rule for the weight e^{-u^2} on the real line (Golub-Welsch).
QuadRule gauss_hermite(int n);

} // namespace cvbit
