#include "cvbit/quadrature.hpp"
#include "cvbit/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cvbit {

QuadRule gauss_legendre(int n) {
    if (n < 1) throw OutOfRange("gauss_legendre: n must be >= 1");
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev estimate, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    return rule;
}

QuadRule gauss_legendre(int n, double a, double b) {
    QuadRule base = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        base.x[i] = mid + half * base.x[i];
        base.w[i] *= half;
    }
    return base;
}

QuadRule composite_gauss_legendre(double a, double b, int panels, int per_panel) {
    if (panels < 1) throw OutOfRange("composite_gauss_legendre: panels must be >= 1");
    QuadRule base = gauss_legendre(per_panel);
    QuadRule rule;
    rule.x.reserve(static_cast<std::size_t>(panels) * per_panel);
    rule.w.reserve(static_cast<std::size_t>(panels) * per_panel);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width, half = 0.5 * width;
        for (int i = 0; i < per_panel; ++i) {
            rule.x.push_back(mid + half * base.x[i]);
            rule.w.push_back(half * base.w[i]);
        }
    }
    return rule;
}

QuadRule gauss_hermite(int n) {
    if (n < 1) throw OutOfRange("gauss_hermite: n must be >= 1");
    // Newton iteration on the orthonormal recurrence. Keeps full relative
    // accuracy in the far-tail weights, which an eigenvector-based
    // Golub-Welsch construction loses.
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double pim4 = std::pow(M_PI, -0.25);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.x[1];
        else
            z = 2.0 * z - rule.x[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        rule.x[i] = z;
        rule.x[n - 1 - i] = -z;
        rule.w[i] = 2.0 / (pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    // nodes ascending to match the mirrored fill above
    std::reverse(rule.x.begin(), rule.x.end());
    std::reverse(rule.w.begin(), rule.w.end());
    return rule;
}

} // namespace cvbit
