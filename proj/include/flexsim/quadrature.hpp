#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace flexsim {

/// Gauss-Legendre rule on [a, b]. Nodes and weights are computed once at
/// construction by Newton iteration on the Legendre polynomial.
class GaussLegendre {
public:
    GaussLegendre(int n, double a, double b) : nodes_(static_cast<std::size_t>(n)),
                                               weights_(static_cast<std::size_t>(n)) {
        if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            // Chebyshev-based initial guess, then Newton on P_n.
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) < 1e-15) break;
            }
            const auto lo = static_cast<std::size_t>(i);
            const auto hi = static_cast<std::size_t>(n - 1 - i);
            nodes_[lo] = mid - half * z;
            nodes_[hi] = mid + half * z;
            weights_[lo] = 2.0 * half / ((1.0 - z * z) * pp * pp);
            weights_[hi] = weights_[lo];
        }
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
        return s;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

} // namespace flexsim
