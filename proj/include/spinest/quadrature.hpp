#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spinest {

// Gauss-Legendre rule on [-1, 1]. Exact for polynomials of degree
// <= 2 * node_count - 1.
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t node_count) {
    if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
    nodes_.resize(node_count);
    weights_.resize(node_count);
    compute(node_count);
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      acc += weights_[i] * f(nodes_[i]);
    }
    return acc;
  }

 private:
  void compute(std::size_t n) {
    // Newton iteration from the Chebyshev-like initial guess; only the
    // lower half is computed, the rest follows by symmetry.
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
      double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace spinest
