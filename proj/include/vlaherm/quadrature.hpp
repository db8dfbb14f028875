#pragma once

// Gauss-Legendre rules on [-1,1] and Legendre polynomial evaluation.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vlaherm {

// P_n(x) by the three-term recurrence.
inline double legendre_eval(int n, double x) {
  assert(n >= 0);
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= n; ++k) {
    double pn = ((2 * k - 1) * x * p - (k - 1) * pm1) / k;
    pm1 = p;
    p = pn;
  }
  return p;
}

// P_0..P_{n-1} at x, written to out[0..n-1].
inline void legendre_eval_all(int n, double x, double* out) {
  if (n <= 0) return;
  out[0] = 1.0;
  if (n == 1) return;
  out[1] = x;
  for (int k = 2; k < n; ++k)
    out[k] = ((2 * k - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / k;
}

// d/dx P_n(x), via (1-x^2) P_n' = n (P_{n-1} - x P_n).
inline double legendre_deriv(int n, double x) {
  if (n == 0) return 0.0;
  double om = 1.0 - x * x;
  if (std::abs(om) < 1e-12) {
    // endpoint values: P_n'(+-1) = (+-1)^{n-1} n(n+1)/2
    double s = (x > 0) ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0);
    return s * 0.5 * n * (n + 1);
  }
  return n * (legendre_eval(n - 1, x) - x * legendre_eval(n, x)) / om;
}

struct QuadratureRule {
  std::vector<double> nodes;    // in (-1,1), increasing
  std::vector<double> weights;  // positive, sum to 2
};

// n-point Gauss-Legendre rule, exact through degree 2n-1.
// Newton iteration from the Chebyshev-based initial guess.
inline QuadratureRule gauss_legendre(int n) {
  assert(n >= 1);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double f = legendre_eval(n, x);
      double d = legendre_deriv(n, x);
      double dx = f / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double d = legendre_deriv(n, x);
    double w = 2.0 / ((1.0 - x * x) * d * d);
    r.nodes[i] = x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = -x;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;  // kill the -0.0 from symmetry fill
  return r;
}

}  // namespace vlaherm
