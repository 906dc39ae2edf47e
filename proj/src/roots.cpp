#include <algorithm>
#include <cmath>
#include <numbers>

#include "densedisc/errors.hpp"
#include "densedisc/polymap.hpp"

namespace densedisc {

namespace {

// Newton step p(z)/p'(z); evaluated through the reversed polynomial when
// |z| > 1 so that Horner does not overflow or lose the small terms.
cplx newton_ratio(std::span<const cplx> c, cplx z) {
  const std::size_t d = c.size() - 1;
  if (std::abs(z) <= 1) {
    cplx p = 0, dp = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
    return p / dp;
  }
  const cplx w = 1.0 / z;
  cplx q = 0, dq = 0;  // q(w) = sum c_{d-k} w^k
  for (std::size_t k = 0; k <= d; ++k) {
    dq = dq * w + q;
    q = q * w + c[k];
  }
  // p = z^d q(w), p' = z^{d-1} (d q - w q')
  return z * q / (double(d) * q - w * dq);
}

}  // namespace

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  while (c.size() > 1 && c.back() == cplx(0)) c.pop_back();
  if (c.size() <= 1) return {};
  // roots at the origin
  std::size_t zeros = 0;
  while (c[zeros] == cplx(0)) ++zeros;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
  const std::size_t d = c.size() - 1;
  std::vector<cplx> z(d);
  if (d > 0) {
    // start on a circle whose radius is the geometric mean of the root moduli
    const double rad = std::pow(std::abs(c[0] / c[d]), 1.0 / double(d));
    for (std::size_t k = 0; k < d; ++k)
      z[k] = std::polar(rad, 2 * std::numbers::pi * (double(k) + 0.25) / double(d) + 0.4);
    std::vector<char> done(d, 0);
    for (int it = 0; it < 1000; ++it) {
      bool all = true;
      for (std::size_t k = 0; k < d; ++k) {
        if (done[k]) continue;
        const cplx n = newton_ratio(c, z[k]);
        cplx s = 0;
        for (std::size_t j = 0; j < d; ++j)
          if (j != k) s += 1.0 / (z[k] - z[j]);
        const cplx step = n / (1.0 - n * s);
        if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[k] -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z[k]))) done[k] = 1;
        else all = false;
      }
      if (all) break;
    }
  }
  std::vector<cplx> out(zeros, 0);
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

}  // namespace densedisc
