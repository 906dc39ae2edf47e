#include "densedisc/denseset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "densedisc/errors.hpp"

namespace densedisc {

DenseEnumeration::DenseEnumeration(std::vector<CoordBox> box, int level_cap)
    : box_(std::move(box)), cap_(level_cap) {
  if (box_.empty()) throw ConfigError("dense set box has no coordinates");
  for (const auto& b : box_)
    if (!(b.re_lo < b.re_hi) || !(b.im_lo < b.im_hi)) throw ConfigError("dense set box is degenerate");
}

std::uint64_t DenseEnumeration::count_through_level(std::size_t m, int l) {
  if (l < 0) return 0;
  if (l == 0) return 1;
  const double side = std::ldexp(1.0, l) + 1;
  return static_cast<std::uint64_t>(std::pow(side, 2.0 * double(m)));
}

void DenseEnumeration::fill_level() {
  ++level_;
  if (cap_ >= 0 && level_ > cap_) throw ConfigError("dense set exhausted at the level cap");
  if (level_ > 20) throw ConfigError("dense set level too deep");
  const std::size_t dims = 2 * box_.size();
  pending_.clear();
  pos_ = 0;
  if (level_ == 0) {
    pending_.push_back(std::vector<std::uint32_t>(dims, 0));
    return;
  }
  const std::uint32_t top = 1u << level_;
  const std::uint32_t mid = top / 2;
  std::vector<std::uint32_t> idx(dims, 0);
  while (true) {
    bool fresh;
    if (level_ == 1) {
      fresh = std::any_of(idx.begin(), idx.end(), [&](auto v) { return v != mid; });
    } else {
      fresh = std::any_of(idx.begin(), idx.end(), [](auto v) { return v % 2 == 1; });
    }
    if (fresh) pending_.push_back(idx);
    std::size_t d = dims;
    while (d > 0 && idx[d - 1] == top) idx[--d] = 0;
    if (d == 0) break;
    ++idx[d - 1];
  }
  auto ring = [&](const std::vector<std::uint32_t>& v) {
    std::uint32_t r = 0;
    for (auto x : v) r = std::max(r, x > mid ? x - mid : mid - x);
    return r;
  };
  std::stable_sort(pending_.begin(), pending_.end(),
                   [&](const auto& a, const auto& b) { return ring(a) < ring(b); });
}

Point DenseEnumeration::next() {
  while (level_ < 0 || pos_ >= pending_.size()) fill_level();
  const auto& idx = pending_[pos_++];
  Point p(box_.size());
  for (std::size_t i = 0; i < box_.size(); ++i) {
    const auto& b = box_[i];
    if (level_ == 0) {
      p[i] = cplx(0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi));
    } else {
      p[i] = cplx(b.re_lo + (b.re_hi - b.re_lo) * std::ldexp(double(idx[2 * i]), -level_),
                  b.im_lo + (b.im_hi - b.im_lo) * std::ldexp(double(idx[2 * i + 1]), -level_));
    }
  }
  ++emitted_;
  return p;
}

double coverage_radius(std::span<const Point> points, std::span<const CoordBox> box, double probe_step) {
  if (points.empty()) throw ConfigError("coverage_radius: empty point list");
  if (box.empty()) throw ConfigError("coverage_radius: empty box");
  if (!(probe_step > 0)) throw ConfigError("coverage_radius: probe step must be positive");
  for (const auto& p : points)
    if (p.size() != box.size()) throw ConfigError("coverage_radius: dimension mismatch");

  const std::size_t dims = 2 * box.size();
  std::vector<double> lo(dims), hi(dims);
  std::vector<std::size_t> count(dims);
  for (std::size_t i = 0; i < box.size(); ++i) {
    lo[2 * i] = box[i].re_lo;
    hi[2 * i] = box[i].re_hi;
    lo[2 * i + 1] = box[i].im_lo;
    hi[2 * i + 1] = box[i].im_hi;
  }
  for (std::size_t d = 0; d < dims; ++d)
    count[d] = static_cast<std::size_t>(std::ceil((hi[d] - lo[d]) / probe_step - 1e-12)) + 1;

  std::vector<double> flat;  // points as real vectors
  for (const auto& p : points)
    for (const auto& x : p) {
      flat.push_back(x.real());
      flat.push_back(x.imag());
    }

  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> probe(dims);
  double worst = 0;
  while (true) {
    for (std::size_t d = 0; d < dims; ++d)
      probe[d] = count[d] == 1 ? lo[d] : lo[d] + (hi[d] - lo[d]) * double(idx[d]) / double(count[d] - 1);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size() && best > worst; ++k) {
      double s = 0;
      for (std::size_t d = 0; d < dims; ++d) {
        const double t = flat[k * dims + d] - probe[d];
        s += t * t;
      }
      best = std::min(best, s);
    }
    worst = std::max(worst, best);
    std::size_t d = dims;
    while (d > 0 && idx[d - 1] + 1 == count[d - 1]) idx[--d] = 0;
    if (d == 0) break;
    ++idx[d - 1];
  }
  return std::sqrt(worst);
}

}  // namespace densedisc
