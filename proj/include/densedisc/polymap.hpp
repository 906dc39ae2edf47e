#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace densedisc {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;  // a point of C^m

double norm(const Point& v);  // Euclidean norm on C^m
double distance(const Point& a, const Point& b);

// Polynomial map C -> C^m stored as monomial coefficients per coordinate.
// Exact trailing zeros are stripped; the zero polynomial is the list {0}.
class PolyMap {
 public:
  explicit PolyMap(std::vector<std::vector<cplx>> coords);

  static PolyMap zero(std::size_t m);
  static PolyMap constant(const Point& c);

  std::size_t dim() const { return coords_.size(); }
  int degree() const;
  const std::vector<cplx>& coord(std::size_t i) const { return coords_[i]; }
  const std::vector<std::vector<cplx>>& coords() const { return coords_; }

  Point operator()(cplx z) const;
  cplx eval_coord(std::size_t i, cplx z) const;

  PolyMap operator+(const PolyMap& o) const;
  PolyMap operator-(const PolyMap& o) const;
  bool operator==(const PolyMap& o) const = default;

 private:
  std::vector<std::vector<cplx>> coords_;
};

Point eval(const PolyMap& p, cplx z);

// Horner evaluation of a single coefficient list.
cplx horner(std::span<const cplx> c, cplx z);

struct SupNormOptions {
  double eta = 1e-3;        // minimum relative inflation of the sampled maximum
  std::size_t samples = 0;  // 0: chosen from the degree
};

// Upper bound for max_{|z|<=radius} |p(z) - q(z)|: the maximum over equispaced
// circle samples, inflated so that it dominates the true maximum.
double sup_norm(const PolyMap& p, const PolyMap& q, double radius, SupNormOptions opt = {});

// Samples actually used by sup_norm for a difference of the given degree.
std::size_t sup_norm_samples(int degree, std::size_t requested = 0);

using DiscMap = std::function<Point(cplx)>;

struct TaylorResult {
  PolyMap poly;
  double radius = 0;       // sampling radius
  double max_modulus = 0;  // max |h| over the samples
  int degree = 0;

  // Estimate of sup_{|z|<=inner} |h - poly| from the Cauchy bound on the
  // coefficients beyond the truncation degree.
  double tail(double inner) const;
};

// Degree-D Taylor polynomial of h recovered from samples on |z| = radius.
// samples == 0 picks 4(D+1); fewer than 4(D+1) samples is an error.
TaylorResult taylor_from_samples(const DiscMap& h, std::size_t m, double radius, int degree,
                                 std::size_t samples = 0);

// Interpolation data: distinct nodes in C with targets in C^m.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::vector<cplx> nodes, std::vector<Point> targets);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<cplx>& nodes() const { return nodes_; }
  const std::vector<Point>& targets() const { return targets_; }
  double min_separation() const;

 private:
  std::vector<cplx> nodes_;
  std::vector<Point> targets_;
};

// Newton-form interpolant of scalar data; stable to evaluate off the disc.
class NewtonInterpolant {
 public:
  NewtonInterpolant() = default;
  NewtonInterpolant(std::vector<cplx> nodes, std::vector<cplx> values);

  cplx operator()(cplx z) const;
  std::vector<cplx> monomial() const;
  bool empty() const { return nodes_.empty(); }

 private:
  std::vector<cplx> nodes_;
  std::vector<cplx> dd_;  // divided differences
};

struct Correction {
  PolyMap poly;
  double max_residual = 0;     // max_j |s_j - p(a_j)| before the correction
  double correction_norm = 0;  // sampled sup of the added polynomial on the closed disc
};

// p plus the interpolating polynomial of the residuals, so that the result
// hits every target exactly (up to rounding).
Correction lagrange_correct(const PolyMap& p, const NodeSet& ns);

// Like lagrange_correct, but the residual at node `peak` is corrected with the
// basis (z/a)^power * prod_{j != peak} (z - a_j)/(a - a_j), which is small on
// discs well inside |z| < |a|.
Correction peaked_lagrange_correct(const PolyMap& p, const NodeSet& ns, std::size_t peak,
                                   int power);

// All complex roots of sum c_k z^k (c nonzero at the top), Aberth iteration.
std::vector<cplx> polynomial_roots(std::span<const cplx> c);

}  // namespace densedisc
