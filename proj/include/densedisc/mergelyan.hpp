#pragma once

#include <vector>

#include "densedisc/errors.hpp"
#include "densedisc/polymap.hpp"

namespace densedisc {

// Path t in [1, 2] -> C^m from the junction value gamma(1) to the target gamma(2).
//
// A straight path has a corner at the junction, where it meets the disc data,
// and that corner limits polynomial approximation on the disc-plus-segment set
// to roughly degree^-1/2. A jet path instead continues the Taylor polynomial of
// the disc data at z = 1 up to `order` and then bends to the target with a
// (t-1)^(order+1) term. Both paths are exact at t = 1.
class SegmentPath {
 public:
  static SegmentPath straight(Point from, Point to);
  static SegmentPath jet(std::vector<Point> taylor, Point to);

  Point operator()(double t) const;
  const Point& start() const { return from_; }
  const Point& end() const { return to_; }
  std::size_t dim() const { return to_.size(); }
  bool is_straight() const { return taylor_.empty(); }

 private:
  Point from_, to_;
  std::vector<Point> taylor_;  // Taylor coefficients in powers of (t - 1)
  Point bend_;                 // coefficient of (t - 1)^(order + 1)
};

SegmentPath make_path(const Point& from, const Point& to);

// Taylor coefficients of z -> f(lambda z) at z = 1 up to the given order.
std::vector<Point> junction_jet(const PolyMap& f, double lambda, int order);

// Data on K = closed unit disc plus [1, 2]: z -> f(lambda z) on the disc and
// the path on the segment.
struct StageData {
  PolyMap disc_part;
  double lambda;
  SegmentPath path;

  // jet_order < 0 gives the straight path.
  static StageData make(const PolyMap& f, double lambda, const Point& target, int jet_order);

  Point junction() const { return disc_part(cplx(lambda, 0)); }
  Point operator()(cplx z) const;  // z in K
  std::size_t dim() const { return disc_part.dim(); }
};

bool in_K(cplx z, double tol = 1e-12);

struct ApproxRequest {
  StageData data;
  double err_target;
  NodeSet interp;  // nodes in K; must contain 2 with target path(2)
  int max_degree = 300;
  int fit_density = 1;  // multiplies the number of fit samples
};

// Polynomial on K in the Arnoldi basis of the fit samples plus a Newton-form
// interpolation correction. Evaluation is stable on all of K.
class KPolynomial {
 public:
  Point operator()(cplx z) const;
  int degree() const;
  std::size_t dim() const { return coef_.size(); }
  // Monomial coefficients; only well conditioned for moderate degree.
  PolyMap to_polymap() const;

 private:
  friend struct KFitter;
  std::vector<std::vector<cplx>> hess_;  // hess_[k] = column k, length k + 2
  std::vector<std::vector<cplx>> coef_;  // per coordinate, length degree + 1
  std::vector<NewtonInterpolant> corr_;  // per coordinate
};

struct ApproxResult {
  KPolynomial g;
  double error = 0;      // max error on the validation samples
  double fit_error = 0;  // max least-squares residual on the fit samples
  double correction_norm = 0;
  int degree = 0;
};

class ApproxFailure : public ConvergenceError {
 public:
  ApproxFailure(const std::string& what, double best, int best_degree)
      : ConvergenceError(what, best), degree_(best_degree) {}
  int best_degree() const { return degree_; }

 private:
  int degree_;
};

// Least-squares fit on K with adaptive degree (fit error <= err/2), exact
// interpolation at the request nodes, validation on a twice finer sample set.
// Throws ApproxFailure if max_degree is reached, ConfigError on bad nodes.
ApproxResult approximate_on_K(const ApproxRequest& req);

}  // namespace densedisc
