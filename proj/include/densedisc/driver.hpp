#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "densedisc/denseset.hpp"
#include "densedisc/polymap.hpp"

namespace densedisc {

// How a stage produces f_{n+1}, tried in the configured order.
//  attained: s_{n+1} already has a preimage under f_n in the disc; f_{n+1} = f_n
//            up to the interpolation correction.
//  finger:   approximate on the disc plus [1, 2], then compose with the
//            conformal map of the disc-with-finger domain.
//  direct:   add a correction peaked at a new node just outside Delta_{r_n}.
enum class Route { attained, finger, direct };

const char* route_name(Route r);
Route route_from_name(const std::string& s);

struct Tolerances {
  double interp_residual = 1e-8;
  double sup_eta = 1e-3;
  double gap_margin = 0.5;  // aim for this fraction of the per-stage gap budget
  double node_separation = 1e-4;
  double finger_min_delta = 0.25;
  int jet_order = 5;
  int retry_budget = 40;
  int zipper_resolution = 512;
  int approx_max_degree = 200;
  int taylor_max_degree = 4096;
};

struct RunConfig {
  std::size_t m = 1;
  PolyMap seed_map = PolyMap::zero(1);
  double epsilon = 0.1;
  double r = 0.5;
  int stages = 1;
  std::vector<CoordBox> box{CoordBox{}};
  int level_cap = -1;
  int degree_cap = 4096;
  Tolerances tol;
  std::vector<Route> routes{Route::attained, Route::direct, Route::finger};

  void validate() const;  // throws ConfigError
  std::vector<Point> targets() const;  // s_1, ..., s_N
};

struct StageState {
  int n = 0;
  PolyMap f = PolyMap::zero(1);
  double r = 0.5;
  std::vector<cplx> nodes;     // a_{j,n}, j = 1..n
  std::vector<Point> targets;  // s_j
};

struct StageCertificate {
  int n = 0;
  Route route = Route::direct;
  double lambda = 1;
  int k = 0;
  double err = 0;    // 2^-k for the finger route, 0 otherwise
  double delta = 0;  // finger width, 0 when no finger is used
  double r_n = 0;
  double r_next = 0;
  double sup_gap = 0;
  double gap_bound = 0;  // 2^-(n+1) epsilon
  int degree = 0;
  int trials = 0;
  std::vector<cplx> nodes;  // a_{j,n+1}, j = 1..n+1
  std::vector<double> drifts;
  cplx new_node = 0;
  Point target;
  std::vector<double> residuals;
};

struct StageOutcome {
  StageState next;
  StageCertificate cert;
};

class StageFailure : public std::runtime_error {
 public:
  StageFailure(const std::string& what, std::vector<std::string> attempts)
      : std::runtime_error(what), attempts_(std::move(attempts)) {}
  const std::vector<std::string>& attempts() const { return attempts_; }

 private:
  std::vector<std::string> attempts_;
};

StageOutcome run_stage(const StageState& state, const Point& target, const RunConfig& cfg);

struct RunResult {
  PolyMap final_map = PolyMap::zero(1);
  std::vector<StageCertificate> certificates;
  std::vector<PolyMap> stage_maps;  // f_0, ..., f_N
};

class RunFailure : public std::runtime_error {
 public:
  RunFailure(const std::string& what, RunResult partial, std::vector<std::string> attempts)
      : std::runtime_error(what), partial_(std::move(partial)), attempts_(std::move(attempts)) {}
  const RunResult& partial() const { return partial_; }
  const std::vector<std::string>& attempts() const { return attempts_; }

 private:
  RunResult partial_;
  std::vector<std::string> attempts_;
};

RunResult run(const RunConfig& cfg);

struct CheckItem {
  int n;                  // stage, or -1 for run-level checks
  std::string condition;  // "(2)", "(3)", "(4)", "(5)", "targets", "sum", "final"
  bool pass;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckItem> items;
  bool all_pass() const;
  std::vector<CheckItem> failures() const;
};

// Recomputes every certificate inequality. Stage maps, when given
// (f_0..f_N), allow the sup gaps and intermediate residuals to be
// re-evaluated; otherwise the recorded gaps are checked against their bounds.
VerificationReport verify_certificates(const PolyMap& final_map, std::span<const StageCertificate> certs,
                                       const RunConfig& cfg, std::span<const PolyMap> stage_maps = {});

}  // namespace densedisc
