#include "densedisc/artifact.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "densedisc/errors.hpp"

namespace densedisc {

namespace fs = std::filesystem;

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

double num(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
  return v;
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
  return j.get<int>();
}

cplx cfrom(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex number must be [re, im]");
  return {num(j[0], "real part"), num(j[1], "imaginary part")};
}

Point pfrom(const json& j) {
  if (!j.is_array()) throw ConfigError("point must be an array of [re, im]");
  Point p;
  for (const auto& x : j) p.push_back(cfrom(x));
  return p;
}

json pjson(const Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(cjson(x));
  return a;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s << '\n';
}

}  // namespace

std::string shortest(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

json to_json(const PolyMap& p) {
  json coords = json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) {
    json c = json::array();
    for (const auto& x : p.coord(i)) c.push_back(cjson(x));
    coords.push_back(c);
  }
  return json{{"m", p.dim()}, {"coords", coords}};
}

PolyMap polymap_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("map must be an object");
  const json& coords = need(j, "coords");
  if (!coords.is_array() || coords.empty()) throw ConfigError("coords must be a non-empty array");
  std::vector<std::vector<cplx>> out;
  for (const auto& c : coords) {
    if (!c.is_array() || c.empty()) throw ConfigError("each coordinate needs at least one coefficient");
    std::vector<cplx> v;
    for (const auto& x : c) v.push_back(cfrom(x));
    out.push_back(std::move(v));
  }
  if (j.contains("m") && integer(j["m"], "m") != static_cast<int>(out.size()))
    throw ConfigError("map m differs from the number of coordinates");
  return PolyMap(std::move(out));
}

json to_json(const RunConfig& cfg) {
  json box = json::array();
  for (const auto& b : cfg.box) box.push_back(json::array({json::array({b.re_lo, b.re_hi}), json::array({b.im_lo, b.im_hi})}));
  json routes = json::array();
  for (auto r : cfg.routes) routes.push_back(route_name(r));
  const Tolerances& t = cfg.tol;
  json seed = to_json(cfg.seed_map);
  seed.erase("m");
  return json{
      {"m", cfg.m},
      {"epsilon", cfg.epsilon},
      {"r", cfg.r},
      {"stages", cfg.stages},
      {"seed_map", seed},
      {"dense_set", {{"scheme", "dyadic-grid"}, {"box", box}, {"level_cap", cfg.level_cap}}},
      {"degree_cap", cfg.degree_cap},
      {"routes", routes},
      {"tolerances",
       {{"interp_residual", t.interp_residual},
        {"sup_eta", t.sup_eta},
        {"gap_margin", t.gap_margin},
        {"node_separation", t.node_separation},
        {"finger_min_delta", t.finger_min_delta},
        {"jet_order", t.jet_order},
        {"retry_budget", t.retry_budget},
        {"zipper_resolution", t.zipper_resolution},
        {"approx_max_degree", t.approx_max_degree},
        {"taylor_max_degree", t.taylor_max_degree}}},
  };
}

RunConfig config_from_json(const json& j) {
  only_keys(j, {"m", "epsilon", "r", "stages", "seed_map", "dense_set", "degree_cap", "routes", "tolerances"}, "config");
  RunConfig cfg;
  const int m = integer(need(j, "m"), "m");
  if (m < 1) throw ConfigError("m must be at least 1");
  cfg.m = static_cast<std::size_t>(m);
  cfg.epsilon = num(need(j, "epsilon"), "epsilon");
  cfg.r = num(need(j, "r"), "r");
  cfg.stages = integer(need(j, "stages"), "stages");
  const json& seed = need(j, "seed_map");
  only_keys(seed, {"coords", "m"}, "seed_map");
  cfg.seed_map = polymap_from_json(seed);

  const json& ds = need(j, "dense_set");
  only_keys(ds, {"scheme", "box", "level_cap"}, "dense_set");
  if (ds.contains("scheme") && ds["scheme"] != "dyadic-grid") throw ConfigError("unsupported dense_set scheme");
  const json& box = need(ds, "box");
  if (!box.is_array()) throw ConfigError("dense_set.box must be an array");
  cfg.box.clear();
  for (const auto& b : box) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_array() || b[0].size() != 2 || !b[1].is_array() || b[1].size() != 2)
      throw ConfigError("box entries must be [[re_lo, re_hi], [im_lo, im_hi]]");
    cfg.box.push_back(CoordBox{num(b[0][0], "box"), num(b[0][1], "box"), num(b[1][0], "box"), num(b[1][1], "box")});
  }
  cfg.level_cap = ds.contains("level_cap") ? integer(ds["level_cap"], "level_cap") : -1;
  if (j.contains("degree_cap")) cfg.degree_cap = integer(j["degree_cap"], "degree_cap");
  if (j.contains("routes")) {
    if (!j["routes"].is_array()) throw ConfigError("routes must be an array");
    cfg.routes.clear();
    for (const auto& r : j["routes"]) {
      if (!r.is_string()) throw ConfigError("route names must be strings");
      cfg.routes.push_back(route_from_name(r.get<std::string>()));
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, {"interp_residual", "sup_eta", "gap_margin", "node_separation", "finger_min_delta", "jet_order",
                  "retry_budget", "zipper_resolution", "approx_max_degree", "taylor_max_degree"},
              "tolerances");
    Tolerances& o = cfg.tol;
    if (t.contains("interp_residual")) o.interp_residual = num(t["interp_residual"], "interp_residual");
    if (t.contains("sup_eta")) o.sup_eta = num(t["sup_eta"], "sup_eta");
    if (t.contains("gap_margin")) o.gap_margin = num(t["gap_margin"], "gap_margin");
    if (t.contains("node_separation")) o.node_separation = num(t["node_separation"], "node_separation");
    if (t.contains("finger_min_delta")) o.finger_min_delta = num(t["finger_min_delta"], "finger_min_delta");
    if (t.contains("jet_order")) o.jet_order = integer(t["jet_order"], "jet_order");
    if (t.contains("retry_budget")) o.retry_budget = integer(t["retry_budget"], "retry_budget");
    if (t.contains("zipper_resolution")) o.zipper_resolution = integer(t["zipper_resolution"], "zipper_resolution");
    if (t.contains("approx_max_degree")) o.approx_max_degree = integer(t["approx_max_degree"], "approx_max_degree");
    if (t.contains("taylor_max_degree")) o.taylor_max_degree = integer(t["taylor_max_degree"], "taylor_max_degree");
  }
  cfg.validate();
  return cfg;
}

json to_json(const StageCertificate& c) {
  json nodes = json::array();
  for (const auto& a : c.nodes) nodes.push_back(cjson(a));
  return json{{"n", c.n},
              {"route", route_name(c.route)},
              {"lambda", c.lambda},
              {"k", c.k},
              {"err", c.err},
              {"delta", c.delta},
              {"r_n", c.r_n},
              {"r_next", c.r_next},
              {"sup_gap", c.sup_gap},
              {"gap_bound", c.gap_bound},
              {"degree", c.degree},
              {"trials", c.trials},
              {"nodes", nodes},
              {"drifts", c.drifts},
              {"new_node", cjson(c.new_node)},
              {"target", pjson(c.target)},
              {"residuals", c.residuals}};
}

StageCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("certificate must be an object");
  StageCertificate c;
  c.n = integer(need(j, "n"), "n");
  const json& route = need(j, "route");
  if (!route.is_string()) throw ConfigError("route must be a string");
  c.route = route_from_name(route.get<std::string>());
  c.lambda = num(need(j, "lambda"), "lambda");
  c.k = integer(need(j, "k"), "k");
  c.err = num(need(j, "err"), "err");
  c.delta = num(need(j, "delta"), "delta");
  c.r_n = num(need(j, "r_n"), "r_n");
  c.r_next = num(need(j, "r_next"), "r_next");
  c.sup_gap = num(need(j, "sup_gap"), "sup_gap");
  c.gap_bound = num(need(j, "gap_bound"), "gap_bound");
  c.degree = integer(need(j, "degree"), "degree");
  c.trials = integer(need(j, "trials"), "trials");
  for (const auto& a : need(j, "nodes")) c.nodes.push_back(cfrom(a));
  for (const auto& d : need(j, "drifts")) c.drifts.push_back(num(d, "drift"));
  c.new_node = cfrom(need(j, "new_node"));
  c.target = pfrom(need(j, "target"));
  for (const auto& d : need(j, "residuals")) c.residuals.push_back(num(d, "residual"));
  return c;
}

void write_run(const fs::path& dir, const RunArtifact& art) {
  fs::create_directories(dir);
  write_text(dir / "config.json", to_json(art.config).dump(2));
  json certs = json::array();
  for (const auto& c : art.certificates) certs.push_back(to_json(c));
  write_text(dir / "certificates.json", certs.dump(2));
  write_text(dir / "final.map", to_json(art.final_map).dump());
  if (!art.stage_maps.empty()) {
    fs::create_directories(dir / "stages");
    for (std::size_t n = 0; n < art.stage_maps.size(); ++n)
      write_text(dir / "stages" / ("f_" + std::to_string(n) + ".map"), to_json(art.stage_maps[n]).dump());
  }
  if (art.failure) write_text(dir / "failure.json", art.failure->dump(2));
  else fs::remove(dir / "failure.json");
}

json read_json_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ArtifactMissing("missing file " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

RunArtifact load_run(const fs::path& dir) {
  RunArtifact art;
  art.config = config_from_json(read_json_file(dir / "config.json"));
  const json certs = read_json_file(dir / "certificates.json");
  if (!certs.is_array()) throw ConfigError("certificates.json must be an array");
  for (const auto& c : certs) art.certificates.push_back(certificate_from_json(c));
  art.final_map = polymap_from_json(read_json_file(dir / "final.map"));
  if (fs::exists(dir / "stages")) {
    for (std::size_t n = 0;; ++n) {
      const fs::path p = dir / "stages" / ("f_" + std::to_string(n) + ".map");
      if (!fs::exists(p)) break;
      art.stage_maps.push_back(polymap_from_json(read_json_file(p)));
    }
  }
  if (fs::exists(dir / "failure.json")) art.failure = read_json_file(dir / "failure.json");
  return art;
}

AuditReport audit_run(const RunArtifact& art, double probe_step) {
  AuditReport rep;
  rep.stages = art.certificates.size();
  if (art.certificates.empty()) throw ConfigError("audit: run has no stages");
  std::vector<Point> targets;
  for (const auto& c : art.certificates) targets.push_back(c.target);
  rep.coverage_radius = coverage_radius(targets, art.config.box, probe_step);
  const auto& nodes = art.certificates.back().nodes;
  for (std::size_t j = 0; j < nodes.size() && j < targets.size(); ++j) {
    rep.max_residual = std::max(rep.max_residual, distance(art.final_map(nodes[j]), targets[j]));
    rep.max_node_modulus = std::max(rep.max_node_modulus, std::abs(nodes[j]));
    rep.nodes_in_disc = rep.nodes_in_disc && std::abs(nodes[j]) < 1;
  }
  return rep;
}

std::vector<cplx> disc_samples(std::size_t count, double radius) {
  const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
  std::vector<cplx> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::polar(radius * std::sqrt((double(i) + 0.5) / double(count)), golden * double(i)));
  return out;
}

}  // namespace densedisc
