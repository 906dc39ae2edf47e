#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "densedisc/driver.hpp"

namespace densedisc {

using json = nlohmann::json;

class ArtifactMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const PolyMap& p);
PolyMap polymap_from_json(const json& j);

json to_json(const RunConfig& cfg);
RunConfig config_from_json(const json& j);  // throws ConfigError on schema violations

json to_json(const StageCertificate& c);
StageCertificate certificate_from_json(const json& j);

// Run directory layout: config.json, certificates.json, final.map, optional
// stages/f_<n>.map, and failure.json when the run stopped early.
struct RunArtifact {
  RunConfig config;
  std::vector<StageCertificate> certificates;
  PolyMap final_map = PolyMap::zero(1);
  std::vector<PolyMap> stage_maps;  // empty unless written
  std::optional<json> failure;
};

void write_run(const std::filesystem::path& dir, const RunArtifact& art);
RunArtifact load_run(const std::filesystem::path& dir);  // throws ArtifactMissing, ConfigError

json read_json_file(const std::filesystem::path& p);  // throws ArtifactMissing, ConfigError

struct AuditReport {
  std::size_t stages = 0;
  double coverage_radius = 0;
  double max_residual = 0;
  double max_node_modulus = 0;
  bool nodes_in_disc = true;
};

AuditReport audit_run(const RunArtifact& art, double probe_step);

// `count` low-discrepancy points of the disc of the given radius (golden-angle
// spiral with equal-area radii).
std::vector<cplx> disc_samples(std::size_t count, double radius);

std::string shortest(double x);  // shortest decimal that round-trips

}  // namespace densedisc
