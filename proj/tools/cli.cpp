#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>

#include "densedisc/artifact.hpp"
#include "densedisc/errors.hpp"

namespace densedisc {

namespace fs = std::filesystem;

namespace {

int construct(const std::string& config, const std::string& outdir, bool stage_maps, std::ostream& out,
              std::ostream& err) {
  RunArtifact art;
  try {
    art.config = config_from_json(read_json_file(config));
  } catch (const ArtifactMissing& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  int code = 0;
  try {
    RunResult res = run(art.config);
    art.certificates = std::move(res.certificates);
    art.final_map = std::move(res.final_map);
    if (stage_maps) art.stage_maps = std::move(res.stage_maps);
    out << "constructed " << art.certificates.size() << " stages, final degree " << art.final_map.degree() << '\n';
  } catch (const RunFailure& e) {
    const RunResult& res = e.partial();
    art.certificates = res.certificates;
    art.final_map = res.final_map;
    if (stage_maps) art.stage_maps = res.stage_maps;
    art.failure = json{{"stage", res.certificates.size()}, {"error", e.what()}, {"attempts", e.attempts()}};
    err << e.what() << '\n';
    for (const auto& a : e.attempts()) err << "  " << a << '\n';
    code = 1;
  }
  write_run(outdir, art);
  return code;
}

int verify(const std::string& dir, std::ostream& out, std::ostream& err) {
  RunArtifact art;
  try {
    art = load_run(dir);
  } catch (const ArtifactMissing& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "malformed run: " << e.what() << '\n';
    return 2;
  }
  const VerificationReport rep = verify_certificates(art.final_map, art.certificates, art.config, art.stage_maps);
  bool ok = rep.all_pass();
  for (const auto& f : rep.failures())
    err << "FAIL stage " << f.n << " " << f.condition << ": " << f.detail << '\n';
  if (art.failure) {
    err << "run stopped early: " << art.failure->value("error", std::string()) << '\n';
    ok = false;
  }
  if (static_cast<int>(art.certificates.size()) != art.config.stages && !art.failure) {
    err << "run has " << art.certificates.size() << " of " << art.config.stages << " stages\n";
    ok = false;
  }
  out << (ok ? "verified" : "verification failed") << ": " << art.certificates.size() << " stages, "
      << rep.items.size() << " checks\n";
  return ok ? 0 : 1;
}

int audit(const std::string& dir, double probe_step, std::ostream& out, std::ostream& err) {
  try {
    const RunArtifact art = load_run(dir);
    const AuditReport rep = audit_run(art, probe_step);
    out << "stages " << rep.stages << '\n'
        << "coverage_radius " << shortest(rep.coverage_radius) << '\n'
        << "max_residual " << shortest(rep.max_residual) << '\n'
        << "max_node_modulus " << shortest(rep.max_node_modulus) << '\n'
        << "nodes_in_disc " << (rep.nodes_in_disc ? "true" : "false") << '\n';
    return 0;
  } catch (const ArtifactMissing& e) {
    err << e.what() << '\n';
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
  }
  return 2;
}

int sample(const std::string& dir, std::size_t count, double radius, const std::string& file, std::ostream& err) {
  if (!(radius > 0 && radius < 1)) {
    err << "--radius must lie in (0, 1)\n";
    return 2;
  }
  RunArtifact art;
  try {
    art = load_run(dir);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
  std::ofstream csv(file, std::ios::binary);
  if (!csv) {
    err << "cannot write " << file << '\n';
    return 2;
  }
  csv << "z_re,z_im";
  for (std::size_t i = 1; i <= art.final_map.dim(); ++i) csv << ",F" << i << "_re,F" << i << "_im";
  csv << '\n';
  for (const cplx z : disc_samples(count, radius)) {
    csv << shortest(z.real()) << ',' << shortest(z.imag());
    for (const cplx v : art.final_map(z)) csv << ',' << shortest(v.real()) << ',' << shortest(v.imag());
    csv << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polynomial approximation of holomorphic discs with dense images"};
  app.require_subcommand(1);

  std::string config, outdir, rundir, csvfile;
  bool stage_maps = false;
  double probe = 0.05, radius = 0.5;
  std::size_t count = 1000;

  auto* c = app.add_subcommand("construct", "run the stage-wise construction");
  c->add_option("--config", config, "config.json")->required();
  c->add_option("--out", outdir, "run directory")->required();
  c->add_flag("--stage-maps", stage_maps, "also write stages/f_<n>.map");

  auto* v = app.add_subcommand("verify", "recheck every certificate of a run");
  v->add_option("--run", rundir, "run directory")->required();

  auto* a = app.add_subcommand("audit", "coverage and residual summary of a run");
  a->add_option("--run", rundir, "run directory")->required();
  a->add_option("--probe-step", probe, "probe grid step")->check(CLI::PositiveNumber);

  auto* s = app.add_subcommand("sample", "evaluate the final map on a disc");
  s->add_option("--run", rundir, "run directory")->required();
  s->add_option("--count", count, "number of points")->check(CLI::PositiveNumber);
  s->add_option("--radius", radius, "disc radius in (0, 1)");
  s->add_option("--out", csvfile, "csv file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (*c) return construct(config, outdir, stage_maps, out, err);
    if (*v) return verify(rundir, out, err);
    if (*a) return audit(rundir, probe, out, err);
    if (*s) return sample(rundir, count, radius, csvfile, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace densedisc
