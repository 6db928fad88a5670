// Command line driver for the offline / online reduced-order pipeline.
//
//   sbmrom offline|online|convergence|report --config run.json
//          [--seed N] [--modes 2,5,10] [--out DIR]

#include <sbmrom/io.hpp>
#include <sbmrom/pipeline.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace {

struct Overrides {
  std::string config;
  std::optional<unsigned long long> seed;
  std::vector<int> modes;
  std::string out;
};

sbmrom::RunConfig load(const Overrides& o) {
  sbmrom::RunConfig c = sbmrom::RunConfig::from_file(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.modes.empty()) c.modes = o.modes;
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "run configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override the training seed");
  cmd->add_option("--modes", o.modes, "override the mode counts, e.g. 2,5,10")->delimiter(',');
  cmd->add_option("--out", o.out, "override the output directory");
}

int cmd_offline(const sbmrom::RunConfig& c) {
  const sbmrom::BackgroundMesh mesh(c.box, c.h);
  std::printf("offline: %s, %d nodes, %d training samples\n", sbmrom::to_string(c.experiment).c_str(),
              mesh.num_nodes(), c.training_samples);
  const sbmrom::OfflineArtifacts art = sbmrom::offline(c, mesh);
  sbmrom::save_offline(c.output_dir, art);
  std::ofstream(c.output_dir / "config.json") << c.to_json() << '\n';
  double total = 0.0;
  for (const auto& s : art.log) total += s.timings.total();
  std::printf("  mean FOM time %.4e s, numerical rank %d, basis size %d\n",
              total / static_cast<double>(art.log.size()), art.basis.rank, art.basis.size());
  std::printf("  artifacts written to %s\n", c.output_dir.string().c_str());
  return 0;
}

int cmd_online(const sbmrom::RunConfig& c) {
  const sbmrom::BackgroundMesh mesh(c.box, c.h);
  const sbmrom::OfflineArtifacts art = sbmrom::load_offline(c.output_dir, mesh);
  const std::vector<double> tests = sbmrom::test_parameters(c, art);
  const sbmrom::OnlineResult result = sbmrom::online(c, mesh, art, c.modes, tests);
  sbmrom::save_online(c.output_dir, result);
  std::printf("%6s %14s %14s %12s %10s\n", "modes", "proj. error", "ROM error", "online [s]",
              "speedup");
  for (const auto& r : result.rows) {
    if (!r.ok) {
      std::printf("%6d   (exceeds basis rank)\n", r.modes);
      continue;
    }
    std::printf("%6d %14.5e %14.5e %12.4e %10.3f\n", r.modes, r.mean_projection_error,
                r.mean_rom_error, r.online_seconds, r.speedup());
  }
  return 0;
}

int cmd_report(const sbmrom::RunConfig& c) {
  const sbmrom::BackgroundMesh mesh(c.box, c.h);
  const sbmrom::OfflineArtifacts art = sbmrom::load_offline(c.output_dir, mesh);
  const auto rows = sbmrom::load_report_rows(c.output_dir);
  sbmrom::write_tables(c.output_dir, art.basis, rows);
  const auto ratios = sbmrom::write_vtk_triples(c, mesh, art, c.output_dir);
  std::printf("wrote errors.csv, eigdecay.csv, timing.csv and %zu VTK triples to %s\n",
              ratios.size(), c.output_dir.string().c_str());
  return 0;
}

int cmd_convergence(const sbmrom::RunConfig& c) {
  const auto rows = sbmrom::run_convergence(c);
  std::printf("%10s %8s %14s %8s\n", "h", "nodes", "L2 error", "rate");
  for (const auto& r : rows) {
    if (std::isnan(r.rate)) {
      std::printf("%10.4f %8d %14.5e %8s\n", r.h, r.nodes, r.l2_error, "-");
    } else {
      std::printf("%10.4f %8d %14.5e %8.3f\n", r.h, r.nodes, r.l2_error, r.rate);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifted boundary FEM with a POD-Galerkin reduced order model"};
  app.require_subcommand(1);

  Overrides o;
  CLI::App* offline = app.add_subcommand("offline", "snapshot sweep and POD basis");
  CLI::App* online = app.add_subcommand("online", "reduced solves on seeded test parameters");
  CLI::App* convergence = app.add_subcommand("convergence", "manufactured-solution study");
  CLI::App* report = app.add_subcommand("report", "error, eigenvalue and timing tables + VTK");
  for (CLI::App* cmd : {offline, online, convergence, report}) add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const sbmrom::RunConfig config = load(o);
    if (offline->parsed()) return cmd_offline(config);
    if (online->parsed()) return cmd_online(config);
    if (convergence->parsed()) return cmd_convergence(config);
    if (report->parsed()) return cmd_report(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
