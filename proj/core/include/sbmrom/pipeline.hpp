#pragma once

#include <sbmrom/fom.hpp>
#include <sbmrom/pod.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sbmrom {

enum class Experiment { RectYCenter, RectAspect, DiscConvergence };

std::string to_string(Experiment experiment);

/// Run configuration, read from a single JSON document.
struct RunConfig {
  Experiment experiment = Experiment::RectYCenter;
  Box box{-2.0, 2.0, -1.0, 1.0};
  double h = 0.035;
  ParameterRange mu_range{-0.5, 0.5};
  int training_samples = 400;
  int test_samples = 50;
  std::vector<int> modes{2, 5, 10, 20, 30, 40, 50, 100, 200, 300};
  double alpha = 4.0;
  int quadrature_order = kDefaultQuadratureOrder;
  SolverKind solver = SolverKind::Cholesky;
  unsigned long long seed = 1;
  /// Seed of the test-sample stream; seed + 1 when absent.
  std::optional<unsigned long long> test_seed;
  std::filesystem::path output_dir = "out";
  int threads = 1;
  /// Parameter values exported as FOM / ROM / |error| VTK triples.
  std::vector<double> vtk_mu;
  int vtk_modes = 10;
  /// disc_convergence only.
  std::vector<double> convergence_h{0.14, 0.07, 0.035};
  Point disc_center{0.0, 0.0};
  double disc_radius = 0.5;

  /// Defaults of one of the reference experiments.
  static RunConfig preset(Experiment experiment);
  static RunConfig from_json(const std::string& text);
  static RunConfig from_file(const std::filesystem::path& path);
  std::string to_json() const;

  /// Throws PreconditionError on inconsistent settings.
  void validate() const;

  EmbeddedShape shape() const;
  ProblemData problem() const;
  unsigned long long effective_test_seed() const { return test_seed.value_or(seed + 1); }
};

/// `count` parameters drawn uniformly from `range` with a seeded generator.
/// Values listed in `exclude` are redrawn.
std::vector<double> sample_parameters(const ParameterRange& range, int count,
                                      unsigned long long seed,
                                      const std::vector<double>& exclude = {});

struct OfflineSample {
  double mu = 0.0;
  FomTimings timings;
  double residual = 0.0;
};

struct OfflineArtifacts {
  SnapshotSet snapshots;
  PodBasis basis;
  std::vector<OfflineSample> log;
};

/// Snapshot sweep over seeded training parameters followed by POD. Snapshots
/// are computed on `config.threads` worker threads.
OfflineArtifacts offline(const RunConfig& config, const BackgroundMesh& mesh);

/// Writes snapshots.bin, basis.bin, eigenvalues.csv and offline_log.csv.
void save_offline(const std::filesystem::path& dir, const OfflineArtifacts& artifacts);
OfflineArtifacts load_offline(const std::filesystem::path& dir, const BackgroundMesh& mesh);

struct SampleResult {
  double mu = 0.0;
  int modes = 0;
  bool ok = false;
  std::string error;
  double projection_error = 0.0;
  double rom_error = 0.0;
  double assembly_seconds = 0.0;    ///< classification + full-order assembly
  double projection_seconds = 0.0;
  double reduced_solve_seconds = 0.0;
  double fom_seconds = 0.0;         ///< classification + assembly + full-order solve

  double online_seconds() const {
    return assembly_seconds + projection_seconds + reduced_solve_seconds;
  }
};

struct ReportRow {
  int modes = 0;
  bool ok = false;
  double mean_projection_error = 0.0;
  double mean_rom_error = 0.0;
  double online_seconds = 0.0;
  double fom_seconds = 0.0;

  double speedup() const { return fom_seconds / online_seconds; }
  /// (t_FOM - t_online) / t_FOM in percent.
  double savings_percent() const { return 100.0 * (fom_seconds - online_seconds) / fom_seconds; }
};

struct OnlineResult {
  std::vector<double> test_parameters;
  std::vector<SampleResult> samples;
  std::vector<ReportRow> rows;
};

/// Online sweep: for every test parameter, one reference FOM solve and, per
/// mode count, assembly + projection + reduced solve. Runs single-threaded so
/// the timings are comparable.
OnlineResult online(const RunConfig& config, const BackgroundMesh& mesh,
                    const OfflineArtifacts& artifacts, const std::vector<int>& modes,
                    const std::vector<double>& test_parameters);

/// Test parameters for `artifacts`, disjoint from the training set.
std::vector<double> test_parameters(const RunConfig& config, const OfflineArtifacts& artifacts);

void save_online(const std::filesystem::path& dir, const OnlineResult& result);
std::vector<ReportRow> load_report_rows(const std::filesystem::path& dir);

/// errors.csv, eigdecay.csv and timing.csv.
void write_tables(const std::filesystem::path& dir, const PodBasis& basis,
                  const std::vector<ReportRow>& rows);

/// fom_<k>.vtk, rom_<k>.vtk and error_<k>.vtk per exported parameter. Returns
/// the max |error| / max |FOM| ratio for each exported parameter.
std::vector<double> write_vtk_triples(const RunConfig& config, const BackgroundMesh& mesh,
                                      const OfflineArtifacts& artifacts,
                                      const std::filesystem::path& dir);

/// Writes convergence.csv for the disc manufactured-solution study.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config);

}  // namespace sbmrom
