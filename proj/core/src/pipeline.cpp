#include <sbmrom/io.hpp>
#include <sbmrom/pipeline.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace sbmrom {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;
namespace fs = std::filesystem;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "rect_ycenter") return Experiment::RectYCenter;
  if (name == "rect_aspect") return Experiment::RectAspect;
  if (name == "disc_convergence") return Experiment::DiscConvergence;
  throw PreconditionError("unknown experiment '" + name + "'");
}

std::string exact_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_csv(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::RectYCenter:
      return "rect_ycenter";
    case Experiment::RectAspect:
      return "rect_aspect";
    case Experiment::DiscConvergence:
      return "disc_convergence";
  }
  return "unknown";
}

RunConfig RunConfig::preset(Experiment experiment) {
  RunConfig c;
  c.experiment = experiment;
  switch (experiment) {
    case Experiment::RectYCenter:
      c.output_dir = "out/rect_ycenter";
      c.vtk_mu = {0.403, -0.015};
      break;
    case Experiment::RectAspect:
      c.box = {-0.7, 0.7, -0.7, 0.7};
      c.mu_range = {0.29, 6.67};
      c.output_dir = "out/rect_aspect";
      c.vtk_mu = {1.0, 4.0};
      break;
    case Experiment::DiscConvergence:
      c.output_dir = "out/disc_convergence";
      c.mu_range = {0.5, 0.5};
      break;
  }
  return c;
}

RunConfig RunConfig::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("invalid configuration JSON: ") + e.what());
  }
  require(doc.is_object(), "configuration must be a JSON object");
  require(doc.contains("experiment"), "configuration needs an \"experiment\" entry");
  RunConfig c = preset(experiment_from_string(doc.at("experiment").get<std::string>()));

  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "experiment") {
        continue;
      } else if (key == "box") {
        const auto v = value.get<std::vector<double>>();
        require(v.size() == 4, "\"box\" must be [xmin, xmax, ymin, ymax]");
        c.box = {v[0], v[1], v[2], v[3]};
      } else if (key == "h") {
        c.h = value.get<double>();
      } else if (key == "mu_range") {
        const auto v = value.get<std::vector<double>>();
        require(v.size() == 2, "\"mu_range\" must be [lo, hi]");
        c.mu_range = {v[0], v[1]};
      } else if (key == "training_samples") {
        c.training_samples = value.get<int>();
      } else if (key == "test_samples") {
        c.test_samples = value.get<int>();
      } else if (key == "modes") {
        c.modes = value.get<std::vector<int>>();
      } else if (key == "alpha") {
        c.alpha = value.get<double>();
      } else if (key == "quadrature_order") {
        c.quadrature_order = value.get<int>();
      } else if (key == "solver") {
        const auto s = value.get<std::string>();
        require(s == "cholesky" || s == "cg", "\"solver\" must be \"cholesky\" or \"cg\"");
        c.solver = s == "cg" ? SolverKind::ConjugateGradient : SolverKind::Cholesky;
      } else if (key == "seed") {
        c.seed = value.get<unsigned long long>();
      } else if (key == "test_seed") {
        c.test_seed = value.get<unsigned long long>();
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else if (key == "threads") {
        c.threads = value.get<int>();
      } else if (key == "vtk_mu") {
        c.vtk_mu = value.get<std::vector<double>>();
      } else if (key == "vtk_modes") {
        c.vtk_modes = value.get<int>();
      } else if (key == "convergence_h") {
        c.convergence_h = value.get<std::vector<double>>();
      } else if (key == "disc_center") {
        const auto v = value.get<std::vector<double>>();
        require(v.size() == 2, "\"disc_center\" must be [x, y]");
        c.disc_center = {v[0], v[1]};
      } else if (key == "disc_radius") {
        c.disc_radius = value.get<double>();
      } else {
        throw PreconditionError("unknown configuration key \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("invalid configuration value: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open configuration '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string RunConfig::to_json() const {
  json doc;
  doc["experiment"] = to_string(experiment);
  doc["box"] = {box.xmin, box.xmax, box.ymin, box.ymax};
  doc["h"] = h;
  doc["mu_range"] = {mu_range.lo, mu_range.hi};
  doc["training_samples"] = training_samples;
  doc["test_samples"] = test_samples;
  doc["modes"] = modes;
  doc["alpha"] = alpha;
  doc["quadrature_order"] = quadrature_order;
  doc["solver"] = solver == SolverKind::Cholesky ? "cholesky" : "cg";
  doc["seed"] = seed;
  if (test_seed) doc["test_seed"] = *test_seed;
  doc["output_dir"] = output_dir.string();
  doc["threads"] = threads;
  doc["vtk_mu"] = vtk_mu;
  doc["vtk_modes"] = vtk_modes;
  doc["convergence_h"] = convergence_h;
  doc["disc_center"] = {disc_center.x(), disc_center.y()};
  doc["disc_radius"] = disc_radius;
  return doc.dump(2);
}

void RunConfig::validate() const {
  require(box.width() > 0.0 && box.height() > 0.0, "background box is degenerate");
  require(h > 0.0 && h <= box.width() && h <= box.height(),
          "h must be positive and not exceed the box dimensions");
  require(mu_range.lo <= mu_range.hi, "mu_range is empty");
  require(training_samples >= 1, "training_samples must be at least 1");
  require(test_samples >= 1, "test_samples must be at least 1");
  require(!modes.empty(), "at least one mode count is required");
  for (int m : modes) require(m >= 1, "mode counts must be positive");
  require(training_samples >= *std::max_element(modes.begin(), modes.end()),
          "training_samples must be at least the largest requested mode count");
  require(alpha > 0.0, "alpha must be positive");
  require(quadrature_order >= 1 && quadrature_order <= 3, "quadrature_order must be 1, 2 or 3");
  require(threads >= 1, "threads must be at least 1");
  require(vtk_modes >= 1, "vtk_modes must be positive");

  const EmbeddedShape s = shape();
  const Eigen::Vector4d env = s.envelope();
  require(env[0] >= box.xmin + h && env[1] <= box.xmax - h && env[2] >= box.ymin + h &&
              env[3] <= box.ymax - h,
          "embedded shape leaves less than one element layer of clearance for some mu");
  for (double mu : vtk_mu) require(s.admissible(mu), "vtk_mu value outside mu_range");
  if (experiment == Experiment::DiscConvergence) {
    require(convergence_h.size() >= 3, "convergence_h needs at least three mesh sizes");
  }
}

EmbeddedShape RunConfig::shape() const {
  switch (experiment) {
    case Experiment::RectYCenter:
      return EmbeddedShape::rectangle_ycenter(mu_range);
    case Experiment::RectAspect:
      return EmbeddedShape::rectangle_aspect(
          mu_range, 0.2, Point(0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)));
    case Experiment::DiscConvergence:
      return EmbeddedShape::disc(disc_center, disc_radius);
  }
  throw Error("unreachable experiment");
}

ProblemData RunConfig::problem() const {
  ProblemData p;
  p.alpha = alpha;
  return p;
}

std::vector<double> sample_parameters(const ParameterRange& range, int count,
                                      unsigned long long seed,
                                      const std::vector<double>& exclude) {
  require(count >= 0, "sample count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(range.lo, range.hi);
  std::vector<double> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const double mu = range.width() > 0.0 ? dist(rng) : range.lo;
    if (range.width() > 0.0 &&
        (std::find(exclude.begin(), exclude.end(), mu) != exclude.end() ||
         std::find(out.begin(), out.end(), mu) != out.end())) {
      continue;
    }
    out.push_back(mu);
  }
  return out;
}

OfflineArtifacts offline(const RunConfig& config, const BackgroundMesh& mesh) {
  config.validate();
  const std::vector<double> training =
      sample_parameters(config.mu_range, config.training_samples, config.seed);
  const FullOrderModel fom(mesh, config.shape(), config.problem(), config.quadrature_order,
                           config.solver);

  OfflineArtifacts art;
  art.snapshots.S.resize(mesh.num_nodes(), config.training_samples);
  art.snapshots.parameters = training;
  art.snapshots.mass = std::make_shared<const SparseMatrix>(assemble_mass(mesh));
  art.log.resize(training.size());

  const int workers = std::min<int>(config.threads, static_cast<int>(training.size()));
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](int worker) {
    try {
      for (std::size_t k = worker; k < training.size(); k += workers) {
        FomTimings t;
        const FomSolution sol = fom.solve(training[k], &t);
        art.snapshots.S.col(static_cast<Eigen::Index>(k)) = sol.T;
        art.log[k] = {training[k], t, sol.residual};
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  art.basis = pod(art.snapshots);
  return art;
}

void save_offline(const fs::path& dir, const OfflineArtifacts& art) {
  fs::create_directories(dir);
  io::write_container(dir / "snapshots.bin", {art.snapshots.S, art.snapshots.parameters});
  io::write_container(dir / "basis.bin", {art.basis.modes, art.snapshots.parameters});

  std::ofstream eig = open_csv(dir / "eigenvalues.csv");
  eig << "index,eigenvalue,cumulative_energy\n";
  const double total = art.basis.eigenvalues.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < art.basis.eigenvalues.size(); ++i) {
    acc += art.basis.eigenvalues[i];
    eig << i + 1 << ',' << exact_number(art.basis.eigenvalues[i]) << ','
        << exact_number(total > 0.0 ? acc / total : 0.0) << '\n';
  }

  std::ofstream log = open_csv(dir / "offline_log.csv");
  log << "mu,classify_s,assemble_s,solve_s,residual\n";
  for (const OfflineSample& s : art.log) {
    log << exact_number(s.mu) << ',' << io::format_number(s.timings.classify) << ','
        << io::format_number(s.timings.assemble) << ',' << io::format_number(s.timings.solve)
        << ',' << io::format_number(s.residual) << '\n';
  }
}

OfflineArtifacts load_offline(const fs::path& dir, const BackgroundMesh& mesh) {
  OfflineArtifacts art;
  io::MatrixContainer snaps = io::read_container(dir / "snapshots.bin");
  io::MatrixContainer modes = io::read_container(dir / "basis.bin");
  if (snaps.data.rows() != mesh.num_nodes() || modes.data.rows() != mesh.num_nodes()) {
    throw PreconditionError("offline artifacts in '" + dir.string() +
                            "' were built on a different mesh");
  }
  art.snapshots.S = std::move(snaps.data);
  art.snapshots.parameters = std::move(snaps.parameters);
  art.snapshots.mass = std::make_shared<const SparseMatrix>(assemble_mass(mesh));
  art.basis.modes = std::move(modes.data);

  const auto rows = read_csv(dir / "eigenvalues.csv");
  art.basis.eigenvalues.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) art.basis.eigenvalues[i] = std::stod(rows[i].at(1));
  art.basis.rank = art.basis.size();
  return art;
}

std::vector<double> test_parameters(const RunConfig& config, const OfflineArtifacts& art) {
  return sample_parameters(config.mu_range, config.test_samples, config.effective_test_seed(),
                           art.snapshots.parameters);
}

OnlineResult online(const RunConfig& config, const BackgroundMesh& mesh,
                    const OfflineArtifacts& art, const std::vector<int>& modes,
                    const std::vector<double>& tests) {
  require(!modes.empty(), "no mode counts requested");
  require(!tests.empty(), "no test parameters");
  const FullOrderModel fom(mesh, config.shape(), config.problem(), config.quadrature_order,
                           config.solver);
  const SparseMatrix& mass = *art.snapshots.mass;

  OnlineResult result;
  result.test_parameters = tests;
  for (double mu : tests) {
    FomTimings fom_timings;
    const FomSolution reference = fom.solve(mu, &fom_timings);

    FomTimings assembly;
    const FomSystem system = fom.system(mu, &assembly);
    const double t_assembly = assembly.classify + assembly.assemble;

    for (int m : modes) {
      SampleResult s;
      s.mu = mu;
      s.modes = m;
      s.fom_seconds = fom_timings.total();
      s.assembly_seconds = t_assembly;
      if (m > art.basis.size()) {
        s.error = "requested " + std::to_string(m) + " modes, basis holds " +
                  std::to_string(art.basis.size());
        result.samples.push_back(s);
        continue;
      }
      try {
        auto start = Clock::now();
        const ReducedSystem reduced = project(system, art.basis, m);
        s.projection_seconds = seconds_since(start);
        start = Clock::now();
        const Vector a = solve_reduced(reduced);
        s.reduced_solve_seconds = seconds_since(start);
        const Vector rom = reconstruct(art.basis, a);
        s.rom_error = relative_l2_error(reference.T, rom, mass);
        s.projection_error = l2_projection_error(reference.T, art.basis, mass, m);
        s.ok = true;
      } catch (const Error& e) {
        s.error = e.what();
      }
      result.samples.push_back(s);
    }
  }

  for (int m : modes) {
    ReportRow row;
    row.modes = m;
    row.ok = true;
    int count = 0;
    for (const SampleResult& s : result.samples) {
      if (s.modes != m) continue;
      row.ok = row.ok && s.ok;
      row.mean_projection_error += s.projection_error;
      row.mean_rom_error += s.rom_error;
      row.online_seconds += s.online_seconds();
      row.fom_seconds += s.fom_seconds;
      ++count;
    }
    row.mean_projection_error /= count;
    row.mean_rom_error /= count;
    row.online_seconds /= count;
    row.fom_seconds /= count;
    if (!row.ok) {
      row.mean_projection_error = row.mean_rom_error = std::nan("");
    }
    result.rows.push_back(row);
  }
  return result;
}

void save_online(const fs::path& dir, const OnlineResult& result) {
  std::ofstream samples = open_csv(dir / "online_samples.csv");
  samples << "mu,modes,projection_error,rom_error,assembly_s,projection_s,reduced_solve_s,"
             "online_s,fom_s,status\n";
  for (const SampleResult& s : result.samples) {
    samples << exact_number(s.mu) << ',' << s.modes << ',' << io::format_number(s.projection_error)
            << ',' << io::format_number(s.rom_error) << ',' << io::format_number(s.assembly_seconds)
            << ',' << io::format_number(s.projection_seconds) << ','
            << io::format_number(s.reduced_solve_seconds) << ','
            << io::format_number(s.online_seconds()) << ',' << io::format_number(s.fom_seconds)
            << ',' << (s.ok ? std::string("ok") : "\"" + s.error + "\"") << '\n';
  }

  std::ofstream summary = open_csv(dir / "online_summary.csv");
  summary << "modes,ok,mean_projection_error,mean_rom_error,online_s,fom_s\n";
  for (const ReportRow& r : result.rows) {
    summary << r.modes << ',' << (r.ok ? 1 : 0) << ',' << exact_number(r.mean_projection_error)
            << ',' << exact_number(r.mean_rom_error) << ',' << exact_number(r.online_seconds)
            << ',' << exact_number(r.fom_seconds) << '\n';
  }
}

std::vector<ReportRow> load_report_rows(const fs::path& dir) {
  std::vector<ReportRow> rows;
  for (const auto& cells : read_csv(dir / "online_summary.csv")) {
    require(cells.size() == 6, "malformed online_summary.csv");
    ReportRow r;
    r.modes = std::stoi(cells[0]);
    r.ok = cells[1] == "1";
    r.mean_projection_error = std::stod(cells[2]);
    r.mean_rom_error = std::stod(cells[3]);
    r.online_seconds = std::stod(cells[4]);
    r.fom_seconds = std::stod(cells[5]);
    rows.push_back(r);
  }
  return rows;
}

void write_tables(const fs::path& dir, const PodBasis& basis, const std::vector<ReportRow>& rows) {
  std::ofstream errors = open_csv(dir / "errors.csv");
  errors << "modes,mean_projection_error,mean_rom_error\n";
  for (const ReportRow& r : rows) {
    errors << r.modes << ',' << io::format_number(r.mean_projection_error) << ','
           << io::format_number(r.mean_rom_error) << '\n';
  }

  std::ofstream decay = open_csv(dir / "eigdecay.csv");
  decay << "index,relative_eigenvalue\n";
  const double lambda_max = basis.eigenvalues.size() > 0 ? basis.eigenvalues[0] : 0.0;
  for (Eigen::Index i = 0; i < basis.eigenvalues.size(); ++i) {
    decay << i + 1 << ',' << io::format_number(basis.eigenvalues[i] / lambda_max) << '\n';
  }

  std::ofstream timing = open_csv(dir / "timing.csv");
  timing << "modes,execution_time_s,savings_percent,speedup\n";
  double fom = 0.0;
  for (const ReportRow& r : rows) {
    if (!r.ok) {
      timing << r.modes << ",nan,nan,nan\n";
    } else {
      timing << r.modes << ',' << io::format_number(r.online_seconds) << ','
             << io::format_number(r.savings_percent()) << ',' << io::format_number(r.speedup())
             << '\n';
    }
    fom += r.fom_seconds;
  }
  if (!rows.empty()) timing << "FOM," << io::format_number(fom / rows.size()) << ",,\n";
}

std::vector<double> write_vtk_triples(const RunConfig& config, const BackgroundMesh& mesh,
                                      const OfflineArtifacts& art, const fs::path& dir) {
  const FullOrderModel fom(mesh, config.shape(), config.problem(), config.quadrature_order,
                           config.solver);
  const int m = std::min(config.vtk_modes, art.basis.size());
  std::vector<double> ratios;
  for (std::size_t k = 0; k < config.vtk_mu.size(); ++k) {
    const double mu = config.vtk_mu[k];
    const FomSolution reference = fom.solve(mu);
    const Vector a = solve_reduced(project(fom.system(mu), art.basis, m));
    const Vector rom = reconstruct(art.basis, a);
    const Vector error = (reference.T - rom).cwiseAbs();
    const double fom_max = reference.T.cwiseAbs().maxCoeff();
    const double err_max = error.maxCoeff();
    if (err_max > fom_max) {
      throw Error("ROM error field exceeds the FOM maximum at mu = " + std::to_string(mu));
    }
    ratios.push_back(fom_max > 0.0 ? err_max / fom_max : 0.0);
    const std::string tag = std::to_string(k);
    io::write_vtk(dir / ("fom_" + tag + ".vtk"), mesh, {{"T", reference.T}});
    io::write_vtk(dir / ("rom_" + tag + ".vtk"), mesh, {{"T", rom}});
    io::write_vtk(dir / ("error_" + tag + ".vtk"), mesh, {{"abs_error", error}});
  }
  return ratios;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config) {
  // T = |x - c|^2, -lap T = -4
  const Point c = config.disc_center;
  const ManufacturedSolution manufactured{
      {[c](const Point& p) { return (p - c).squaredNorm(); },
       [c](const Point& p) { return Point(2.0 * (p - c)); }},
      ScalarField::constant(-4.0)};
  const EmbeddedShape disc = EmbeddedShape::disc(c, config.disc_radius);
  const auto rows = convergence_study(config.box, disc, config.disc_radius, manufactured,
                                      config.convergence_h, config.alpha,
                                      config.quadrature_order);
  std::ofstream out = open_csv(config.output_dir / "convergence.csv");
  out << "h,nodes,l2_error,rate\n";
  for (const ConvergenceRow& r : rows) {
    out << io::format_number(r.h) << ',' << r.nodes << ',' << io::format_number(r.l2_error) << ','
        << (std::isnan(r.rate) ? std::string("") : io::format_number(r.rate)) << '\n';
  }
  return rows;
}

}  // namespace sbmrom
