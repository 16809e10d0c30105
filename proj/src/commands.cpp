#include "maslov/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/oracle.hpp"
#include "maslov/validation.hpp"

namespace maslov {

namespace {

std::ostream& sink(const CommandOptions& o) { return o.out != nullptr ? *o.out : std::cout; }

std::filesystem::path out_dir(const CommandOptions& o) {
  const auto dir = o.outDir.value_or(std::filesystem::path("."));
  std::filesystem::create_directories(dir);
  return dir;
}

nlohmann::json optional_int(const std::optional<int>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// Shortest round-trip text in the classic locale.
std::string csv_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::string version() { return MASLOV_VERSION; }

nlohmann::json crossings_to_json(const std::vector<CrossingEvent>& events) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : events)
    arr.push_back({{"location", e.location}, {"multiplicity", e.multiplicity}, {"direction", e.direction}});
  return arr;
}

nlohmann::json report_to_json(const MorseReport& r, const Problem& p) {
  nlohmann::json j;
  j["principalMaslov"] = r.principalMaslov;
  j["morB"] = r.morB;
  j["morCorrection"] = r.morCorrection;
  j["morH"] = r.morH;
  j["gamma1"] = optional_int(r.gamma1);
  j["gamma3"] = optional_int(r.gamma3);
  j["gamma4"] = optional_int(r.gamma4);
  j["oracleCount"] = optional_int(r.oracleCount);
  j["nondegenerate"] = r.nondegenerate;
  j["kernelAtCorner"] = r.kernelAtCorner;
  nlohmann::json crossings = nlohmann::json::object();
  for (const auto& [name, events] : r.crossings) crossings[name] = crossings_to_json(events);
  j["crossings"] = crossings;
  const auto& s = p.settings;
  j["settings"] = {{"n", p.n},
                   {"steps", s.steps},
                   {"s0", r.s0},
                   {"requestedS0", s.s0},
                   {"lambdaInf", r.lambdaInf},
                   {"samples", s.samples},
                   {"cushion", s.cushion},
                   {"meshN", s.oracleMesh}};
  j["version"] = version();
  return j;
}

nlohmann::json error_to_json(const std::exception& e) {
  nlohmann::json j;
  if (const auto* se = dynamic_cast<const SyntaxError*>(&e)) {
    j["error"] = se->name();
    j["offset"] = se->offset();
    j["expected"] = se->expected();
  } else if (const auto* me = dynamic_cast<const Error*>(&e)) {
    j["error"] = me->name();
  } else {
    j["error"] = "InternalError";
  }
  j["message"] = e.what();
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    f << content;
    f.close();
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename onto " + path.string());
  }
}

int run_report(const Problem& p, const CommandOptions& options) {
  MorseReport r = morse_via_theorem(p);
  r.oracleCount = oracle::negative_count(oracle::assemble(p, 1.0, p.settings.oracleMesh));
  const std::string text = report_to_json(r, p).dump(2) + "\n";
  sink(options) << text;
  if (options.outDir) write_atomic(out_dir(options) / "report.json", text);
  return r.nondegenerate ? Ok : Degenerate;
}

int run_curves(const Problem& p, const CurveGrid& grid, const CommandOptions& options) {
  if (grid.sCount < 2 || grid.lambdaCount < 2) {
    throw Error(ErrorCode::ValidationError, "curve grids need at least two points");
  }
  const auto dir = out_dir(options);

  std::vector<double> s_grid;
  for (int k = 0; k < grid.sCount; ++k)
    s_grid.push_back(grid.sMin + (1.0 - grid.sMin) * k / (grid.sCount - 1));
  const auto rows = oracle::eigencurves(p, s_grid, grid.eigenvalues, p.settings.oracleMesh,
                                        oracle::Convention::Unscaled);
  std::string curves = "s";
  for (int k = 1; k <= grid.eigenvalues; ++k) curves += ",lambda" + std::to_string(k);
  curves += ",convention\n";
  double lowest = 0.0;
  for (const auto& row : rows) {
    curves += csv_number(row.s);
    for (double e : row.eigenvalues) curves += "," + csv_number(e);
    curves += ",unscaled\n";
    if (!row.eigenvalues.empty()) lowest = std::min(lowest, row.eigenvalues.front());
  }
  write_atomic(dir / "curves.csv", curves);

  const double lambda_min = grid.lambdaMin.value_or(std::min(-1.0, 1.1 * lowest));
  const ShootingSystem sys = shooting_system(p);
  const double s0 = p.settings.s0;
  std::vector<double> s_box;
  for (int k = 0; k < grid.sCount; ++k) s_box.push_back(s0 + (1.0 - s0) * k / (grid.sCount - 1));
  std::vector<std::vector<double>> gap(s_box.size(), std::vector<double>(grid.lambdaCount));
  for (int l = 0; l < grid.lambdaCount; ++l) {
    const double lambda = lambda_min * (1.0 - static_cast<double>(l) / (grid.lambdaCount - 1));
    const double h = 1.0 / effective_steps(1.0, lambda, p.settings.steps);
    Frame f = initial_frame(sys.left, lambda);
    for (std::size_t k = 0; k < s_box.size(); ++k) {
      if (s_box[k] > f.s) f = advance_frame(f, sys.potential, s_box[k], h);
      double g = kPi;
      for (double ph : eigen_phases(wtilde(f, sys.target.factor))) g = std::min(g, circular_distance(ph, kPi));
      gap[k][l] = g;
    }
  }
  std::string field = "s,lambda,phase_gap\n";
  for (std::size_t k = 0; k < s_box.size(); ++k)
    for (int l = 0; l < grid.lambdaCount; ++l) {
      const double lambda = lambda_min * (1.0 - static_cast<double>(l) / (grid.lambdaCount - 1));
      field += csv_number(s_box[k]) + "," + csv_number(lambda) + "," + csv_number(gap[k][l]) + "\n";
    }
  write_atomic(dir / "phase_gap.csv", field);

  sink(options) << "wrote " << (dir / "curves.csv").string() << " and " << (dir / "phase_gap.csv").string()
                << "\n";
  return Ok;
}

int run_check(const Problem& p, const CommandOptions& options) {
  const auto rows = consistency_checks(p);
  std::ostream& os = sink(options);
  bool ok = true;
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  for (const auto& r : rows) {
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width) + 2) << r.name
       << r.detail << "\n";
    ok = ok && r.passed;
  }
  if (options.outDir) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) j.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    write_atomic(out_dir(options) / "check.json", j.dump(2) + "\n");
  }
  return ok ? Ok : Failure;
}

}  // namespace maslov
