#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fneumann/neumann_symbols.hpp"
#include "fneumann/root_atlas.hpp"
#include "fneumann/solver_1d.hpp"
#include "fneumann/verification.hpp"

using namespace fneumann;
using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { ok = 0, usage = 1, mathematical = 2, resolution = 3, check_failed = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt15(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
  return buf;
}

// round-trips through 15 significant digits so that JSON output is stable
double round15(double v) { return std::isfinite(v) ? std::strtod(fmt15(v).c_str(), nullptr) : v; }

std::string complex_text(Complex z) {
  std::string out = fmt15(z.real());
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  out += std::signbit(im) ? "-" : "+";
  out += fmt15(std::abs(im)) + "i";
  return out;
}

ordered_json complex_json(Complex z) { return {{"re", round15(z.real())}, {"im", round15(z.imag())}}; }

// "a", "a+bi", "a-bi", "bi", "-bi", "i"
Complex parse_complex(const std::string& text) {
  static const std::string num = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
  static const std::regex real_only("^" + num + "$");
  static const std::regex imag_only(R"(^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i$)");
  static const std::regex full("^" + num + R"(([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i$)");
  std::smatch m;
  auto coefficient = [](const std::string& c) {
    if (c.empty() || c == "+") return 1.0;
    if (c == "-") return -1.0;
    return std::stod(c);
  };
  if (std::regex_match(text, m, real_only)) return {std::stod(m[1]), 0.0};
  if (std::regex_match(text, m, imag_only)) return {0.0, coefficient(m[1])};
  if (std::regex_match(text, m, full)) return {std::stod(m[1]), coefficient(m[2])};
  throw UsageError("cannot parse complex number '" + text + "' (expected a+bi without spaces)");
}

Order parse_order(double s) {
  if (!(s > 0.0 && s < 1.0)) throw UsageError("s must lie strictly inside (0, 1)");
  return Order(s);
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("cannot parse s range '" + text + "' (expected start:stop:step)");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw UsageError("s range needs start:stop:step with step > 0 and stop >= start");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(round15(parts[0] + static_cast<double>(k) * parts[2]));
  return out;
}

void emit(const ordered_json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
  }
}

std::size_t worker_count() {
  if (const char* env = std::getenv("FNEUMANN_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw UsageError("FNEUMANN_WORKERS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- symbol ----

struct SymbolArgs {
  double s = 0.5;
  std::string beta = "0";
  std::string which = "f";
};

int run_symbol(const SymbolArgs& a) {
  const Order order = parse_order(a.s);
  const Complex beta = parse_complex(a.beta);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "symbol";
  j["s"] = round15(a.s);
  j["beta"] = complex_json(beta);
  j["which"] = a.which;
  std::optional<Complex> value;
  bool pole = false;
  std::string note;
  try {
    if (a.which == "f" || a.which == "f1" || a.which == "f2") {
      const SymbolValue v = a.which == "f" ? f_symbol(order, beta)
                            : a.which == "f1" ? f1_f2_symbols(order, beta).f1
                                              : f1_f2_symbols(order, beta).f2;
      pole = v.is_pole;
      if (!pole) value = v.value;
      if (a.which == "f" && !pole && is_trivial_zero(order, beta, 1e-14)) {
        value = Complex(0.0, 0.0);
        note = "exact zero (trivial zero of f)";
      }
    } else if (a.which == "g") {
      value = g_aux(order, beta);
    } else if (a.which == "F") {
      value = F_entire(order, beta);
    } else if (a.which == "C") {
      value = c_beta(order, beta);
    } else {
      throw UsageError("unknown symbol '" + a.which + "' (expected f, g, F, f1, f2 or C)");
    }
  } catch (const PoleAt&) {
    pole = true;
  }
  if (value) {
    j["value"] = complex_json(*value);
    j["value_text"] = complex_text(*value);
    j["modulus"] = round15(std::abs(*value));
  } else {
    j["value"] = nullptr;
    j["value_text"] = nullptr;
    j["modulus"] = nullptr;
  }
  j["pole"] = pole;
  if (pole) {
    j["nearest_pole"] = complex_json(nearest_f_pole(order, beta));
    note = "pole";
  }
  j["note"] = note;
  emit(j, "");
  return pole ? mathematical : ok;
}

// ---- b0-curve ----

struct CurveArgs {
  std::string s = "0.1:0.9:0.05";
  std::string out;
  bool timing = false;
};

struct CurveRow {
  double s = 0.0;
  std::string status = "ok";
  B0Result result;
  double wallclock_ms = 0.0;
};

int run_b0_curve(const CurveArgs& a) {
  const auto grid = parse_range(a.s);
  for (double s : grid)
    if (!(s > 0.02 && s < 0.98)) throw UsageError("b0-curve needs every s inside (0.02, 0.98)");

  std::vector<CurveRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      CurveRow& row = rows[i];
      row.s = grid[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        row.result = compute_B0(Order(row.s));
      } catch (const NoZeroFound&) {
        row.status = "NoZeroFound";
      } catch (const SubdivisionBudgetExceeded&) {
        row.status = "SubdivisionBudgetExceeded";
      } catch (const NumericalError&) {
        row.status = "NumericalError";
      }
      row.wallclock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const std::size_t workers = std::min(worker_count(), grid.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::sort(rows.begin(), rows.end(), [](const CurveRow& x, const CurveRow& y) { return x.s < y.s; });

  std::ostringstream csv;
  csv << "s,B0,B0_im,lower_theory,upper_theory,within_theory,certified,real_zero,tail_M,wallclock_ms,status\r\n";
  for (const auto& row : rows) {
    const bool good = row.status == "ok";
    const auto& r = row.result;
    csv << fmt15(row.s) << ',' << (good ? fmt15(r.B0) : "") << ',' << (good ? fmt15(r.witness.beta.imag()) : "") << ','
        << (good ? fmt15(r.lower_theory) : "") << ',' << (good ? fmt15(r.upper_theory) : "") << ','
        << (good ? (r.within_theory ? "true" : "false") : "") << ',' << (good ? (r.witness.certified ? "true" : "false") : "")
        << ',' << (good ? (r.real_zero ? "true" : "false") : "") << ',' << (good ? fmt15(r.tail_M) : "") << ','
        << (a.timing ? fmt15(std::round(row.wallclock_ms * 1000.0) / 1000.0) : "0") << ',' << row.status << "\r\n";
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw UsageError("cannot write " + a.out);
    out << csv.str();
  }
  const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const CurveRow& r) { return r.status == "ok"; });
  return all_ok ? ok : mathematical;
}

// ---- certify ----

struct CertifyArgs {
  double s = 0.5;
  double re_min = 0.0, re_max = 0.0, im_min = 0.0;
  std::optional<double> im_max;
  bool exclude_trivial = false;
  std::string out;
};

int run_certify(const CertifyArgs& a) {
  const Order order = parse_order(a.s);
  StripWindow w;
  w.re_min = a.re_min;
  w.re_max = a.re_max;
  w.im_min = a.im_min;
  try {
    w.im_max = a.im_max ? *a.im_max : tail_bound_M(order, std::max(a.re_max, 1e-3));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.exclude_trivial) w.exclusions = trivial_exclusions(order);
  try {
    w.validate(order);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "certify";
  j["s"] = round15(a.s);
  j["window"] = {{"re_min", round15(w.re_min)}, {"re_max", round15(w.re_max)}, {"im_min", round15(w.im_min)},
                 {"im_max", round15(w.im_max)}};
  ordered_json ex = ordered_json::array();
  for (const auto& d : w.exclusions) ex.push_back({{"center", complex_json(d.center)}, {"radius", round15(d.radius)}});
  j["exclusions"] = ex;
  int code = ok;
  try {
    int winding = 0;
    std::size_t samples = 0;
    int jitter = 0;
    if (w.exclusions.empty()) {
      const auto r = winding_report(order, w);
      winding = r.winding;
      samples = r.boundary_samples;
      jitter = r.jitter_steps;
    } else {
      // zeros inside the exclusion discs are not counted
      const auto zeros = isolate_zeros(order, w);
      for (const auto& z : zeros) winding += z.multiplicity;
      const auto r = winding_report(order, w);
      samples = r.boundary_samples;
      jitter = r.jitter_steps;
    }
    j["winding"] = winding;
    j["boundary_samples"] = samples;
    j["jitter_steps"] = jitter;
    j["verdict"] = winding == 0 ? std::string("ZERO_FREE") : "CONTAINS_ZEROS(" + std::to_string(winding) + ")";
  } catch (const ZeroOnBoundary&) {
    j["winding"] = nullptr;
    j["boundary_samples"] = 0;
    j["jitter_steps"] = nullptr;
    j["verdict"] = "BOUNDARY_FAILURE";
    code = mathematical;
  }
  emit(j, a.out);
  return code;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite = "all";
  double s = 0.5;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const Order order = parse_order(a.s);
  const std::vector<std::string> known = {"symbols", "kernel", "mellin", "all"};
  if (std::find(known.begin(), known.end(), a.suite) == known.end())
    throw UsageError("unknown suite '" + a.suite + "' (expected symbols, kernel, mellin or all)");
  std::vector<CheckResult> checks;
  auto add = [&](const std::vector<CheckResult>& more) { checks.insert(checks.end(), more.begin(), more.end()); };
  if (a.suite == "symbols" || a.suite == "all") {
    add(verify_special_functions());
    add(verify_symbols(order));
  }
  if (a.suite == "kernel" || a.suite == "all") add(verify_kernel(order));
  if (a.suite == "mellin" || a.suite == "all") add(verify_mellin(order));

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify";
  j["suite"] = a.suite;
  j["s"] = round15(a.s);
  ordered_json list = ordered_json::array();
  bool all = true;
  for (const auto& c : checks) {
    list.push_back({{"suite", c.suite}, {"name", c.name}, {"defect", round15(c.defect)},
                    {"threshold", round15(c.threshold)}, {"passed", c.passed()}});
    all = all && c.passed();
  }
  j["checks"] = list;
  j["passed"] = all;
  emit(j, a.out);
  return all ? ok : check_failed;
}

// ---- solve ----

struct SolveArgs {
  double s = 0.5;
  std::string preset = "linear";
  std::string file;
  std::size_t cells = 256;
  double grading = 3.0;
  std::string field_out;
  std::string out;
};

std::function<double(double)> load_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read source file " + path);
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, h;
    if (!(ls >> x >> h)) continue;  // header row
    samples.emplace_back(x, h);
  }
  if (samples.size() < 2) throw UsageError("source file needs at least two x,h rows");
  std::sort(samples.begin(), samples.end());
  return [samples](double x) {
    if (x <= samples.front().first) return samples.front().second;
    if (x >= samples.back().first) return samples.back().second;
    const auto it = std::lower_bound(samples.begin(), samples.end(), std::make_pair(x, -std::numeric_limits<double>::infinity()));
    const auto& [x1, h1] = *it;
    const auto& [x0, h0] = *(it - 1);
    return h0 + (h1 - h0) * (x - x0) / (x1 - x0);
  };
}

int run_solve(const SolveArgs& a) {
  const Order order = parse_order(a.s);
  std::function<double(double)> h;
  if (a.preset == "linear") {
    h = [](double x) { return x - 0.5; };
  } else if (a.preset == "sine") {
    h = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  } else if (a.preset == "custom-file") {
    if (a.file.empty()) throw UsageError("custom-file needs --file");
    h = load_source(a.file);
  } else {
    throw UsageError("unknown source preset '" + a.preset + "' (expected linear, sine or custom-file)");
  }
  GradedMesh mesh;
  try {
    mesh = graded_mesh(a.cells, a.grading);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const NeumannSolver solver(order, mesh);
  SolveDiagnostics diag;
  const SolverField u = solver.solve(h, &diag);
  const ExponentFit left = fit_boundary_exponent(u, Side::left);
  const ExponentFit right = fit_boundary_exponent(u, Side::right);

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "solve";
  j["s"] = round15(a.s);
  j["source"] = a.preset;
  j["cells"] = a.cells;
  j["grading"] = round15(a.grading);
  j["fitted_exponent_left"] = round15(left.exponent);
  j["fitted_exponent_right"] = round15(right.exponent);
  j["fit_r2_left"] = round15(left.r2);
  j["fit_r2_right"] = round15(right.r2);
  j["fit_linear_term"] = left.linear_term;
  j["boundary_slope"] = round15(normal_derivative_check(u, Side::left));
  j["boundary_slope_right"] = round15(normal_derivative_check(u, Side::right));
  j["residual"] = round15(diag.residual);
  j["source_mean"] = round15(diag.source_mean);
  ordered_json warnings = ordered_json::array();
  if (diag.projected) warnings.push_back("projected to mean-zero");
  j["warnings"] = warnings;
  emit(j, a.out);

  if (!a.field_out.empty()) {
    std::ofstream f(a.field_out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.field_out);
    f << "x,width,u\r\n";
    for (std::size_t i = 0; i < mesh.cells(); ++i)
      f << fmt15(mesh.midpoint(i)) << ',' << fmt15(mesh.width(i)) << ',' << fmt15(u.values[static_cast<Eigen::Index>(i)]) << "\r\n";
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mellin symbol, zero atlas and boundary regularity of the 1D fractional Neumann problem"};
  app.require_subcommand(1);
  // --h names the source preset, so help is reachable as --help only
  app.set_help_flag("--help", "print this help message and exit");

  SymbolArgs sym;
  auto* c_sym = app.add_subcommand("symbol", "evaluate f, g, F, f1, f2 or C_beta");
  c_sym->add_option("--s", sym.s, "fractional order in (0, 1)")->required();
  c_sym->add_option("--beta", sym.beta, "complex argument a+bi")->required();
  c_sym->add_option("--which", sym.which, "f | g | F | f1 | f2 | C")->capture_default_str();

  CurveArgs curve;
  auto* c_curve = app.add_subcommand("b0-curve", "B0(s) over a range of s as CSV");
  c_curve->add_option("--s", curve.s, "single s or start:stop:step")->capture_default_str();
  c_curve->add_option("--out", curve.out, "CSV path (default stdout)");
  c_curve->add_flag("--timing", curve.timing, "fill the wallclock_ms column (otherwise 0)");

  CertifyArgs cert;
  auto* c_cert = app.add_subcommand("certify", "winding-number certificate for a rectangle");
  c_cert->add_option("--s", cert.s, "fractional order in (0, 1)")->required();
  c_cert->add_option("--re-min", cert.re_min, "left edge of the window")->required();
  c_cert->add_option("--re-max", cert.re_max, "right edge of the window")->required();
  c_cert->add_option("--im-min", cert.im_min, "lower edge of the window")->capture_default_str();
  c_cert->add_option("--im-max", cert.im_max, "default: the tail bound M for the window");
  c_cert->add_flag("--exclude-trivial", cert.exclude_trivial, "ignore zeros near 0 and 2s - 1");
  c_cert->add_option("--out", cert.out, "JSON path (default stdout)");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "run the oracle comparisons and report defects");
  c_ver->add_option("--suite", ver.suite, "symbols | kernel | mellin | all")->capture_default_str();
  c_ver->add_option("--s", ver.s, "fractional order in (0, 1)")->capture_default_str();
  c_ver->add_option("--out", ver.out, "JSON path (default stdout)");

  SolveArgs sol;
  auto* c_sol = app.add_subcommand("solve", "solve the Neumann problem on (0, 1) and fit boundary exponents");
  c_sol->add_option("--s", sol.s, "fractional order in (0, 1)")->required();
  c_sol->add_option("--h", sol.preset, "linear | sine | custom-file")->capture_default_str();
  c_sol->add_option("--file", sol.file, "x,h samples for custom-file");
  c_sol->add_option("--N", sol.cells, "number of cells")->capture_default_str();
  c_sol->add_option("--grading", sol.grading, "mesh grading exponent (>= 1)")->capture_default_str();
  c_sol->add_option("--field-out", sol.field_out, "CSV path for the solved field");
  c_sol->add_option("--out", sol.out, "JSON path for diagnostics (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (c_sym->parsed()) return run_symbol(sym);
    if (c_curve->parsed()) return run_b0_curve(curve);
    if (c_cert->parsed()) return run_certify(cert);
    if (c_ver->parsed()) return run_verify(ver);
    if (c_sol->parsed()) return run_solve(sol);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const InsufficientResolution& e) {
    std::cerr << "InsufficientResolution: " << e.what() << "\n";
    return resolution;
  } catch (const SubdivisionBudgetExceeded& e) {
    std::cerr << "SubdivisionBudgetExceeded: " << e.what() << "\n";
    return resolution;
  } catch (const QuadratureNotConverged& e) {
    std::cerr << "QuadratureNotConverged: " << e.what() << "\n";
    return resolution;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mathematical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
