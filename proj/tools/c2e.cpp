// c2e: verify operator identities and compatibility complexes, classify
// Weyl tensors, list charts.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "c2e/lorentz_np.hpp"
#include "c2e/report.hpp"
#include "c2e/suites.hpp"

using namespace c2e;
using nlohmann::json;

namespace {

cplx parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw StructuralError("empty value");
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw StructuralError("malformed number '" + t + "'");
    return v;
  };
  try {
    if (s.back() != 'i') return {number(s), 0.0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        split = k;
        break;
      }
    auto imag = [&](const std::string& t) {
      if (t.empty() || t == "+") return 1.0;
      if (t == "-") return -1.0;
      return number(t);
    };
    if (split == std::string::npos) return {0.0, imag(s)};
    return {number(s.substr(0, split)), imag(s.substr(split))};
  } catch (const std::logic_error&) {
    throw StructuralError("malformed complex value '" + s + "'");
  }
}

NPScalars parse_psi(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 5) throw StructuralError("--psi needs five comma-separated values");
  NPScalars s;
  for (std::size_t i = 0; i < 5; ++i) s.psi[i] = parse_complex(parts[i]);
  return s;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(p, &used));
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0) throw StructuralError("malformed point coordinate '" + p + "'");
  }
  return v;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw StructuralError("cannot write " + out);
  f << j.dump(2) << "\n";
}

int run_verify(const RunConfig& cfg) {
  SuiteRequest req;
  req.suite = cfg.suite;
  req.chart = cfg.chart;
  req.order = cfg.order;
  req.sweep = {cfg.points, cfg.trials, cfg.seed, cfg.tol};
  req = resolved(req);
  RunConfig shown = cfg;
  shown.chart = req.chart;
  shown.order = req.order;

  const auto t0 = std::chrono::steady_clock::now();
  const VerificationReport rep = run_suite(req, cfg.serial ? Execution::Serial : Execution::Parallel);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(report_json(rep, shown, secs), cfg.out);
  return rep.all_pass() ? 0 : 1;
}

int run_classify(const std::string& psi_text, const std::string& chart, const std::string& point_text,
                 std::uint64_t seed, const std::string& out) {
  json j{{"schema", kReportSchema}, {"command", "classify"}};
  NullFrame f;
  CTensor W;
  NPScalars psi;
  double tol = 1e-12;
  if (!psi_text.empty()) {
    psi = parse_psi(psi_text);
    f = canonical_frame();
    W = reconstruct_weyl(psi, f);
    j["input"] = {{"psi", psi_text}, {"frame", "canonical"}};
  } else {
    const MetricChart c = make_chart(chart);
    const std::vector<double> pt = point_text.empty() ? sample_point(c, seed, 0) : parse_point(point_text);
    if (static_cast<int>(pt.size()) != c.dim) throw StructuralError("--point has the wrong number of coordinates");
    const PointNP np = np_at_point(c, pt);
    f = np.frame;
    W = np.weyl;
    psi = np.psi;
    j["input"] = {{"chart", c.name}, {"point", pt}, {"frame", "adapted orthonormal"}};
  }
  double scale = 0.0;
  for (const auto& p : psi.psi) scale = std::max(scale, std::abs(p));
  if (psi_text.empty()) tol = 1e-9 * (1.0 + scale);

  const double w2 = quadratic_invariant(W, f.ginv);
  const CubicInvariants cub = cubic_invariants(W, f.ginv);
  const int rank = genericity_rank(W, f);
  std::string route = "none (not generic)";
  if (std::abs(w2) > 1e-9 * (1.0 + scale * scale)) route = "preferred-V";
  else if (std::abs(cub.trace) > 1e-9 * (1.0 + scale * scale * scale)) route = "cubic";
  else if (rank == 4) route = "least-squares";

  json ps = json::array();
  for (const auto& p : psi.psi) ps.push_back(complex_json(p));
  j["psi"] = ps;
  j["petrov_type"] = to_string(petrov_classify(psi, tol));
  j["weyl_norm2"] = w2;
  j["weyl_norm2_np"] = np_quadratic(psi);
  j["cubic_trace"] = complex_json(cub.trace);
  j["rank"] = rank;
  j["inversion_route"] = route;
  emit(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for conformal-to-Einstein compatibility complexes"};
  app.require_subcommand(1);

  RunConfig cli;
  std::string config_path;
  auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON report");
  verify->add_option("--config", config_path, "JSON config; flags override its fields");
  verify->add_option("--suite", cli.suite, "identities, onesol, nosol, proj, bgg-flat or np");
  verify->add_option("--chart", cli.chart, "chart name (see `charts`)");
  verify->add_option("--points", cli.points, "sample points");
  verify->add_option("--trials", cli.trials, "random inputs per point and identity");
  verify->add_option("--order", cli.order, "metric jet order (0: suite default)");
  verify->add_option("--tol", cli.tol, "pass tolerance on relative residuals");
  verify->add_option("--seed", cli.seed, "master seed");
  verify->add_option("--out", cli.out, "write the report here instead of stdout");
  verify->add_flag("--serial", cli.serial, "run the reference serial sweep");

  std::string psi_text, chart, point_text, out;
  std::uint64_t seed = 1;
  auto* classify = app.add_subcommand("classify", "Petrov type, invariants and genericity of a Weyl tensor");
  auto* psi_opt = classify->add_option("--psi", psi_text, "Ψ0..Ψ4 as a,b,c,d,e; complex values as re+imi");
  auto* chart_opt = classify->add_option("--chart", chart, "4D Lorentzian chart");
  classify->add_option("--point", point_text, "coordinates x0,x1,... (default: a seeded sample point)");
  classify->add_option("--seed", seed, "seed for the default point");
  classify->add_option("--out", out, "write the report here instead of stdout");
  psi_opt->excludes(chart_opt);

  auto* charts = app.add_subcommand("charts", "list built-in charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      RunConfig cfg;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw StructuralError("cannot read config " + config_path);
        cfg = merge_config(cfg, json::parse(f));
      }
      auto given = [&](const char* flag) { return verify->count(flag) > 0; };
      if (given("--suite")) cfg.suite = cli.suite;
      if (given("--chart")) cfg.chart = cli.chart;
      if (given("--points")) cfg.points = cli.points;
      if (given("--trials")) cfg.trials = cli.trials;
      if (given("--order")) cfg.order = cli.order;
      if (given("--tol")) cfg.tol = cli.tol;
      if (given("--seed")) cfg.seed = cli.seed;
      if (given("--out")) cfg.out = cli.out;
      if (given("--serial")) cfg.serial = cli.serial;
      return run_verify(cfg);
    }
    if (*classify) {
      if (psi_text.empty() && chart.empty()) throw StructuralError("classify needs --psi or --chart");
      return run_classify(psi_text, chart, point_text, seed, out);
    }
    if (*charts) {
      for (const auto& c : builtin_charts()) std::cout << c.name << "\t" << c.description << "\n";
      return 0;
    }
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << " (raise --order)\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
