// isoflow: Euler characteristic tables, Morse counts, Volterra flow runs,
// the Volterra-to-Toda map, spectra, and seeded verification suites.
//
// Exit status: 0 when every requested check passes, 1 when a check fails,
// 2 on usage errors.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isoflow/isoflow.hpp"

namespace {

using isoflow::json;

enum class Format { json, csv, text };

const std::map<std::string, Format> kFormats{{"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};

/// Everything that determines a run's output.
struct RunSpec {
  std::string command;
  std::uint64_t seed = 0;
  Format format = Format::json;
};

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

json envelope(const RunSpec& spec, json results, bool pass) {
  return {{"command", spec.command}, {"seed", spec.seed}, {"results", std::move(results)}, {"pass", pass}};
}

int emit(const json& j) {
  std::cout << j.dump(2) << '\n';
  return j.at("pass").get<bool>() ? 0 : kExitFail;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw isoflow::ContractError("not a number: " + item);
    out.push_back(v);
  }
  return out;
}

std::filesystem::path output_dir() {
  if (const char* env = std::getenv("ISOFLOW_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

// ---------------------------------------------------------------- chi

struct ChiArgs {
  std::string family = "M";
  int l_max = 4;
  int n_max = 4;
  std::vector<std::string> methods;
  std::string format = "csv";
};

int cmd_chi(const ChiArgs& a, RunSpec spec) {
  spec.format = kFormats.at(a.format);
  if (a.family == "M") {
    if (a.l_max < 0 || a.l_max > 12) throw isoflow::ContractError("--l-max must be in [0, 12]");
    const std::vector<std::string> all{"closed", "egf", "combinatorial", "morse"};
    const auto methods = a.methods.empty() ? all : a.methods;
    auto use = [&](const char* m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    for (const auto& m : methods)
      if (std::find(all.begin(), all.end(), m) == all.end()) throw isoflow::ContractError("unknown method: " + m);

    const auto egf = use("egf") ? isoflow::chi_M_egf(a.l_max) : std::vector<int64_t>{};
    std::vector<isoflow::ChiRow> rows;
    json jrows = json::array();
    bool pass = true;
    for (int l = 0; l <= a.l_max; ++l) {
      isoflow::ChiRow r{l, {}, {}, {}, {}};
      if (use("closed")) r.closed = isoflow::chi_M_closed(l);
      if (use("egf")) r.egf = egf[static_cast<std::size_t>(l)];
      if (use("combinatorial")) r.combinatorial = isoflow::chi_M_combinatorial(l);
      // Morse counts need l >= 1 and stay enumerable up to l = 10.
      if (use("morse") && l >= 1 && l <= 10) r.morse = isoflow::morse_chi_M(l);
      std::vector<int64_t> values;
      for (const auto& v : {r.closed, r.egf, r.combinatorial, r.morse})
        if (v) values.push_back(*v);
      bool agree = std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
      std::string note;
      if (l == 0) {
        // chi(M_1): closed form gives 1, the generating-function convention 0.
        const bool gap_only = (!r.closed || *r.closed == 1) && (!r.egf || *r.egf == 0) &&
                              (!r.combinatorial || *r.combinatorial == 0);
        if (!agree && gap_only) note = "convention gap: closed form 1, generating function 0";
        agree = agree || gap_only;
      }
      pass = pass && agree;
      rows.push_back(r);
      json jr = {{"l", l}, {"agree", agree}};
      if (r.closed) jr["chi_closed"] = *r.closed;
      if (r.egf) jr["chi_egf"] = *r.egf;
      if (r.combinatorial) jr["chi_combinatorial"] = *r.combinatorial;
      if (r.morse) jr["chi_morse"] = *r.morse;
      if (!note.empty()) jr["note"] = note;
      jrows.push_back(jr);
    }
    if (spec.format == Format::csv) {
      isoflow::write_chi_csv(std::cout, rows);
    } else if (spec.format == Format::text) {
      for (const auto& jr : jrows) {
        std::cout << "chi(M_" << 2 * jr["l"].get<int>() + 1 << ")";
        for (const char* key : {"chi_closed", "chi_egf", "chi_combinatorial", "chi_morse"})
          if (jr.contains(key)) std::cout << "  " << key + 4 << "=" << jr[key].get<int64_t>();
        std::cout << (jr["agree"].get<bool>() ? "  agree" : "  DISAGREE");
        if (jr.contains("note")) std::cout << "  (" << jr["note"].get<std::string>() << ")";
        std::cout << '\n';
      }
    } else {
      std::cout << envelope(spec, {{"family", "M"}, {"rows", jrows}}, pass).dump(2) << '\n';
    }
    return pass ? 0 : kExitFail;
  }

  if (a.family != "J") throw isoflow::ContractError("--family must be M or J");
  if (a.n_max < 1 || a.n_max > 20) throw isoflow::ContractError("--n-max must be in [1, 20]");
  json jrows = json::array();
  bool pass = true;
  std::ostringstream csv;
  csv << "n,chi_closed,psi,eulerian_alternating,chi_morse\n";
  for (int n = 1; n <= a.n_max; ++n) {
    const int64_t closed = isoflow::chi_J_closed(n);
    const int64_t p = isoflow::psi(n);
    const auto betti = isoflow::betti_J(n);
    int64_t alternating = 0;
    for (std::size_t i = 0; i < betti.size(); ++i) alternating += i % 2 == 0 ? betti[i] : -betti[i];
    std::optional<int64_t> morse;
    if (n <= 10) morse = isoflow::morse_chi_J(n);
    const bool agree = closed == p && p == alternating && (!morse || *morse == p);
    pass = pass && agree;
    json jr = {{"n", n}, {"chi_closed", closed}, {"psi", p}, {"eulerian_alternating", alternating}, {"agree", agree}};
    if (morse) jr["chi_morse"] = *morse;
    jrows.push_back(jr);
    csv << n << ',' << closed << ',' << p << ',' << alternating << ',' << (morse ? std::to_string(*morse) : "")
        << '\n';
  }
  if (spec.format == Format::csv) {
    std::cout << csv.str();
  } else if (spec.format == Format::text) {
    for (const auto& jr : jrows)
      std::cout << "chi(J_" << jr["n"].get<int>() << ") = " << jr["chi_closed"].get<int64_t>()
                << (jr["agree"].get<bool>() ? "  agree" : "  DISAGREE") << '\n';
  } else {
    std::cout << envelope(spec, {{"family", "J"}, {"rows", jrows}}, pass).dump(2) << '\n';
  }
  return pass ? 0 : kExitFail;
}

// ---------------------------------------------------------------- morse

struct MorseArgs {
  std::string family = "M";
  int l = 2;
  int n = 3;
  bool list = false;
  std::string lambdas;
  std::string format = "json";
};

int cmd_morse(const MorseArgs& a, RunSpec spec) {
  spec.format = kFormats.at(a.format);
  json results;
  bool pass = true;
  if (a.family == "M") {
    if (a.l < 1 || a.l > 10) throw isoflow::ContractError("--l must be in [1, 10]");
    if (a.list && a.l > 5) throw isoflow::ContractError("--list supports l <= 5");
    const auto params = a.lambdas.empty() ? isoflow::SpectrumParams::standard(a.l)
                                          : isoflow::SpectrumParams(parse_list(a.lambdas));
    if (params.size() != static_cast<std::size_t>(a.l)) throw isoflow::ContractError("--lambdas needs l values");
    const int64_t chi = isoflow::morse_chi_M(a.l, params);
    const int64_t closed = isoflow::chi_M_closed(a.l);
    std::int64_t count = a.l + 1;
    for (int i = 1; i <= a.l; ++i) count *= 2 * i;  // (l+1) 2^l l!
    pass = chi == closed;
    results = {{"family", "M"}, {"l", a.l}, {"lambdas", params.values()}, {"count", count},
               {"chi", chi}, {"chi_closed", closed}};
    if (a.list) {
      json pts = json::array();
      for (const auto& p : isoflow::enumerate_critical_points(a.l, params)) pts.push_back(isoflow::to_json(p));
      results["points"] = pts;
    }
  } else if (a.family == "J") {
    if (a.n < 1 || a.n > 10) throw isoflow::ContractError("--n must be in [1, 10]");
    if (a.list && a.n > 7) throw isoflow::ContractError("--list supports n <= 7");
    std::vector<double> mu(static_cast<std::size_t>(a.n));
    std::iota(mu.begin(), mu.end(), 1.0);
    if (!a.lambdas.empty()) mu = parse_list(a.lambdas);
    if (mu.size() != static_cast<std::size_t>(a.n)) throw isoflow::ContractError("--lambdas needs n values");
    json pts = json::array();
    int64_t chi = 0, count = 0;
    for (const auto& eq : isoflow::enumerate_critical_points_toda(mu)) {
      const int index = isoflow::morse_index_toda(eq.sigma, mu);
      chi += index % 2 == 0 ? 1 : -1;
      ++count;
      if (a.list) pts.push_back({{"sigma", eq.sigma}, {"matrix", isoflow::to_json(eq.matrix)}, {"index", index}});
    }
    const int64_t closed = isoflow::chi_J_closed(a.n);
    pass = chi == closed;
    results = {{"family", "J"}, {"n", a.n}, {"spectrum", mu}, {"count", count}, {"chi", chi}, {"chi_closed", closed}};
    if (a.list) results["points"] = pts;
  } else {
    throw isoflow::ContractError("--family must be M or J");
  }

  if (spec.format == Format::text) {
    if (results.contains("points"))
      for (const auto& p : results["points"]) std::cout << p.dump() << '\n';
    std::cout << "count=" << results["count"] << " chi=" << results["chi"] << " closed=" << results["chi_closed"]
              << (pass ? " agree" : " DISAGREE") << '\n';
    return pass ? 0 : kExitFail;
  }
  if (spec.format != Format::json) throw isoflow::ContractError("morse supports --format json or text");
  return emit(envelope(spec, results, pass));
}

// ---------------------------------------------------------------- flow

struct FlowArgs {
  int k = 3;
  std::string init = "random";
  double t_final = 20.0;
  double tol = 1e-10;
  double sample_interval = 1e-2;
  double initial_step = 1e-2;
  std::string method = "rk45";
  std::string out;
};

json nearest_equilibrium(const std::vector<double>& c, const std::vector<double>& c0) {
  const std::size_t k = c0.size() + 1;
  std::vector<double> lam = isoflow::verify::detail::positive_lambdas(c0);
  json j = json::object();
  try {
    const isoflow::SpectrumParams params(lam);
    double best = INFINITY;
    json best_point;
    auto consider = [&](const std::vector<double>& p, const json& label) {
      double d = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) d = std::max(d, std::abs(c[i] - p[i]));
      if (d < best) {
        best = d;
        best_point = label;
      }
    };
    if (k % 2 == 1) {
      for (const auto& p : isoflow::enumerate_critical_points(static_cast<int>(k / 2), params))
        consider(p.coords, isoflow::to_json(p));
    } else {
      for (const auto& p : isoflow::enumerate_even_equilibria(params)) consider(p, json{{"coords", p}});
    }
    j = {{"point", best_point}, {"distance", best}};
  } catch (const isoflow::ContractError& e) {
    j = {{"error", e.what()}};
  }
  return j;
}

int cmd_flow(const FlowArgs& a, RunSpec spec) {
  if (a.k < 2) throw isoflow::ContractError("--k must be at least 2");
  const auto k = static_cast<std::size_t>(a.k);
  std::vector<double> c0;
  if (a.init == "random") {
    isoflow::SplitMix64 rng(spec.seed);
    c0 = isoflow::random_volterra_state(rng, k);
  } else {
    c0 = parse_list(a.init);
    if (c0.size() != k - 1) throw isoflow::ContractError("--init needs k-1 values");
  }
  isoflow::StepMethod method;
  if (a.method == "rk45")
    method = isoflow::StepMethod::dormand_prince;
  else if (a.method == "rk4")
    method = isoflow::StepMethod::rk4;
  else
    throw isoflow::ContractError("--method must be rk45 or rk4");
  const isoflow::IntegratorConfig cfg{a.initial_step, a.tol, a.t_final, a.sample_interval};
  cfg.validate();

  isoflow::TrajectoryRecord rec;
  try {
    rec = isoflow::volterra_trajectory(c0, cfg, method);
  } catch (const isoflow::IntegrationError& e) {
    std::cout << envelope(spec, {{"error", e.what()}, {"time", e.time()}}, false).dump(2) << '\n';
    return kExitFail;
  }

  const std::filesystem::path path =
      a.out.empty() ? output_dir() / ("trajectory_k" + std::to_string(a.k) + ".csv") : std::filesystem::path(a.out);
  {
    std::ofstream os(path);
    if (!os) throw isoflow::ContractError("cannot write " + path.string());
    isoflow::write_trajectory_csv(os, rec);
  }

  double increase = 0.0;
  for (std::size_t i = 1; i < rec.f_values.size(); ++i)
    increase = std::max(increase, rec.f_values[i] - rec.f_values[i - 1]);
  const bool monotone = increase <= a.tol;
  json results = {
      {"k", a.k},
      {"initial", c0},
      {"final", rec.states.back()},
      {"samples", rec.times.size()},
      {"accepted_steps", rec.accepted_steps},
      {"rejected_steps", rec.rejected_steps},
      {"max_spectrum_drift", *std::max_element(rec.spectrum_drift.begin(), rec.spectrum_drift.end())},
      {"max_invariant_drift", *std::max_element(rec.invariant_drift.begin(), rec.invariant_drift.end())},
      {"f_initial", rec.f_values.front()},
      {"f_final", rec.f_values.back()},
      {"f_monotone", monotone},
      {"f_max_increase", increase},
      {"converged_at", rec.converged_at ? json(*rec.converged_at) : json(nullptr)},
      {"nearest_equilibrium", nearest_equilibrium(rec.states.back(), c0)},
      {"trajectory_csv", path.string()},
  };
  if (k % 2 == 0) {
    try {
      const auto sig0 = isoflow::component_signature(c0);
      bool constant = true;
      for (const auto& c : rec.states) constant = constant && isoflow::component_signature(c) == sig0;
      results["component_signature"] = sig0;
      results["signature_constant"] = constant;
    } catch (const isoflow::DegeneratePointError& e) {
      results["component_signature"] = e.what();
    }
  }
  return emit(envelope(spec, results, monotone));
}

// ---------------------------------------------------------------- map

int cmd_map(const std::string& c_list, RunSpec spec) {
  const auto c = parse_list(c_list);
  if (c.size() % 2 == 0) throw isoflow::ContractError("map needs an even matrix size (odd number of c values)");
  const isoflow::JacobiMatrix J = isoflow::volterra_to_toda(c);
  const auto lam = isoflow::verify::detail::positive_lambdas(c);
  std::vector<double> expected;
  for (double x : lam) expected.push_back(0.5 * x * x);
  std::sort(expected.begin(), expected.end());
  const auto toda_spec = isoflow::eigenvalues(J, 1e-13).eigenvalues;
  double residual = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) residual = std::max(residual, std::abs(toda_spec[i] - expected[i]));
  json results = {{"c", c},
                  {"matrix", isoflow::to_json(J)},
                  {"volterra_spectrum", isoflow::eigenvalues(isoflow::ZeroDiagMatrix{c}, 1e-13).eigenvalues},
                  {"toda_spectrum", toda_spec},
                  {"half_lambda_squared", expected},
                  {"residual", residual}};
  return emit(envelope(spec, results, residual < 1e-8));
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string c, a, b, matrix_json;
  double tol = 1e-12;
};

int cmd_spectrum(const SpectrumArgs& args, RunSpec spec) {
  isoflow::AnyMatrix m;
  if (!args.matrix_json.empty())
    m = isoflow::matrix_from_json(json::parse(args.matrix_json));
  else if (!args.a.empty())
    m = isoflow::JacobiMatrix(parse_list(args.a), parse_list(args.b));
  else
    m = isoflow::ZeroDiagMatrix{parse_list(args.c)};

  json results;
  bool pass = true;
  if (const auto* z = std::get_if<isoflow::ZeroDiagMatrix>(&m)) {
    const auto s = isoflow::eigenvalues(*z, args.tol);
    const auto sym = isoflow::spectrum_symmetry_check(s, z->size(), 1e-9);
    pass = sym.ok();
    results = {{"matrix", isoflow::to_json(*z)},
               {"eigenvalues", s.eigenvalues},
               {"symmetric", sym.symmetric},
               {"zero_parity_ok", sym.zero_parity_ok},
               {"invariants", isoflow::invariants(*z).values},
               {"char_poly", isoflow::char_poly(*z).coeffs}};
  } else {
    const auto& jm = std::get<isoflow::JacobiMatrix>(m);
    results = {{"matrix", isoflow::to_json(jm)}, {"eigenvalues", isoflow::eigenvalues(jm, args.tol).eigenvalues}};
  }
  return emit(envelope(spec, results, pass));
}

// ---------------------------------------------------------------- verify

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list(s)) {
    if (v != static_cast<int>(v)) throw isoflow::ContractError("expected integers in --k");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isospectral flows on tridiagonal matrices: Euler characteristics, Morse counts, flow checks"};
  app.require_subcommand(1);
  RunSpec spec;

  ChiArgs chi;
  auto* chi_cmd = app.add_subcommand("chi", "Euler characteristic table by every method");
  chi_cmd->add_option("--family", chi.family, "M (zero-diagonal, odd size) or J (Jacobi)")->check(CLI::IsMember({"M", "J"}));
  chi_cmd->add_option("--l-max", chi.l_max, "largest l for chi(M_{2l+1}), at most 12");
  chi_cmd->add_option("--n-max", chi.n_max, "largest n for chi(J_n), at most 20");
  chi_cmd->add_option("--methods", chi.methods, "closed, egf, combinatorial, morse")->delimiter(',');
  chi_cmd->add_option("--format", chi.format)->check(CLI::IsMember({"json", "csv", "text"}));

  MorseArgs morse;
  auto* morse_cmd = app.add_subcommand("morse", "critical points and signed index count");
  morse_cmd->add_option("--family", morse.family)->check(CLI::IsMember({"M", "J"}));
  morse_cmd->add_option("--l", morse.l, "M_{2l+1}: l in [1, 10]");
  morse_cmd->add_option("--n", morse.n, "J_n: n in [1, 10]");
  morse_cmd->add_flag("--list", morse.list, "list every critical point");
  morse_cmd->add_option("--lambdas", morse.lambdas, "comma-separated spectrum parameters");
  morse_cmd->add_option("--format", morse.format)->check(CLI::IsMember({"json", "text"}));

  FlowArgs flow;
  auto* flow_cmd = app.add_subcommand("flow", "integrate the Volterra flow and write a trajectory CSV");
  flow_cmd->add_option("--k", flow.k, "matrix size")->required();
  flow_cmd->add_option("--init", flow.init, "'random' or comma-separated c_1..c_{k-1}");
  flow_cmd->add_option("--seed", spec.seed);
  flow_cmd->add_option("--t-final", flow.t_final);
  flow_cmd->add_option("--tol", flow.tol, "local error tolerance per step");
  flow_cmd->add_option("--sample-interval", flow.sample_interval);
  flow_cmd->add_option("--initial-step", flow.initial_step);
  flow_cmd->add_option("--method", flow.method)->check(CLI::IsMember({"rk45", "rk4"}));
  flow_cmd->add_option("--out", flow.out, "CSV path (default $ISOFLOW_OUTPUT_DIR/trajectory_k<k>.csv)");

  std::string map_c;
  auto* map_cmd = app.add_subcommand("map", "Volterra-to-Toda map for an even-size matrix");
  map_cmd->add_option("--c", map_c, "comma-separated c_1..c_{k-1}, k even")->required();

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues by Sturm bisection");
  spectrum_cmd->add_option("--c", spectrum.c, "zero-diagonal off-diagonal entries");
  spectrum_cmd->add_option("--a", spectrum.a, "Jacobi diagonal");
  spectrum_cmd->add_option("--b", spectrum.b, "Jacobi off-diagonal");
  spectrum_cmd->add_option("--matrix", spectrum.matrix_json, "matrix as JSON ({\"kind\": ...})");
  spectrum_cmd->add_option("--tol", spectrum.tol);

  std::vector<std::string> suites;
  std::string k_list;
  int samples = -1;
  auto* verify_cmd = app.add_subcommand("verify", "run seeded verification suites");
  verify_cmd->add_option("--suites", suites, "charpoly, spectrum, conservation, lyapunov, map, morse, chi")
      ->delimiter(',');
  verify_cmd->add_option("--k", k_list, "comma-separated matrix sizes");
  verify_cmd->add_option("--samples", samples, "random samples per size");
  verify_cmd->add_option("--seed", spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    spec.command = app.get_subcommands().front()->get_name();
    if (*chi_cmd) return cmd_chi(chi, spec);
    if (*morse_cmd) return cmd_morse(morse, spec);
    if (*flow_cmd) return cmd_flow(flow, spec);
    if (*map_cmd) return cmd_map(map_c, spec);
    if (*spectrum_cmd) return cmd_spectrum(spectrum, spec);
    if (*verify_cmd) {
      isoflow::verify::Options o;
      o.seed = spec.seed;
      o.samples = samples;
      if (!k_list.empty()) o.ks = parse_ints(k_list);
      if (suites.empty()) suites = isoflow::verify::suite_names();
      return emit(isoflow::verify::run(suites, o));
    }
  } catch (const isoflow::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
