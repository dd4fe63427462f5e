#pragma once

// JSON and CSV encodings shared by the command-line tool and its consumers.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "isoflow/error.hpp"
#include "isoflow/exact_rational.hpp"
#include "isoflow/integrator.hpp"
#include "isoflow/morse.hpp"
#include "isoflow/tridiagonal.hpp"

namespace isoflow {

using json = nlohmann::json;

/// %.17g: round-trips every double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json to_json(const ExactRational& r) { return r.to_string(); }

inline ExactRational rational_from_json(const json& j) {
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  auto parse = [](const std::string& digits) {
    int128 v = 0;
    std::size_t i = 0;
    const bool neg = !digits.empty() && digits[0] == '-';
    if (neg) i = 1;
    if (i == digits.size()) throw ContractError("bad rational literal");
    for (; i < digits.size(); ++i) {
      if (digits[i] < '0' || digits[i] > '9') throw ContractError("bad rational literal: " + digits);
      v = checked::add(checked::mul(v, int128{10}), int128{digits[i] - '0'});
    }
    return neg ? -v : v;
  };
  if (slash == std::string::npos) return {parse(s), 1};
  return {parse(s.substr(0, slash)), parse(s.substr(slash + 1))};
}

inline json to_json(const ZeroDiagMatrix& m) { return {{"kind", "zerodiag"}, {"c", m.c}}; }

inline json to_json(const JacobiMatrix& m) { return {{"kind", "jacobi"}, {"a", m.a}, {"b", m.b}}; }

using AnyMatrix = std::variant<ZeroDiagMatrix, JacobiMatrix>;

inline AnyMatrix matrix_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "zerodiag") return ZeroDiagMatrix{j.at("c").get<std::vector<double>>()};
  if (kind == "jacobi")
    return JacobiMatrix(j.at("a").get<std::vector<double>>(), j.at("b").get<std::vector<double>>());
  throw ContractError("unknown matrix kind: " + kind);
}

inline json to_json(const CriticalPoint& p) {
  return {{"j", p.j}, {"s", p.s}, {"pi", p.pi}, {"coords", p.coords}, {"index", morse_index(p)}};
}

/// Header t,c_1..c_{k-1},f,spectrum_drift,invariant_drift; one row per sample.
inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  const std::size_t dim = rec.states.empty() ? 0 : rec.states.front().size();
  os << "t";
  for (std::size_t i = 1; i <= dim; ++i) os << ",c_" << i;
  os << ",f,spectrum_drift,invariant_drift\n";
  for (std::size_t n = 0; n < rec.times.size(); ++n) {
    os << format_double(rec.times[n]);
    for (double x : rec.states[n]) os << ',' << format_double(x);
    os << ',' << format_double(rec.f_values.at(n)) << ',' << format_double(rec.spectrum_drift.at(n)) << ','
       << format_double(rec.invariant_drift.at(n)) << '\n';
  }
}

struct ChiRow {
  int l = 0;
  std::optional<int64_t> closed, egf, combinatorial, morse;
};

/// Header l,chi_closed,chi_egf,chi_combinatorial,chi_morse; methods not run stay empty.
inline void write_chi_csv(std::ostream& os, const std::vector<ChiRow>& rows) {
  auto cell = [](const std::optional<int64_t>& v) { return v ? std::to_string(*v) : std::string{}; };
  os << "l,chi_closed,chi_egf,chi_combinatorial,chi_morse\n";
  for (const auto& r : rows)
    os << r.l << ',' << cell(r.closed) << ',' << cell(r.egf) << ',' << cell(r.combinatorial) << ','
       << cell(r.morse) << '\n';
}

}  // namespace isoflow
