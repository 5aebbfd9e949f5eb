#pragma once

// Tabular output: CSV with a header row, %.12e numbers, comma delimiter and
// LF line endings; JSON via nlohmann. Both are byte-stable for equal input.

#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "plurilab/disc_example.hpp"
#include "plurilab/global_radial.hpp"
#include "plurilab/report.hpp"
#include "plurilab/subextension.hpp"

namespace plurilab {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    require(row.size() == columns.size(), ErrorCode::Invariant, "row width does not match the header");
    rows.push_back(std::move(row));
  }
};

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

// Quotes fields holding a delimiter or a quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i])) os << format_number(*d);
      else os << csv_field(std::get<std::string>(row[i]));
    }
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) r[t.columns[i]] = *d;
      else r[t.columns[i]] = std::get<std::string>(row[i]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

/// One row per report: the largest lhs/rhs sample stands in for the report.
inline Table verdict_table(const std::vector<InequalityReport>& reports) {
  Table t{{"name", "verdict", "worst_s", "worst_ratio", "fitted_constant", "lhs", "rhs", "note"}, {}};
  for (const auto& r : reports) {
    double lhs = 0.0, rhs = 0.0, worst = -1.0;
    for (const auto& s : r.samples) {
      if (ratio_of(s.lhs, s.rhs) > worst) {
        worst = ratio_of(s.lhs, s.rhs);
        lhs = s.lhs;
        rhs = s.rhs;
      }
    }
    t.add({r.name, std::string(to_string(r.verdict)), r.worst_s, r.worst_ratio, r.fitted_constant, lhs, rhs, r.note});
  }
  return t;
}

inline Table sample_table(const InequalityReport& r) {
  Table t{{"name", "s", "lhs", "rhs", "relation"}, {}};
  for (const auto& s : r.samples) t.add({r.name, s.s, s.lhs, s.rhs, s.relation});
  return t;
}

inline nlohmann::ordered_json verdicts_json(const std::vector<InequalityReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  const Table t = verdict_table(reports);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out.push_back({{"name", reports[i].name},
                   {"holds", reports[i].holds()},
                   {"verdict", to_string(reports[i].verdict)},
                   {"worst_s", reports[i].worst_s},
                   {"lhs", std::get<double>(t.rows[i][5])},
                   {"rhs", std::get<double>(t.rows[i][6])}});
  }
  return out;
}

/// (t, u_c(t), f(t), eta_c max(t, 0) - c); f is NaN outside the unit ball.
inline Table field_table(const SubextensionField& field, const std::vector<double>& ts) {
  Table t{{"t", "u", "f", "growth_bound"}, {}};
  for (double x : ts) {
    const double f = field.source() && x <= 0.0 ? detail::value(*field.source(), x) : NAN;
    t.add({x, field.u(x), f, field.eta() * std::max(x, 0.0) + field.growth_constant()});
  }
  return t;
}

inline Table global_profile_table(const GlobalProfile& g, const std::vector<double>& ts) {
  Table t{{"t", "g"}, {}};
  for (double x : ts) t.add({x, g.eval(x)});
  return t;
}

inline Table obstruction_table(const GreenPoleSystem& sys) {
  Table t{{"J", "obstruction_sum", "riesz_mass"}, {}};
  for (std::size_t J = 1; J <= sys.size(); ++J)
    t.add({static_cast<double>(J), obstruction_sum(sys, J), riesz_mass(sys, J)});
  return t;
}

/// v on an N x N lattice of [-1, 1]^2; points outside the disc get NaN.
inline Table heatmap_table(const GreenPoleSystem& sys, int N) {
  require(N >= 2, ErrorCode::Domain, "lattice size must be >= 2");
  Table t{{"x", "y", "v"}, {}};
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double x = -1.0 + 2.0 * i / (N - 1);
      const double y = -1.0 + 2.0 * j / (N - 1);
      const cplx z{x, y};
      t.add({x, y, std::abs(z) < 1.0 ? v_field(sys, z) : NAN});
    }
  }
  return t;
}

}  // namespace plurilab
