#include "epilab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include "json.hpp"

#include "epilab/kernels.hpp"

namespace epilab::runner {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw std::runtime_error("config field '" + field + "': " + msg);
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number_at(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

dist::Distribution1D parse_distribution(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  if (!j.contains("family") || !j.at("family").is_string())
    fail(field + ".family", "expected a string");
  const std::string family = j.at("family").get<std::string>();
  auto allow_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
      bool ok = item.key() == "family";
      for (const char* k : allowed) ok = ok || item.key() == k;
      if (!ok) fail(field + "." + item.key(), "unknown key for family '" + family + "'");
    }
  };
  auto want = [&](const char* key) -> const json& {
    if (!j.contains(key)) fail(field + "." + key, "required for family '" + family + "'");
    return j.at(key);
  };
  try {
    if (family == "gaussian") {
      allow_keys({"variance"});
      return dist::Distribution1D::gaussian(number_at(want("variance"), field + ".variance"));
    }
    if (family == "laplace") {
      allow_keys({"scale"});
      return dist::Distribution1D::laplace(number_at(want("scale"), field + ".scale"));
    }
    if (family == "logistic") {
      allow_keys({"scale"});
      return dist::Distribution1D::logistic(number_at(want("scale"), field + ".scale"));
    }
    if (family == "gaussian_mixture") {
      allow_keys({"weights", "locations", "sigmas"});
      return dist::Distribution1D::gaussian_mixture(
          number_list(want("weights"), field + ".weights"),
          number_list(want("locations"), field + ".locations"),
          number_list(want("sigmas"), field + ".sigmas"));
    }
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
  fail(field + ".family", "unknown family '" + family + "'");
}

Eigen::MatrixXd orthonormal_rows(int rows, int cols, std::uint64_t seed) {
  kernels::Rng rng(seed);
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (;;) {
      for (int c = 0; c < cols; ++c) a(i, c) = rng.normal();
      // re-orthogonalize once; a single pass leaves residuals near the
      // rounding floor but the second pass makes that unconditional
      for (int pass = 0; pass < 2; ++pass)
        for (int p = 0; p < i; ++p) a.row(i) -= a.row(i).dot(a.row(p)) * a.row(p);
      const double n = a.row(i).norm();
      if (n > 1e-6) {
        a.row(i) /= n;
        break;
      }
    }
  }
  return a;
}

ReportRecord plain_record(ineq::InequalityReport rep) {
  ReportRecord rec;
  rec.check = rep.name;
  rec.inputs = rep.inputs;
  rec.report = std::move(rep);
  return rec;
}

std::vector<ReportRecord> chain_records(const ineq::ChainReport& chain) {
  std::vector<ReportRecord> out;
  for (const auto& s : chain.steps) {
    ReportRecord rec;
    rec.check = chain.name + "." + s.name;
    rec.inputs = s.inputs;
    rec.report = s;
    out.push_back(std::move(rec));
  }
  // The telescoping identity is part of the contract: the step gaps must
  // reassemble the independently computed reference value. A mismatch in
  // either direction is a defect, so the verdict is equality-or-violated.
  ReportRecord tot;
  tot.check = chain.name + ".total";
  tot.inputs = chain.inputs;
  tot.report.name = "total";
  tot.report.inputs = chain.inputs;
  tot.report.lhs = chain.total_gap;
  tot.report.rhs = chain.reference_gap;
  tot.report.gap = chain.total_gap - chain.reference_gap;
  tot.report.err = 0.0;
  tot.report.tol = 1e-8;
  tot.report.verdict = std::abs(tot.report.gap) <= tot.report.tol ? ineq::Verdict::equality
                                                                  : ineq::Verdict::violated;
  out.push_back(std::move(tot));
  return out;
}

struct Cell {
  std::string check;
  std::string echo;  // names the config cell; shown on error records
  std::function<std::vector<ReportRecord>()> work;
};

const dist::Distribution1D& named(const ExperimentConfig& cfg, const std::string& name) {
  for (const auto& [n, d] : cfg.distributions)
    if (n == name) return d;
  throw std::logic_error("unresolved distribution '" + name + "'");
}

std::vector<Cell> build_cells(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::vector<Cell> cells;
  auto pair_echo = [](const std::array<std::string, 2>& p) {
    return "pair=(" + p[0] + ", " + p[1] + ")";
  };

  using PairLambdaFn = ineq::InequalityReport (*)(const dist::Distribution1D&,
                                                  const dist::Distribution1D&, double);
  using ChainFn = ineq::ChainReport (*)(const dist::Distribution1D&, const dist::Distribution1D&,
                                        double);

  for (const std::string& check : cfg.checks) {
    if (check == "epi_shannon") {
      for (const auto& p : cfg.pairs) {
        const auto* x = &named(cfg, p[0]);
        const auto* y = &named(cfg, p[1]);
        cells.push_back({check, pair_echo(p), [x, y] {
                           return std::vector<ReportRecord>{plain_record(ineq::epi_shannon(*x, *y))};
                         }});
      }
    } else if (check == "epi_lieb" || check == "epi_power_concavity" || check == "reverse_epi" ||
               check == "reverse_equivalence") {
      PairLambdaFn fn = nullptr;
      if (check == "epi_lieb") fn = &ineq::epi_lieb;
      if (check == "epi_power_concavity") fn = &ineq::epi_power_concavity;
      if (check == "reverse_epi") fn = &ineq::reverse_epi;
      if (check == "reverse_equivalence") fn = &ineq::reverse_equivalence;
      for (const auto& p : cfg.pairs)
        for (double l : cfg.lambdas) {
          const auto* x = &named(cfg, p[0]);
          const auto* y = &named(cfg, p[1]);
          cells.push_back({check, pair_echo(p) + "; lambda=" + fmt6(l), [fn, x, y, l] {
                             return std::vector<ReportRecord>{plain_record(fn(*x, *y, l))};
                           }});
        }
    } else if (check == "deficit_sandwich" || check == "proof_chain") {
      ChainFn fn = check == "deficit_sandwich" ? &ineq::deficit_sandwich : &ineq::proof_chain;
      for (const auto& p : cfg.pairs)
        for (double l : cfg.lambdas) {
          const auto* x = &named(cfg, p[0]);
          const auto* y = &named(cfg, p[1]);
          cells.push_back({check, pair_echo(p) + "; lambda=" + fmt6(l),
                           [fn, x, y, l] { return chain_records(fn(*x, *y, l)); }});
        }
    } else if (check == "equality_diagnostics") {
      for (const auto& p : cfg.pairs)
        for (double l : cfg.lambdas) {
          const auto* x = &named(cfg, p[0]);
          const auto* y = &named(cfg, p[1]);
          cells.push_back({check, pair_echo(p) + "; lambda=" + fmt6(l), [x, y, l] {
                             const auto d = ineq::equality_diagnostics(*x, *y, l);
                             ReportRecord rec;
                             rec.check = "equality_diagnostics";
                             rec.inputs = "X=" + x->describe() + "; Y=" + y->describe() +
                                          "; lambda=" + fmt6(l) +
                                          "; regime=" + (d.equality_regime ? "yes" : "no");
                             rec.report.name = rec.check;
                             rec.report.inputs = rec.inputs;
                             rec.report.lhs = d.t_deriv_spread;
                             rec.report.rhs = d.u_deriv_spread;
                             rec.report.gap = d.lieb_gap;
                             rec.report.err = 0.0;
                             rec.report.tol = 1e-6;
                             rec.report.verdict = d.equality_regime ? ineq::Verdict::equality
                                                                    : ineq::Verdict::holds;
                             return std::vector<ReportRecord>{rec};
                           }});
        }
    } else if (check == "zamir_feder") {
      for (const auto& t : cfg.triples) {
        std::vector<const dist::Distribution1D*> ds = {&named(cfg, t[0]), &named(cfg, t[1]),
                                                       &named(cfg, t[2])};
        const std::string echo = "triple=(" + t[0] + ", " + t[1] + ", " + t[2] + ")";
        cells.push_back({check, echo, [ds] {
                           const double a0 = 1.0 / std::sqrt(3.0);
                           const std::vector<double> a = {a0, a0, a0};
                           const std::vector<dist::Distribution1D> xs = {*ds[0], *ds[1], *ds[2]};
                           return std::vector<ReportRecord>{plain_record(ineq::zamir_feder(a, xs))};
                         }});
      }
    } else if (check == "zamir_feder_rows") {
      // the row form is Gaussian-only; non-Gaussian triples generate no cell
      std::size_t k = 0;
      for (const auto& t : cfg.triples) {
        std::vector<const dist::Distribution1D*> ds = {&named(cfg, t[0]), &named(cfg, t[1]),
                                                       &named(cfg, t[2])};
        bool all_gaussian = true;
        for (const auto* d : ds) all_gaussian = all_gaussian && d->family() == dist::Family::gaussian;
        if (!all_gaussian) continue;
        const Eigen::MatrixXd a = orthonormal_rows(2, 3, seed + 1000003ull * (k + 1));
        ++k;
        const std::string echo = "triple=(" + t[0] + ", " + t[1] + ", " + t[2] + ")";
        cells.push_back({check, echo, [a, ds] {
                           const std::vector<dist::Distribution1D> xs = {*ds[0], *ds[1], *ds[2]};
                           return std::vector<ReportRecord>{
                               plain_record(ineq::zamir_feder_rows(a, xs))};
                         }});
      }
    } else if (check == "renyi_epi") {
      // orders come from the r components of the exponent triples
      std::vector<double> orders;
      for (const auto& e : cfg.exponents)
        if (std::find(orders.begin(), orders.end(), e[2]) == orders.end()) orders.push_back(e[2]);
      for (const auto& p : cfg.pairs)
        for (double l : cfg.lambdas)
          for (double r : orders) {
            const auto* x = &named(cfg, p[0]);
            const auto* y = &named(cfg, p[1]);
            const std::string echo =
                pair_echo(p) + "; lambda=" + fmt6(l) + "; r=" + fmt6(r);
            cells.push_back({check, echo, [x, y, l, r] {
                               return std::vector<ReportRecord>{
                                   plain_record(ineq::renyi_epi(*x, *y, l, r))};
                             }});
          }
    } else if (check == "young_check") {
      for (const auto& p : cfg.pairs)
        for (const auto& e : cfg.exponents) {
          const auto* x = &named(cfg, p[0]);
          const auto* y = &named(cfg, p[1]);
          const std::string echo = pair_echo(p) + "; p=" + fmt6(e[0]) + ", q=" + fmt6(e[1]) +
                                   ", r=" + fmt6(e[2]);
          cells.push_back({check, echo, [x, y, e] {
                             return std::vector<ReportRecord>{
                                 plain_record(ineq::young_check(*x, *y, e[0], e[1], e[2]))};
                           }});
        }
    } else if (check == "always_violated") {
      cells.push_back({check, "fixture", [] {
                         ReportRecord rec;
                         rec.check = "always_violated";
                         rec.inputs = "fixture";
                         rec.report.name = rec.check;
                         rec.report.inputs = rec.inputs;
                         rec.report.lhs = 0.0;
                         rec.report.rhs = 1.0;
                         rec.report.gap = -1.0;
                         rec.report.err = 0.0;
                         rec.report.tol = 1e-9;
                         rec.report.verdict = ineq::classify(-1.0, 0.0, 1e-9);
                         return std::vector<ReportRecord>{rec};
                       }});
    } else {
      throw std::logic_error("no cell builder for check '" + check + "'");
    }
  }
  return cells;
}

// Tolerance overrides and --tol-scale reclassify rows after the fact. Two
// row kinds opt out of the generic gap classification: equality_diagnostics
// (its verdict is a regime flag, not a gap sign) and chain ".total" rows
// (an identity, judged two-sided).
void apply_tolerances(ReportRecord& rec, const std::map<std::string, double>& overrides,
                      double scale) {
  if (!rec.error.empty()) return;
  const std::string base = rec.check.substr(0, rec.check.find('.'));
  if (base == "equality_diagnostics") return;
  double tol = rec.report.tol;
  if (auto it = overrides.find(base); it != overrides.end()) tol = it->second;
  tol *= scale;
  rec.report.tol = tol;
  if (rec.check.size() >= 6 && rec.check.compare(rec.check.size() - 6, 6, ".total") == 0)
    rec.report.verdict = std::abs(rec.report.gap) <= tol ? ineq::Verdict::equality
                                                         : ineq::Verdict::violated;
  else
    rec.report.verdict = ineq::classify(rec.report.gap, rec.report.err, tol);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config parse: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config: top level must be an object");
  static const char* known[] = {"schema",  "checks",    "distributions", "pairs",  "triples",
                                "lambdas", "exponents", "seed",          "tolerances", "output"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) fail(item.key(), "unknown field");
  }

  ExperimentConfig cfg;
  if (!j.contains("schema") || !j.at("schema").is_number_integer() ||
      j.at("schema").get<int>() != 1)
    fail("schema", "this tool reads schema 1");
  cfg.schema_version = 1;

  if (!j.contains("checks") || !j.at("checks").is_array())
    fail("checks", "expected an array of check names");
  for (std::size_t i = 0; i < j.at("checks").size(); ++i) {
    const auto& c = j.at("checks")[i];
    const std::string field = "checks[" + std::to_string(i) + "]";
    if (!c.is_string()) fail(field, "expected a string");
    const std::string name = c.get<std::string>();
    if (find_check(name) == nullptr) fail(field, "unknown check '" + name + "'");
    cfg.checks.push_back(name);
  }

  if (!j.contains("distributions") || !j.at("distributions").is_object())
    fail("distributions", "expected an object of named distribution specs");
  for (const auto& item : j.at("distributions").items())
    cfg.distributions.emplace_back(item.key(),
                                   parse_distribution(item.value(), "distributions." + item.key()));
  if (cfg.distributions.empty()) fail("distributions", "at least one distribution is required");

  auto resolve = [&](const std::string& name, const std::string& field) {
    for (const auto& [n, d] : cfg.distributions)
      if (n == name) return;
    fail(field, "unknown distribution '" + name + "'");
  };

  if (j.contains("pairs")) {
    const auto& p = j.at("pairs");
    if (p.is_string() && p.get<std::string>() == "cross") {
      for (const auto& [na, da] : cfg.distributions)
        for (const auto& [nb, db] : cfg.distributions) cfg.pairs.push_back({na, nb});
    } else if (p.is_array()) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        const std::string field = "pairs[" + std::to_string(i) + "]";
        if (!p[i].is_array() || p[i].size() != 2 || !p[i][0].is_string() || !p[i][1].is_string())
          fail(field, "expected [name, name]");
        std::array<std::string, 2> pair = {p[i][0].get<std::string>(),
                                           p[i][1].get<std::string>()};
        resolve(pair[0], field);
        resolve(pair[1], field);
        cfg.pairs.push_back(pair);
      }
    } else {
      fail("pairs", "expected \"cross\" or an array of name pairs");
    }
  }

  if (j.contains("triples")) {
    const auto& t = j.at("triples");
    if (t.is_string() && t.get<std::string>() == "cross") {
      for (const auto& [na, da] : cfg.distributions)
        for (const auto& [nb, db] : cfg.distributions)
          for (const auto& [nc, dc] : cfg.distributions) cfg.triples.push_back({na, nb, nc});
    } else if (t.is_array()) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string field = "triples[" + std::to_string(i) + "]";
        if (!t[i].is_array() || t[i].size() != 3 || !t[i][0].is_string() ||
            !t[i][1].is_string() || !t[i][2].is_string())
          fail(field, "expected [name, name, name]");
        std::array<std::string, 3> triple = {t[i][0].get<std::string>(),
                                             t[i][1].get<std::string>(),
                                             t[i][2].get<std::string>()};
        for (const auto& n : triple) resolve(n, field);
        cfg.triples.push_back(triple);
      }
    } else {
      fail("triples", "expected \"cross\" or an array of name triples");
    }
  }

  if (j.contains("lambdas")) {
    cfg.lambdas = number_list(j.at("lambdas"), "lambdas");
    for (std::size_t i = 0; i < cfg.lambdas.size(); ++i)
      if (!(cfg.lambdas[i] > 0.0 && cfg.lambdas[i] < 1.0))
        fail("lambdas[" + std::to_string(i) + "]", "lambda must lie strictly between 0 and 1");
  }

  if (j.contains("exponents")) {
    const auto& e = j.at("exponents");
    if (!e.is_array()) fail("exponents", "expected an array of [p, q, r] triples");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string field = "exponents[" + std::to_string(i) + "]";
      if (!e[i].is_array() || e[i].size() != 3) fail(field, "expected [p, q, r]");
      cfg.exponents.push_back({number_at(e[i][0], field + "[0]"),
                               number_at(e[i][1], field + "[1]"),
                               number_at(e[i][2], field + "[2]")});
    }
  }

  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object of check -> tolerance");
    for (const auto& item : t.items()) {
      const std::string field = "tolerances." + item.key();
      if (find_check(item.key()) == nullptr) fail(field, "unknown check '" + item.key() + "'");
      const double v = number_at(item.value(), field);
      if (!(v > 0.0)) fail(field, "tolerance must be positive");
      cfg.tolerances[item.key()] = v;
    }
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) fail("output", "expected an object {path, format}");
    for (const auto& item : o.items())
      if (item.key() != "path" && item.key() != "format") fail("output." + item.key(), "unknown key");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) fail("output.path", "expected a string");
      cfg.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) fail("output.format", "expected a string");
      cfg.output_format = o.at("format").get<std::string>();
      if (cfg.output_format != "json" && cfg.output_format != "csv")
        fail("output.format", "expected \"json\" or \"csv\"");
    }
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> reg = {
      {"epi_shannon", "entropy power of an independent sum dominates the sum of entropy powers",
       "lhs = N(X+Y) computed from the grid entropy of the convolution; rhs = N(X) + N(Y)\n"
       "from per-input entropies. gap = lhs - rhs, expected >= 0; equality exactly when\n"
       "both inputs are Gaussian. Grid tolerance 1e-5.",
       "one cell per pair"},
      {"epi_lieb", "entropy of the power-preserving combination dominates the entropy mix",
       "lhs = h(sqrt(lambda) X + sqrt(1-lambda) Y); rhs = lambda h(X) + (1-lambda) h(Y).\n"
       "gap = lhs - rhs, expected >= 0; equality iff X and Y are Gaussian with equal\n"
       "power. Grid tolerance 1e-5.",
       "one cell per pair x lambda"},
      {"epi_power_concavity", "entropy power is concave along the power-preserving combination",
       "lhs = N(sqrt(lambda) X + sqrt(1-lambda) Y); rhs = lambda N(X) + (1-lambda) N(Y).\n"
       "gap = lhs - rhs, expected >= 0. Grid tolerance 1e-5, scaled through the\n"
       "exponential that maps entropies to powers.",
       "one cell per pair x lambda"},
      {"reverse_epi", "conditional entropy of the rotated pair is dominated by the entropy mix",
       "For U = sqrt(lambda) X + sqrt(1-lambda) Y, V = -sqrt(1-lambda) X + sqrt(lambda) Y:\n"
       "lhs = h(U|V) via the exact rotation identity h(U|V) = h(X) + h(Y) - h(V);\n"
       "rhs = lambda h(X) + (1-lambda) h(Y). gap = rhs - lhs, expected >= 0.",
       "one cell per pair x lambda"},
      {"deficit_sandwich", "the combination gap is squeezed between zero and the mutual information",
       "Two-step chain over d = h(U) - lambda h(X) - (1-lambda) h(Y):\n"
       "  deficit_sandwich.deficit_nonneg   gap = d            expected >= 0\n"
       "  deficit_sandwich.deficit_le_mi    gap = I(U;V) - d   expected >= 0\n"
       "  deficit_sandwich.total            telescoping: step gaps re-sum to I(U;V)\n"
       "The .total row is judged two-sided at 1e-8.",
       "one cell per pair x lambda; three output rows per cell"},
      {"proof_chain", "per-step transport decomposition of the combination gap",
       "X and Y are realized as monotone transports of standard Gaussians; the gap of\n"
       "epi_lieb splits into five steps, each expected >= 0 within its tolerance:\n"
       "  proof_chain.transport_identity_x  weighted change-of-variable residual for X\n"
       "  proof_chain.transport_identity_y  weighted change-of-variable residual for Y\n"
       "  proof_chain.jensen                E log of mixed derivative vs mixed E logs\n"
       "  proof_chain.conditioning          h(U) vs the conditional Gaussian-line entropy\n"
       "  proof_chain.gaussian_line         Gaussian-line entropy vs the standard Gaussian\n"
       "  proof_chain.total                 telescoping: step gaps re-sum to the epi_lieb gap\n"
       "The .total row is judged two-sided at 1e-8.",
       "one cell per pair x lambda; six output rows per cell"},
      {"equality_diagnostics", "how far the pair is from the equality regime of the combination gap",
       "lhs = spread of the transport derivative for X (max deviation from its mean over\n"
       "a probability-uniform probe grid); rhs = same for Y; gap column carries the\n"
       "epi_lieb gap. verdict = equality iff both spreads < 1e-6 and the gap < 1e-6\n"
       "(constant derivatives mean Gaussian inputs with proportional scale), else holds.\n"
       "This row is a regime flag; tolerance overrides do not reclassify it.",
       "one cell per pair x lambda"},
      {"reverse_equivalence", "the reverse statement and the swapped-weight direct statement coincide",
       "gap = [lambda h(X) + (1-lambda) h(Y) - h(U|V)] - [h(V) - (1-lambda) h(X) - lambda h(Y)].\n"
       "Both brackets measure the same quantity through the rotation identity, so the\n"
       "difference is expected to vanish; judged at 1e-6.",
       "one cell per pair x lambda"},
      {"zamir_feder", "entropy of a unit-coefficient combination dominates the coefficient mix",
       "For a unit vector a (equal coefficients over the triple), lhs = h(sum a_i X_i),\n"
       "rhs = sum a_i^2 h(X_i). gap = lhs - rhs, expected >= 0. Grid tolerance 1e-5.",
       "one cell per triple, with a_i = 1/sqrt(3)"},
      {"zamir_feder_rows", "determinant form of the combination bound for orthonormal row mixing",
       "For a seeded random 2x3 matrix A with orthonormal rows applied to independent\n"
       "Gaussian components, lhs = h(AX) from the exact Gaussian entropy of A K A^T,\n"
       "rhs = the row-weighted mix of component entropies. gap = lhs - rhs, expected\n"
       ">= 0. Closed-form tolerance 1e-9. Non-Gaussian triples generate no cell.",
       "one cell per all-Gaussian triple; matrix drawn from the run seed"},
      {"renyi_epi", "Renyi entropy of the combination dominates the conjugate-order mix",
       "For order r, conjugate orders p, q solve r/(r-lambda(r-1)) and the symmetric\n"
       "expression; gap = [h_r(combination) - lambda h_p(X) - (1-lambda) h_q(Y)] minus\n"
       "the same expression for standard Gaussians, expected >= 0. Orders r are taken\n"
       "from the r components of the exponent triples. Grid tolerance 1e-5.",
       "one cell per pair x lambda x order"},
      {"young_check", "sharp convolution-norm bound with its Gaussian constants",
       "For exponents (p, q, r) with 1/p + 1/q = 1 + 1/r: lhs = C_r ||f*g||_r,\n"
       "rhs = C_p C_q ||f||_p ||g||_q with C_s = sqrt(s^(1/s) / |s'|^(1/s')).\n"
       "Forward regime (r > 1): gap = rhs - lhs >= 0. Reverse regime (r < 1):\n"
       "gap = lhs - rhs >= 0. The inputs echo records the achieved ratio.",
       "one cell per pair x exponent triple"},
      {"always_violated", "fixture that always reports a violated verdict",
       "Emits a single row with gap = -1 and tolerance 1e-9. Exists so the exit-status\n"
       "contract (nonzero on any violated verdict) can be tested end to end.",
       "one cell"},
  };
  return reg;
}

const CheckInfo* find_check(const std::string& name) {
  for (const auto& info : check_registry())
    if (info.name == name) return &info;
  return nullptr;
}

RunResult run(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!(opts.tol_scale > 0.0)) throw std::invalid_argument("tol-scale must be positive");
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);

  const std::vector<Cell> cells = build_cells(cfg, seed);
  std::vector<std::vector<ReportRecord>> slots(cells.size());
  auto run_cell = [&](std::size_t i) {
    try {
      slots[i] = cells[i].work();
    } catch (const std::exception& e) {
      ReportRecord rec;
      rec.check = cells[i].check;
      rec.inputs = cells[i].echo;
      rec.error = e.what();
      slots[i] = {std::move(rec)};
    }
  };

  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(opts.workers), std::max<std::size_t>(cells.size(), 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < cells.size();
             i += static_cast<std::size_t>(workers))
          run_cell(i);
      });
    for (auto& th : pool) th.join();
  }

  RunResult r;
  for (auto& s : slots)
    for (auto& rec : s) r.records.push_back(std::move(rec));
  for (auto& rec : r.records) apply_tolerances(rec, cfg.tolerances, opts.tol_scale);
  for (const auto& rec : r.records) {
    if (!rec.error.empty()) {
      ++r.summary.errors;
      continue;
    }
    switch (rec.report.verdict) {
      case ineq::Verdict::holds: ++r.summary.holds; break;
      case ineq::Verdict::equality: ++r.summary.equality; break;
      case ineq::Verdict::violated_within_err: ++r.summary.violated_within_err; break;
      case ineq::Verdict::violated: ++r.summary.violated; break;
    }
  }
  return r;
}

std::string emit_json(const ExperimentConfig& cfg, const RunOptions& opts, const RunResult& r) {
  ordered_json out;
  out["schema_version"] = 1;

  ordered_json echo;
  echo["checks"] = cfg.checks;
  {
    ordered_json dists;
    for (const auto& [n, d] : cfg.distributions) dists[n] = d.describe();
    echo["distributions"] = std::move(dists);
  }
  {
    ordered_json pairs = ordered_json::array();
    for (const auto& p : cfg.pairs) pairs.push_back({p[0], p[1]});
    echo["pairs"] = std::move(pairs);
    ordered_json triples = ordered_json::array();
    for (const auto& t : cfg.triples) triples.push_back({t[0], t[1], t[2]});
    echo["triples"] = std::move(triples);
  }
  echo["lambdas"] = cfg.lambdas;
  {
    ordered_json expo = ordered_json::array();
    for (const auto& e : cfg.exponents) expo.push_back({e[0], e[1], e[2]});
    echo["exponents"] = std::move(expo);
  }
  echo["seed"] = opts.seed.value_or(cfg.seed);
  echo["tolerances"] = cfg.tolerances;
  echo["tol_scale"] = opts.tol_scale;
  echo["workers"] = opts.workers;
  out["config_echo"] = std::move(echo);

  ordered_json reports = ordered_json::array();
  for (const auto& rec : r.records) {
    ordered_json row;
    row["check"] = rec.check;
    row["inputs"] = rec.inputs;
    if (!rec.error.empty()) {
      row["error"] = rec.error;
    } else {
      row["lhs"] = rec.report.lhs;
      row["rhs"] = rec.report.rhs;
      row["gap"] = rec.report.gap;
      row["err"] = rec.report.err;
      row["tol"] = rec.report.tol;
      row["verdict"] = ineq::to_string(rec.report.verdict);
    }
    reports.push_back(std::move(row));
  }
  out["reports"] = std::move(reports);

  ordered_json sum;
  sum["holds"] = r.summary.holds;
  sum["equality"] = r.summary.equality;
  sum["violated_within_err"] = r.summary.violated_within_err;
  sum["violated"] = r.summary.violated;
  sum["errors"] = r.summary.errors;
  sum["total"] = r.summary.total();
  out["summary"] = std::move(sum);

  return out.dump(2) + "\n";
}

std::string emit_csv(const RunResult& r) {
  std::string out = "check,inputs,lhs,rhs,gap,err,verdict\n";
  for (const auto& rec : r.records) {
    out += rec.check;
    out += ',';
    out += csv_quote(rec.inputs);
    out += ',';
    if (!rec.error.empty()) {
      out += ",,,,error\n";
      continue;
    }
    out += fmt17(rec.report.lhs);
    out += ',';
    out += fmt17(rec.report.rhs);
    out += ',';
    out += fmt17(rec.report.gap);
    out += ',';
    out += fmt17(rec.report.err);
    out += ',';
    out += ineq::to_string(rec.report.verdict);
    out += '\n';
  }
  return out;
}

}  // namespace epilab::runner
