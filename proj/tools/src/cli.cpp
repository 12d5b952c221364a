// Copyright 2026 The theta-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>
#include "theta_forge/errors.hpp"
#include "theta_forge/forms.hpp"
#include "theta_forge/identities.hpp"
#include "theta_forge/io.hpp"
#include "theta_forge/parallel.hpp"
#include "theta_forge/theta.hpp"

namespace theta_forge::cli {
namespace {

using nlohmann::ordered_json;

// Resolved options shared by all subcommands.
struct RunConfig {
  std::optional<int> genus;
  std::uint64_t seed = 0;
  double tolerance = 0.0;  // 0: every check keeps its own tolerance
  TruncationPolicy policy;
  std::string output_path;
  std::string filter = "*";
  bool timings = false;
};

// Thrown for unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Usage problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << text;
  file.close();
  if (!file) throw IoError("write to '" + path + "' failed");
}

ordered_json complex_json(const Complex& z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json matrix_json(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json config_json(const std::string& command, const RunConfig& config, const std::vector<int>& genera) {
  ordered_json doc;
  doc["command"] = command;
  doc["genera"] = genera;
  doc["seed"] = config.seed;
  doc["tolerance"] = config.tolerance > 0.0 ? ordered_json(config.tolerance) : ordered_json(nullptr);
  doc["filter"] = config.filter;
  doc["truncation"] = {{"radius", config.policy.radius},
                       {"target_tol", config.policy.target_tol},
                       {"adaptive", config.policy.adaptive}};
  doc["threads"] = configured_threads();
  doc["timings"] = config.timings;
  return doc;
}

std::vector<SiegelPoint> base_points(const std::string& tau_file, int random_count, std::optional<int> genus,
                                     std::uint64_t seed) {
  std::vector<SiegelPoint> out;
  if (!tau_file.empty()) {
    const std::string text = read_file(tau_file);
    try {
      out.push_back(siegel_point_from_json(text));
    } catch (const ParseError& e) {
      throw UsageError("tau file '" + tau_file + "': " + e.what());
    }
    if (genus && out.front().genus() != *genus)
      throw DomainError("--g " + std::to_string(*genus) + " differs from the genus of the tau file");
    return out;
  }
  if (!genus) throw UsageError("--random-tau needs --g");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < random_count; ++i) out.push_back(random_siegel_point(*genus, rng));
  return out;
}

// ---- form specifications for `audit` ----

std::vector<int> parse_bits(const std::string& text, std::size_t begin, std::size_t end) {
  std::vector<int> bits;
  for (std::size_t i = begin; i < end; ++i) {
    if (text[i] != '0' && text[i] != '1') throw ParseError("expected 0 or 1", i + 1);
    bits.push_back(text[i] - '0');
  }
  if (bits.empty()) throw ParseError("empty bit string", begin + 1);
  return bits;
}

std::vector<std::pair<std::size_t, std::size_t>> split(const std::string& s, std::size_t begin, std::size_t end,
                                                       char sep) {
  std::vector<std::pair<std::size_t, std::size_t>> parts;
  std::size_t start = begin;
  for (std::size_t i = begin; i <= end; ++i) {
    if (i == end || s[i] == sep) {
      parts.emplace_back(start, i);
      start = i + 1;
    }
  }
  return parts;
}

struct FormSpec {
  char kind = 'W';
  std::vector<Characteristic> chars;   // W
  std::vector<SecondOrderPair> pairs;  // A
  int genus = 0;                       // 0 when the form is just "W" or "A"
};

// W:<top>|<bottom>,<top>|<bottom>,...  e.g. W:10|10,01|01
// A:<eps>,<delta>;<eps>,<delta>;...     e.g. A:000,110;100,010
FormSpec parse_form(const std::string& text) {
  FormSpec out;
  if (text.empty() || (text[0] != 'W' && text[0] != 'A')) throw ParseError("form must start with W or A", 1);
  out.kind = text[0];
  if (text.size() == 1) return out;
  if (text[1] != ':') throw ParseError("expected ':'", 2);
  const std::size_t body = 2;
  auto check_genus = [&](std::size_t size, std::size_t column) {
    if (out.genus == 0) out.genus = static_cast<int>(size);
    if (static_cast<int>(size) != out.genus) throw ParseError("inconsistent genus", column);
  };
  if (out.kind == 'W') {
    for (auto [b, e] : split(text, body, text.size(), ',')) {
      const auto halves = split(text, b, e, '|');
      if (halves.size() != 2) throw ParseError("expected <top>|<bottom>", b + 1);
      auto top = parse_bits(text, halves[0].first, halves[0].second);
      auto bottom = parse_bits(text, halves[1].first, halves[1].second);
      if (top.size() != bottom.size()) throw ParseError("top and bottom differ in length", halves[1].first + 1);
      check_genus(top.size(), b + 1);
      Characteristic m(std::move(top), std::move(bottom));
      if (!m.is_odd()) throw ParseError("W needs odd characteristics", b + 1);
      out.chars.push_back(std::move(m));
    }
  } else {
    for (auto [b, e] : split(text, body, text.size(), ';')) {
      const auto halves = split(text, b, e, ',');
      if (halves.size() != 2) throw ParseError("expected <eps>,<delta>", b + 1);
      auto eps = parse_bits(text, halves[0].first, halves[0].second);
      auto delta = parse_bits(text, halves[1].first, halves[1].second);
      if (eps.size() != delta.size()) throw ParseError("eps and delta differ in length", halves[1].first + 1);
      check_genus(eps.size(), b + 1);
      out.pairs.emplace_back(std::move(eps), std::move(delta));
    }
  }
  return out;
}

bool group_allowed(char kind, const CongruenceGroup& group) {
  // Groups generate_subgroup_element can sample from.
  const bool sampled = group == CongruenceGroup::principal(2) || group == CongruenceGroup::theta_group(2) ||
                       group == CongruenceGroup::theta_group(4);
  if (!sampled) return false;
  return kind == 'W' || group != CongruenceGroup::principal(2);
}

double max_abs(const ComplexMatrix& m) {
  double out = 0.0;
  for (const auto& x : m.data()) out = std::max(out, std::abs(x));
  return out;
}

// ---- subcommands ----

int cmd_verify(const RunConfig& config, std::ostream& out) {
  SuiteOptions options;
  options.genera = config.genus ? std::vector<int>{*config.genus} : std::vector<int>{1, 2, 3};
  options.seed = config.seed;
  options.policy = config.policy;
  options.filter = config.filter;
  options.tolerance = config.tolerance;
  options.timings = config.timings;
  options.threads = configured_threads();
  const auto reports = run_suite(options);
  const std::string text = render_report(reports, config_json("verify", config, options.genera).dump());
  write_output(config.output_path, text, out);
  return all_passed(reports) ? kOk : kIdentityFailure;
}

int cmd_eval(const std::string& expression, const std::string& tau_file, int random_count, bool deriv,
             const RunConfig& config, std::ostream& out) {
  const ThetaProduct f = ThetaProduct::parse(expression);
  if (config.genus && *config.genus != f.genus())
    throw DomainError("expression has genus " + std::to_string(f.genus()));
  const auto taus = base_points(tau_file, random_count, f.genus(), config.seed);
  ordered_json doc;
  doc["expression"] = f.to_string();
  doc["genus"] = f.genus();
  ordered_json points = ordered_json::array();
  for (const auto& tau : taus) {
    ordered_json p;
    p["tau"] = ordered_json::parse(to_json(tau));
    p["value"] = complex_json(eval_product(f, tau, config.policy));
    if (deriv) p["d"] = matrix_json(partial_bracket(f, 1, tau, config.policy).matrix());
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  write_output(config.output_path, doc.dump(2) + "\n", out);
  return kOk;
}

int cmd_audit(const std::string& form_text, const std::string& group_name, int words, const std::string& tau_file,
              const RunConfig& config, std::ostream& out) {
  FormSpec form = parse_form(form_text);
  CongruenceGroup group;
  try {
    group = CongruenceGroup::parse(group_name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!group_allowed(form.kind, group))
    throw UsageError("group " + group_name + " is not supported for " + std::string(1, form.kind) + " forms");
  if (config.genus && form.genus && *config.genus != form.genus)
    throw DomainError("form has genus " + std::to_string(form.genus));
  std::optional<int> genus = form.genus ? std::optional<int>(form.genus) : config.genus;
  if (!genus) throw UsageError("audit needs --g when the form does not fix the genus");
  if (*genus < 1 || *genus > 4) throw UsageError("genus must lie in [1, 4]");

  std::mt19937_64 rng(config.seed);
  const SiegelPoint tau = tau_file.empty() ? random_siegel_point(*genus, rng) : base_points(tau_file, 0, genus, 0).front();
  if (form.kind == 'W' && form.chars.empty()) {
    if (*genus < 2) throw DomainError("W needs two distinct odd characteristics, so g >= 2");
    auto odd = odd_characteristics(*genus);
    std::shuffle(odd.begin(), odd.end(), rng);
    form.chars = {odd[0], odd[1]};
  }
  if (form.kind == 'A' && form.pairs.empty()) form.pairs = sample_pair_choices(*genus, 2, 1, rng(), tau, config.policy).front();
  const int k = static_cast<int>(form.kind == 'W' ? form.chars.size() : form.pairs.size());
  if (k < 1 || k > *genus) throw DomainError("form needs between 1 and g factors");

  TransformationLaw law;
  law.kappa_power = 2 * k;
  law.phi_power = 2;
  law.group = group;
  std::function<FormValue(const SiegelPoint&)> value_fn;
  std::string label;
  if (form.kind == 'W') {
    law.phi_characteristics = form.chars;
    value_fn = [&](const SiegelPoint& t) { return W_of_N(form.chars, t, config.policy); };
    for (const auto& m : form.chars) label += (label.empty() ? "" : " ") + m.to_string();
  } else {
    value_fn = [&](const SiegelPoint& t) { return A_star(form.pairs, t, config.policy); };
    for (const auto& [e, d] : form.pairs) {
      std::string pair;
      for (int x : e) pair += char('0' + x);
      pair += ",";
      for (int x : d) pair += char('0' + x);
      label += (label.empty() ? "" : ";") + pair;
    }
  }

  if (form.kind == 'A') {
    // Some pair choices give a star product that vanishes identically; the
    // relative residual of such a form is meaningless.
    double scale = 1.0;
    for (const auto& [e, d] : form.pairs) scale *= max_abs(A_second_order(e, d, tau, config.policy).matrix.matrix());
    if (max_abs(value_fn(tau).matrix.matrix()) < 1e-6 * scale)
      throw DegenerateBasePointError("the star product vanishes at the base point");
  }

  const double tolerance = config.tolerance > 0.0 ? config.tolerance : 1e-7;
  const std::string name = form.kind == 'W' ? "audit_W" : "audit_A";
  std::vector<IdentityReport> reports;
  if (words > 0) {
    const auto elements = sample_group_elements(group, *genus, words, rng(), tau, config.policy);
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const AuditResult r = audit_transformation(value_fn, elements[i], law, tau, config.policy);
      reports.push_back(make_report(name, *genus,
                                    {{"element", static_cast<std::int64_t>(i)},
                                     {"gamma", to_json(elements[i])},
                                     {"form", label},
                                     {"group", group.name()},
                                     {"k", static_cast<std::int64_t>(k)},
                                     {"kappa2_re", r.kappa_squared.real()},
                                     {"kappa2_im", r.kappa_squared.imag()}},
                                    r.residual, tolerance, config.seed));
    }
  }
  ordered_json cfg = config_json("audit", config, {*genus});
  cfg["form"] = form_text;
  cfg["group"] = group.name();
  cfg["words"] = words;
  cfg["tau"] = ordered_json::parse(to_json(tau));
  write_output(config.output_path, render_report(reports, cfg.dump()), out);
  return all_passed(reports) ? kOk : kIdentityFailure;
}

void add_common(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--g", config.genus, "Genus")->check(CLI::Range(1, 4));
  cmd->add_option("--seed", config.seed, "Base seed");
  cmd->add_option("--out", config.output_path, "Output file (default stdout)");
  cmd->add_option("--radius", config.policy.radius, "Minimal truncation radius")->check(CLI::Range(1, 24));
  cmd->add_option("--target-tol", config.policy.target_tol, "Tail bound target")->check(CLI::PositiveNumber);
  cmd->add_flag("!--no-adaptive", config.policy.adaptive, "Skip the extra convergence shell");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta constants, vector-valued Siegel forms and their identities"};
  app.name(args.empty() ? "theta-forge" : args[0]);
  app.require_subcommand(1);

  RunConfig config;
  std::string expression, tau_file, form_text, group_name = "gamma2";
  int random_count = 0, words = 10;
  bool deriv = false;

  auto* verify = app.add_subcommand("verify", "Run the identity suite and write a JSON report");
  add_common(verify, config);
  verify->add_option("--tol", config.tolerance, "Tolerance for the numerical checks")->check(CLI::PositiveNumber);
  verify->add_option("--filter", config.filter, "Glob over identity names");
  verify->add_flag("--timings", config.timings, "Record runtimes in the report");

  auto* eval = app.add_subcommand("eval", "Evaluate a product of theta constants");
  add_common(eval, config);
  eval->add_option("expression", expression, "e.g. 'T[0|0]' or 'S[0,1]*S[1,1]'")->required();
  auto* tau_opt = eval->add_option("--tau", tau_file, "Base point JSON file");
  auto* random_opt = eval->add_option("--random-tau", random_count, "Sample N base points")->check(CLI::Range(1, 1000));
  tau_opt->excludes(random_opt);
  eval->add_flag("--deriv", deriv, "Also print the d-matrix");

  auto* audit = app.add_subcommand("audit", "Audit the transformation law of a form");
  add_common(audit, config);
  audit->add_option("--form", form_text, "'W:10|10,01|01', 'A:00,11;10,01', or W / A")->required();
  audit->add_option("--group", group_name, "gamma2, gamma24 or gamma48");
  audit->add_option("--words", words, "Number of group elements")->check(CLI::NonNegativeNumber);
  audit->add_option("--tol", config.tolerance, "Residual tolerance")->check(CLI::PositiveNumber);
  audit->add_option("--tau", tau_file, "Base point JSON file");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  if (eval->parsed() && tau_file.empty() && random_count == 0) {
    err << "eval: one of --tau or --random-tau is required\n";
    return kUsageError;
  }

  try {
    if (verify->parsed()) return cmd_verify(config, out);
    if (eval->parsed()) return cmd_eval(expression, tau_file, random_count, deriv, config, out);
    return cmd_audit(form_text, group_name, words, tau_file, config, out);
  } catch (const ParseError& e) {
    const std::string& text = eval->parsed() ? expression : form_text;
    err << "parse error: " << e.what() << "\n  " << text << "\n  " << std::string(e.column() - 1, ' ') << "^\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const DegenerateBasePointError& e) {
    err << "degenerate input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace theta_forge::cli
