#pragma once

#include "qbd2d/builders.hpp"
#include "qbd2d/efficiency.hpp"
#include "qbd2d/model_io.hpp"
#include "qbd2d/simulate.hpp"
#include "qbd2d/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qbd2d::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { Text, Csv, Jsonl };

struct RunConfig {
  std::string command;  // validate, drift, classify, efficiency, table, simulate, export
  std::optional<std::string> model_path;
  std::optional<std::string> builtin;

  std::optional<double> l1, l2;
  double mu1 = 1.0, mu2 = 1.0, g1 = 2.0, g2 = 2.0;
  int erlang = 2;

  ScanAxis scan = ScanAxis::L2;
  std::optional<std::string> grid;     // lo:hi:step
  std::optional<std::string> bracket;  // lo:hi
  double eps = kDefaultZeroTolerance;
  double tol = kDefaultBisectionTolerance;
  int trunc = kDefaultTruncationLevels;
  std::uint64_t seed = 1;
  std::optional<Format> format;

  std::string variant = "full";
  std::int64_t k = 100000;
  std::int64_t trials = 200;
  std::int64_t burn_in = 0;
  std::optional<std::string> start;  // l1,l2,phase
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

namespace detail {

inline std::string num(double v, int digits = 17) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::vector<double> split_numbers(const std::string& text, char sep, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidArgument(std::string("malformed ") + what + " '" + text + "'");
    out.push_back(v);
  }
  if (out.size() != expected) throw InvalidArgument(std::string("malformed ") + what + " '" + text + "'");
  return out;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Source {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  std::optional<std::string> file;
};

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"priority-setup", "priority-setup-mapph", "additional-server",
                                              "independent-pair"};
  return names;
}

inline ModelFamily family_for(const RunConfig& c, ScanAxis scan, double fixed) {
  const std::string& b = *c.builtin;
  if (b == "priority-setup") return priority_setup_family(scan, fixed, c.mu1, c.mu2, c.g1, c.g2);
  if (b == "priority-setup-mapph") return priority_setup_mapph_family(scan, fixed, c.mu1, c.mu2, c.g1, c.g2, c.erlang);
  if (b == "additional-server") return additional_server_family(scan, fixed, c.mu1, c.mu2);
  if (b == "independent-pair") return independent_pair_family(scan, fixed, c.mu1, c.mu2);
  throw InvalidArgument("unknown builtin '" + b + "'");
}

inline double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw InvalidArgument(std::string("missing ") + flag + " for the builtin model");
  return *v;
}

inline QbdModel load(const RunConfig& c, Source& src) {
  if (c.model_path) {
    QbdModel m = load_model(*c.model_path);
    src.name = m.name();
    src.file = *c.model_path;
    return m;
  }
  const double l1 = require(c.l1, "--l1"), l2 = require(c.l2, "--l2");
  const ModelFamily f = family_for(c, ScanAxis::L2, l1);
  src.name = f.name;
  src.params = {{"l1", l1}, {"l2", l2}};
  src.params.insert(src.params.end(), f.params.begin(), f.params.end());
  return f.make(l1, l2);
}

inline nlohmann::json record(const std::string& command, const Source& src) {
  nlohmann::json r;
  r["command"] = command;
  r["model"] = src.name;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : src.params) params[k] = v;
  if (src.file) params["file"] = *src.file;
  r["params"] = std::move(params);
  r["version"] = kVersion;
  return r;
}

inline std::string describe(const Source& src) {
  std::string s = src.name;
  for (const auto& [k, v] : src.params) s += " " + k + "=" + num(v, 10);
  if (src.file) s += " file=" + *src.file;
  return s;
}

inline nlohmann::json drift_json(const std::optional<DriftVector>& d) {
  if (!d) return nullptr;
  return nlohmann::json::array({d->a1, d->a2});
}

inline std::string verdict_line(const Classification& c) {
  std::string s = to_string(c.verdict) + " (Theorem 1, ";
  if (c.tag == CaseTag::AxisDriftUndefined) return s + "axis drift undefined: " + c.note + ")";
  return s + "case " + to_string(c.tag) + ")";
}

// Fail with the validator's first violation unless the model is well formed.
inline void require_valid(const QbdModel& m) {
  const ValidationReport report = validate(m);
  if (!report.ok()) throw InvalidArgument("model '" + m.name() + "' is invalid: " + report.violations.front().message);
}

inline int do_validate(const RunConfig& c, Format fmt, std::ostream& out, std::ostream& err) {
  Source src;
  const QbdModel m = load(c, src);
  const ValidationReport report = validate(m);
  const auto kind = [](ValidationIssue::Kind k) {
    constexpr const char* names[] = {"shape", "sign", "rowsum", "irreducibility"};
    return names[static_cast<int>(k)];
  };
  if (fmt == Format::Jsonl) {
    auto r = record("validate", src);
    r["ok"] = report.ok();
    for (const auto* list : {&report.violations, &report.warnings}) {
      nlohmann::json items = nlohmann::json::array();
      for (const auto& v : *list)
        items.push_back({{"kind", kind(v.kind)},
                         {"archetype", v.archetype ? nlohmann::json(to_string(*v.archetype)) : nlohmann::json()},
                         {"message", v.message}});
      r[list == &report.violations ? "violations" : "warnings"] = std::move(items);
    }
    out << r.dump() << '\n';
  } else if (fmt == Format::Csv) {
    out << "severity,kind,archetype,message\n";
    for (const auto* list : {&report.violations, &report.warnings})
      for (const auto& v : *list)
        out << (list == &report.violations ? "violation" : "warning") << ',' << kind(v.kind) << ','
            << csv_escape(v.archetype ? to_string(*v.archetype) : "") << ',' << csv_escape(v.message) << '\n';
  } else {
    for (const auto& v : report.violations) out << "violation: " << v.message << '\n';
    for (const auto& v : report.warnings) out << "warning: " << v.message << '\n';
    if (report.ok()) out << "OK " << describe(src) << '\n';
  }
  if (!report.ok()) {
    err << "error: model '" << m.name() << "' is invalid: " << report.violations.front().message << '\n';
    return kExitError;
  }
  return kExitOk;
}

inline int do_drift(const RunConfig& c, Format fmt, std::ostream& out) {
  Source src;
  const QbdModel m = load(c, src);
  require_valid(m);
  const DriftVector plus = drift_plus(m);
  const AxisDrift ax1 = drift_axis(m, 1, c.eps, c.trunc);
  const AxisDrift ax2 = drift_axis(m, 2, c.eps, c.trunc);
  if (fmt == Format::Jsonl) {
    auto r = record("drift", src);
    r["plus"] = drift_json(plus);
    r["axis1"] = drift_json(ax1.drift);
    r["axis2"] = drift_json(ax2.drift);
    if (!ax1) r["axis1_reason"] = ax1.reason;
    if (!ax2) r["axis2_reason"] = ax2.reason;
    out << r.dump() << '\n';
  } else if (fmt == Format::Csv) {
    out << "chain,a1,a2,defined,reason\n";
    out << "plus," << num(plus.a1) << ',' << num(plus.a2) << ",true,\n";
    for (const auto* d : {&ax1, &ax2}) {
      out << (d == &ax1 ? "axis1," : "axis2,");
      if (*d)
        out << num(d->drift->a1) << ',' << num(d->drift->a2) << ",true,\n";
      else
        out << "nan,nan,false," << csv_escape(d->reason) << '\n';
    }
  } else {
    out << describe(src) << '\n';
    out << "a(+) = (" << num(plus.a1, 10) << ", " << num(plus.a2, 10) << ")\n";
    for (const auto* d : {&ax1, &ax2}) {
      out << (d == &ax1 ? "a(1) = " : "a(2) = ");
      if (*d)
        out << "(" << num(d->drift->a1, 10) << ", " << num(d->drift->a2, 10) << ")\n";
      else
        out << "undefined (" << d->reason << ")\n";
    }
  }
  return kExitOk;
}

inline int do_classify(const RunConfig& c, Format fmt, std::ostream& out) {
  Source src;
  const QbdModel m = load(c, src);
  require_valid(m);
  const Classification cl = classify(m, c.eps, c.trunc);
  if (fmt == Format::Jsonl) {
    auto r = record("classify", src);
    r["verdict"] = to_string(cl.verdict);
    r["case"] = to_string(cl.tag);
    r["plus"] = drift_json(cl.plus);
    r["axis1"] = drift_json(cl.axis1);
    r["axis2"] = drift_json(cl.axis2);
    if (!cl.note.empty()) r["note"] = cl.note;
    out << r.dump() << '\n';
  } else if (fmt == Format::Csv) {
    out << "verdict,case,a_plus_1,a_plus_2,a11,a22\n";
    out << to_string(cl.verdict) << ',' << to_string(cl.tag) << ',' << num(cl.plus.a1) << ',' << num(cl.plus.a2)
        << ',' << (cl.axis1 ? num(cl.axis1->a1) : "nan") << ',' << (cl.axis2 ? num(cl.axis2->a2) : "nan") << '\n';
  } else {
    out << verdict_line(cl) << '\n';
  }
  return cl.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

inline void emit_rows(const std::string& command, const ModelFamily& family, const std::vector<EfficiencyResult>& rows,
                      Format fmt, std::ostream& out) {
  Source src;
  src.name = family.name;
  src.params = family.params;
  if (fmt == Format::Csv) {
    out << "fixed_rate,lambda_star,rho_star,drift_residual\n";
    for (const auto& r : rows)
      out << num(r.fixed_rate) << ',' << num(r.lambda_star) << ',' << num(r.rho_star) << ',' << num(r.drift_at_root)
          << '\n';
  } else if (fmt == Format::Jsonl) {
    for (const auto& r : rows) {
      auto rec = record(command, src);
      rec["params"]["scan"] = family.scan == ScanAxis::L1 ? "l1" : "l2";
      rec["fixed_rate"] = r.fixed_rate;
      if (r.error) {
        rec["error"] = *r.error;
      } else {
        rec["lambda_star"] = r.lambda_star;
        rec["rho_star"] = r.rho_star;
        rec["throughput"] = {r.throughput.first, r.throughput.second};
        rec["drift_residual"] = r.drift_at_root;
      }
      out << rec.dump() << '\n';
    }
  } else {
    const char* fixed_name = family.scan == ScanAxis::L2 ? "lambda1" : "lambda2";
    const char* star_name = family.scan == ScanAxis::L2 ? "lambda2*" : "lambda1*";
    out << describe(src) << " scan=" << (family.scan == ScanAxis::L1 ? "l1" : "l2") << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%10s %12s %10s %14s\n", fixed_name, star_name, "rho*", "residual");
    out << line;
    for (const auto& r : rows) {
      if (r.error) {
        std::snprintf(line, sizeof line, "%10.4f  error: ", r.fixed_rate);
        out << line << *r.error << '\n';
        continue;
      }
      std::snprintf(line, sizeof line, "%10.4f %12.6f %10.6f %14.3e\n", r.fixed_rate, r.lambda_star, r.rho_star,
                    r.drift_at_root);
      out << line;
    }
  }
}

inline std::optional<std::pair<double, double>> parse_bracket(const RunConfig& c) {
  if (!c.bracket) return std::nullopt;
  const auto v = split_numbers(*c.bracket, ':', 2, "bracket");
  return std::make_pair(v[0], v[1]);
}

inline int do_efficiency(const RunConfig& c, Format fmt, std::ostream& out, std::ostream& err) {
  if (!c.builtin) throw InvalidArgument("efficiency needs --builtin");
  const double fixed = c.scan == ScanAxis::L2 ? require(c.l1, "--l1") : require(c.l2, "--l2");
  const ModelFamily family = family_for(c, c.scan, fixed);
  const auto rows = table_sweep(family, {fixed}, parse_bracket(c), c.tol);
  emit_rows("efficiency", family, rows, fmt, out);
  if (rows.front().error) {
    err << "error: " << *rows.front().error << '\n';
    return kExitError;
  }
  return kExitOk;
}

inline int do_table(const RunConfig& c, Format fmt, std::ostream& out, std::ostream& err) {
  if (!c.builtin) throw InvalidArgument("table needs --builtin");
  if (!c.grid) throw InvalidArgument("table needs --grid lo:hi:step");
  const auto g = split_numbers(*c.grid, ':', 3, "grid");
  const ModelFamily family = family_for(c, c.scan, 0.0);
  const auto rows = table_sweep(family, make_grid(g[0], g[1], g[2]), parse_bracket(c), c.tol);
  emit_rows("table", family, rows, fmt, out);
  int status = kExitOk;
  for (const auto& r : rows)
    if (r.error) {
      err << "error: fixed rate " << num(r.fixed_rate, 10) << ": " << *r.error << '\n';
      status = kExitError;
    }
  return status;
}

inline int do_simulate(const RunConfig& c, Format fmt, std::ostream& out) {
  Source src;
  const QbdModel m = load(c, src);
  require_valid(m);
  const Variant variant = parse_variant(c.variant);
  SimState start;
  if (c.start) {
    const auto v = split_numbers(*c.start, ',', 3, "start state");
    start = {static_cast<std::int64_t>(v[0]), static_cast<std::int64_t>(v[1]), static_cast<int>(v[2])};
  }
  const EmpiricalDrift d = empirical_drift(m, start, variant, c.k, c.trials, c.seed, c.burn_in);
  if (fmt == Format::Jsonl) {
    auto r = record("simulate", src);
    r["variant"] = to_string(variant);
    r["seed"] = c.seed;
    r["k"] = d.k;
    r["trials"] = d.trials;
    r["burn_in"] = c.burn_in;
    r["nu"] = d.nu;
    r["mean"] = drift_json(d.mean);
    r["stderr"] = drift_json(d.std_error);
    out << r.dump() << '\n';
  } else if (fmt == Format::Csv) {
    out << "variant,k,trials,nu,mean1,mean2,stderr1,stderr2\n";
    out << to_string(variant) << ',' << d.k << ',' << d.trials << ',' << num(d.nu) << ',' << num(d.mean.a1) << ','
        << num(d.mean.a2) << ',' << num(d.std_error.a1) << ',' << num(d.std_error.a2) << '\n';
  } else {
    out << describe(src) << " variant=" << to_string(variant) << " k=" << d.k << " trials=" << d.trials
        << " seed=" << c.seed << '\n';
    out << "mean   = (" << num(d.mean.a1, 8) << ", " << num(d.mean.a2, 8) << ")\n";
    out << "stderr = (" << num(d.std_error.a1, 4) << ", " << num(d.std_error.a2, 4) << ")\n";
  }
  return kExitOk;
}

inline int do_export(const RunConfig& c, std::ostream& out) {
  Source src;
  write_model(out, load(c, src));
  return kExitOk;
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const bool sweep = c.command == "table" || c.command == "efficiency";
    if (sweep && c.model_path) throw InvalidArgument(c.command + " works on --builtin families only");
    if (!sweep && c.model_path.has_value() == c.builtin.has_value())
      throw InvalidArgument("give exactly one of --model or --builtin");
    const Format fmt = c.format.value_or(c.command == "table" ? Format::Csv : Format::Text);
    if (c.command == "validate") return detail::do_validate(c, fmt, out, err);
    if (c.command == "drift") return detail::do_drift(c, fmt, out);
    if (c.command == "classify") return detail::do_classify(c, fmt, out);
    if (c.command == "efficiency") return detail::do_efficiency(c, fmt, out, err);
    if (c.command == "table") return detail::do_table(c, fmt, out, err);
    if (c.command == "simulate") return detail::do_simulate(c, fmt, out);
    if (c.command == "export") return detail::do_export(c, out);
    throw InvalidArgument("unknown command '" + c.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

// Parses argv into `config`. Returns an exit code when the process should stop
// (help, version or a usage error), std::nullopt when `config` is ready.
inline std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Stability and efficiency of two-dimensional QBD processes", "qbd2d"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  std::string format;
  std::string scan = "l2";
  const std::map<std::string, Format> formats{{"text", Format::Text}, {"csv", Format::Csv}, {"jsonl", Format::Jsonl}};

  const auto add_source = [&](CLI::App* sub) {
    auto* model = sub->add_option("--model", config.model_path, "model file (JSON)")->check(CLI::ExistingFile);
    auto* builtin = sub->add_option("--builtin", config.builtin, "built-in model family")
                        ->check(CLI::IsMember(detail::builtin_names()));
    model->excludes(builtin);
    sub->add_option("--l1", config.l1, "arrival rate of class 1");
    sub->add_option("--l2", config.l2, "arrival rate of class 2");
    sub->add_option("--mu1", config.mu1, "service rate of class 1")->capture_default_str();
    sub->add_option("--mu2", config.mu2, "service rate of class 2")->capture_default_str();
    sub->add_option("--g1", config.g1, "setup rate of class 1")->capture_default_str();
    sub->add_option("--g2", config.g2, "setup rate of class 2")->capture_default_str();
    sub->add_option("--erlang", config.erlang, "Erlang stages (priority-setup-mapph)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "csv", "jsonl"}));
    sub->add_option("--eps", config.eps, "zero tolerance for drift signs")->capture_default_str();
    sub->add_option("--trunc", config.trunc, "truncation levels for axis class detection")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
  };

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {{"validate", "check block shapes, signs, row sums and irreducibility"},
                        {"drift", "mean drift vectors of the induced chains"},
                        {"classify", "positive recurrent / transient / inconclusive"},
                        {"efficiency", "lambda* and rho* at one fixed rate"},
                        {"table", "lambda* and rho* over a grid of fixed rates"},
                        {"simulate", "empirical drift by uniformized simulation"},
                        {"export", "write a model as JSON"}};
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_source(sub);
    const std::string name = s.name;
    if (name == "efficiency" || name == "table") {
      sub->add_option("--scan", scan, "which arrival rate is scanned")
          ->check(CLI::IsMember({"l1", "l2"}))
          ->capture_default_str();
      sub->add_option("--bracket", config.bracket, "bisection bracket lo:hi");
      sub->add_option("--tol", config.tol, "bisection tolerance")->capture_default_str();
    }
    if (name == "table") sub->add_option("--grid", config.grid, "fixed rates lo:hi:step")->required();
    if (name == "simulate") {
      sub->add_option("--variant", config.variant, "full, plus, axis1 or axis2")
          ->check(CLI::IsMember({"full", "plus", "axis1", "axis2"}))
          ->capture_default_str();
      sub->add_option("--k", config.k, "steps per trial")->check(CLI::PositiveNumber)->capture_default_str();
      sub->add_option("--trials", config.trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
      sub->add_option("--burn-in", config.burn_in, "steps discarded before each trial")
          ->check(CLI::NonNegativeNumber)
          ->capture_default_str();
      sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
      sub->add_option("--start", config.start, "start state l1,l2,phase");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  for (CLI::App* sub : app.get_subcommands()) config.command = sub->get_name();
  if (!format.empty()) config.format = formats.at(format);
  config.scan = scan == "l1" ? ScanAxis::L1 : ScanAxis::L2;
  return std::nullopt;
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (auto status = parse(argc, argv, config, out, err)) return *status == 0 ? kExitOk : kExitError;
  return run(config, out, err);
}

}  // namespace qbd2d::cli
