#include "mpdyn/scenario.hpp"

#include "mpdyn/coherent_states.hpp"
#include "mpdyn/measurement.hpp"
#include "mpdyn/oracle_suite.hpp"
#include "mpdyn/phase_space.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace mpdyn::cli {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& msg) {
  throw std::invalid_argument("scenario: " + msg);
}

// ---------------------------------------------------------------- validation

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!required.count(key) && !optional.count(key))
      schema_error(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) schema_error(where + ": missing key \"" + key + "\"");
  }
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where + " must be a number");
  return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where + " must be an integer");
  return j.get<std::int64_t>();
}

Complex as_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error(where + " must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector as_complex_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_error(where + " must be a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = as_complex(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

std::vector<double> as_number_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_error(where + " must be a non-empty array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  schema_error("format must be \"csv\" or \"json\"");
}

// ------------------------------------------------------------------ emitters

// 17 significant digits: round-trip exact for IEEE doubles
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class TableWriter {
 public:
  TableWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void row(const std::vector<double>& values) { rows_.push_back(values); }
  // extra scalar reported alongside the table (argmax, norms, ...)
  void extra(const std::string& key, double value) { extras_.emplace_back(key, fmt(value)); }
  void extra_text(const std::string& key, const std::string& value) {
    extras_.emplace_back(key, "\"" + value + "\"");
  }

  std::string render_csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      os << (c ? "," : "") << columns_[c];
    }
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << fmt(r[c]);
      os << "\n";
    }
    for (const auto& [k, v] : extras_) os << "# " << k << " = " << v << "\n";
    return os.str();
  }

  std::string render_json(const std::string& experiment) const {
    std::ostringstream os;
    os << "{\n  \"experiment\": \"" << experiment << "\",\n  \"columns\": [";
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      os << (c ? ", " : "") << "\"" << columns_[c] << "\"";
    }
    os << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      os << (r ? ",\n           " : "\n           ") << "[";
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        os << (c ? ", " : "") << fmt(rows_[r][c]);
      }
      os << "]";
    }
    os << (rows_.empty() ? "]" : "\n  ]");
    for (const auto& [k, v] : extras_) os << ",\n  \"" << k << "\": " << v;
    os << "\n}\n";
    return os.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> extras_;
};

// ---------------------------------------------------------------- experiments

ExperimentResult run_orbit(const json& p, Format format) {
  require_keys(p, "orbit parameters", {"lambda", "eta", "times"}, {"mu"});
  Vector lambda = as_complex_list(p.at("lambda"), "lambda");
  Vector eta = as_complex_list(p.at("eta"), "eta");
  Vector mu = p.contains("mu") ? as_complex_list(p.at("mu"), "mu")
                               : Vector(Vector::Zero(lambda.size()));
  std::vector<double> times = as_number_list(p.at("times"), "times");

  std::vector<std::string> cols = {"t"};
  for (Index j = 0; j < lambda.size(); ++j) {
    std::string sj = std::to_string(j);
    cols.push_back("lambda" + sj + "_re");
    cols.push_back("lambda" + sj + "_im");
    cols.push_back("mu" + sj + "_re");
    cols.push_back("mu" + sj + "_im");
  }
  cols.push_back("norm_sq");

  TableWriter table(cols);
  for (double t : times) {
    measurement::MeasurementScenario s(lambda, mu, eta, t);
    measurement::MeasurementRecord rec = measurement::run(s);
    std::vector<double> row = {t};
    for (Index j = 0; j < lambda.size(); ++j) {
      row.push_back(rec.lambda_t(j).real());
      row.push_back(rec.lambda_t(j).imag());
      row.push_back(rec.mu_t(j).real());
      row.push_back(rec.mu_t(j).imag());
    }
    row.push_back(rec.norm_sq);
    table.row(row);
  }
  return {format == Format::csv ? table.render_csv() : table.render_json("orbit"), kExitOk};
}

ExperimentResult run_overlap_decay(const json& p, Format format) {
  require_keys(p, "overlap-decay parameters", {"lambda1", "lambda2", "eta_mag", "times"});
  Vector l1 = as_complex_list(p.at("lambda1"), "lambda1");
  Vector l2 = as_complex_list(p.at("lambda2"), "lambda2");
  double eta_mag = as_number(p.at("eta_mag"), "eta_mag");
  std::vector<double> times = as_number_list(p.at("times"), "times");

  TableWriter table({"t", "resolvability", "overlap_sq", "abs_diff"});
  for (double t : times) {
    double closed = measurement::resolvability(l1, l2, eta_mag, t);
    Vector eta = Vector::Constant(l1.size(), Complex(eta_mag, 0.0));
    auto r1 = measurement::run(measurement::MeasurementScenario::ready(l1, eta, t));
    auto r2 = measurement::run(measurement::MeasurementScenario::ready(l2, eta, t));
    double squared = std::norm(overlap(r1.phase_point(), r2.phase_point()).value);
    table.row({t, closed, squared, std::abs(closed - squared)});
  }
  return {format == Format::csv ? table.render_csv() : table.render_json("overlap-decay"),
          kExitOk};
}

ExperimentResult run_marker_scan(const json& p, Format format) {
  require_keys(p, "marker-scan parameters", {}, {"norm_min", "norm_max", "step"});
  double lo = p.contains("norm_min") ? as_number(p.at("norm_min"), "norm_min") : 0.05;
  double hi = p.contains("norm_max") ? as_number(p.at("norm_max"), "norm_max") : 20.0;
  double step = p.contains("step") ? as_number(p.at("step"), "step") : 0.001;

  MarkerScan scan = marker_scan(lo, hi, step);
  TableWriter table({"norm", "marker"});
  for (const MarkerPoint& pt : scan.curve) table.row({pt.norm, pt.marker});
  table.extra("argmax_norm", scan.argmax_norm);
  table.extra("max_marker", scan.max_marker);
  return {format == Format::csv ? table.render_csv() : table.render_json("marker-scan"),
          kExitOk};
}

ExperimentResult run_measure(const json& p, Format format) {
  require_keys(p, "measure parameters", {"lambda", "eta", "time"}, {"mu"});
  Vector lambda = as_complex_list(p.at("lambda"), "lambda");
  Vector eta = as_complex_list(p.at("eta"), "eta");
  Vector mu = p.contains("mu") ? as_complex_list(p.at("mu"), "mu")
                               : Vector(Vector::Zero(lambda.size()));
  double t = as_number(p.at("time"), "time");

  measurement::MeasurementScenario s(lambda, mu, eta, t);
  measurement::MeasurementRecord rec = measurement::run(s);
  TableWriter table({"pair", "lambda_t_re", "lambda_t_im", "mu_t_re", "mu_t_im"});
  for (Index j = 0; j < lambda.size(); ++j) {
    table.row({static_cast<double>(j), rec.lambda_t(j).real(), rec.lambda_t(j).imag(),
               rec.mu_t(j).real(), rec.mu_t(j).imag()});
  }
  table.extra("norm_sq", rec.norm_sq);
  return {format == Format::csv ? table.render_csv() : table.render_json("measure"), kExitOk};
}

ExperimentResult run_recover(const json& p, Format format) {
  require_keys(p, "recover parameters", {"mu_t", "eta", "time"});
  Vector mu_t = as_complex_list(p.at("mu_t"), "mu_t");
  Vector eta = as_complex_list(p.at("eta"), "eta");
  double t = as_number(p.at("time"), "time");

  Vector lambda = measurement::recover_lambda(mu_t, eta, t);
  TableWriter table({"pair", "mu_t_re", "mu_t_im", "lambda_re", "lambda_im"});
  for (Index j = 0; j < mu_t.size(); ++j) {
    table.row({static_cast<double>(j), mu_t(j).real(), mu_t(j).imag(), lambda(j).real(),
               lambda(j).imag()});
  }
  return {format == Format::csv ? table.render_csv() : table.render_json("recover"), kExitOk};
}

ExperimentResult run_oracle_check(const json& p, Format format) {
  require_keys(p, "oracle-check parameters", {}, {"cutoff", "seed"});
  int cutoff = 30;
  if (p.contains("cutoff")) cutoff = static_cast<int>(as_integer(p.at("cutoff"), "cutoff"));
  std::optional<std::uint64_t> seed;
  if (p.contains("seed")) seed = static_cast<std::uint64_t>(as_integer(p.at("seed"), "seed"));

  oracle::VerifyReport report = oracle::verify_all(cutoff, seed);

  if (format == Format::csv) {
    std::ostringstream os;
    os << "check,value,tolerance,status,note\n";
    for (const auto& c : report.checks) {
      os << c.name << "," << fmt(c.value) << "," << fmt(c.tolerance) << ","
         << (c.pass ? "pass" : "fail") << ",\"" << c.note << "\"\n";
    }
    os << "# all_pass = " << (report.all_pass() ? "true" : "false") << "\n";
    return {os.str(), report.all_pass() ? kExitOk : kExitGuard};
  }
  std::ostringstream os;
  os << "{\n  \"experiment\": \"oracle-check\",\n  \"cutoff\": " << report.cutoff
     << ",\n  \"checks\": [";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    os << (i ? ",\n    " : "\n    ") << "{\"name\": \"" << c.name << "\", \"value\": "
       << fmt(c.value) << ", \"tolerance\": " << fmt(c.tolerance) << ", \"pass\": "
       << (c.pass ? "true" : "false") << ", \"note\": \"" << c.note << "\"}";
  }
  os << "\n  ],\n  \"all_pass\": " << (report.all_pass() ? "true" : "false") << "\n}\n";
  return {os.str(), report.all_pass() ? kExitOk : kExitGuard};
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::orbit: return "orbit";
    case Experiment::overlap_decay: return "overlap-decay";
    case Experiment::marker_scan: return "marker-scan";
    case Experiment::measure: return "measure";
    case Experiment::recover: return "recover";
    case Experiment::oracle_check: return "oracle-check";
  }
  return "?";
}

ScenarioFile parse_scenario(const json& j) {
  require_keys(j, "scenario", {"experiment", "parameters"}, {"output"});
  if (!j.at("experiment").is_string()) schema_error("experiment must be a string");
  std::string name = j.at("experiment").get<std::string>();

  static const std::map<std::string, Experiment> by_name = {
      {"orbit", Experiment::orbit},
      {"overlap-decay", Experiment::overlap_decay},
      {"marker-scan", Experiment::marker_scan},
      {"measure", Experiment::measure},
      {"recover", Experiment::recover},
      {"oracle-check", Experiment::oracle_check},
  };
  auto it = by_name.find(name);
  if (it == by_name.end()) schema_error("unknown experiment \"" + name + "\"");

  ScenarioFile out;
  out.experiment = it->second;
  out.parameters = j.at("parameters");
  if (!out.parameters.is_object()) schema_error("parameters must be an object");

  if (j.contains("output")) {
    const json& o = j.at("output");
    require_keys(o, "output", {"path"}, {"format"});
    if (!o.at("path").is_string()) schema_error("output.path must be a string");
    OutputSpec spec;
    spec.path = o.at("path").get<std::string>();
    if (o.contains("format")) {
      if (!o.at("format").is_string()) schema_error("output.format must be a string");
      spec.format = parse_format(o.at("format").get<std::string>());
    }
    out.output = std::move(spec);
  }
  return out;
}

ExperimentResult run_experiment(const ScenarioFile& scenario, Format format) {
  const json& p = scenario.parameters;
  switch (scenario.experiment) {
    case Experiment::orbit: return run_orbit(p, format);
    case Experiment::overlap_decay: return run_overlap_decay(p, format);
    case Experiment::marker_scan: return run_marker_scan(p, format);
    case Experiment::measure: return run_measure(p, format);
    case Experiment::recover: return run_recover(p, format);
    case Experiment::oracle_check: return run_oracle_check(p, format);
  }
  schema_error("unreachable experiment");
}

namespace {

int do_run(const std::string& path, const std::optional<std::string>& output_flag,
           const std::optional<std::string>& format_flag, std::ostream& out,
           std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot read scenario file \"" << path << "\"\n";
    return kExitInput;
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    err << "error: invalid JSON: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    ScenarioFile scenario = parse_scenario(j);

    Format format = Format::csv;
    if (scenario.output && scenario.output->format) format = *scenario.output->format;
    if (format_flag) format = parse_format(*format_flag);

    ExperimentResult result = run_experiment(scenario, format);

    std::optional<std::string> target;
    if (scenario.output) target = scenario.output->path;
    if (output_flag) target = *output_flag;

    if (target) {
      std::ofstream of(*target, std::ios::binary);
      if (!of) {
        err << "error: cannot write \"" << *target << "\"\n";
        return kExitInput;
      }
      of << result.artifact;
    } else {
      out << result.artifact;
    }
    return result.exit_code;
  } catch (const NumericalGuardError& e) {
    err << "numerical guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
}

int do_verify(int cutoff, std::ostream& out, std::ostream& err) {
  try {
    oracle::VerifyReport report = oracle::verify_all(cutoff);
    out << oracle::format_table(report);
    return report.all_pass() ? kExitOk : kExitGuard;
  } catch (const NumericalGuardError& e) {
    err << "numerical guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"metaplectic phase-space dynamics toolkit"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::string> output_flag;
  std::optional<std::string> format_flag;
  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run_cmd->add_option("--output", output_flag, "write the artifact to this path");
  run_cmd->add_option("--format", format_flag, "csv or json (overrides the scenario)");

  int cutoff = 30;
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle verification suite");
  verify_cmd->add_option("--cutoff", cutoff, "single-mode Fock cutoff (default 30)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInput;
  }

  if (run_cmd->parsed()) {
    if (format_flag && *format_flag != "csv" && *format_flag != "json") {
      err << "error: --format must be csv or json\n";
      return kExitInput;
    }
    return do_run(scenario_path, output_flag, format_flag, out, err);
  }
  return do_verify(cutoff, out, err);
}

}  // namespace mpdyn::cli
