#include "vmlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "vmlab/acceptance.hpp"
#include "vmlab/error.hpp"
#include "vmlab/io.hpp"

namespace vmlab::cli {

namespace {

using io::json;

constexpr double kDualNormSlack = 1e-9;
constexpr double kCompositionSlack = 1e-9;

struct Options {
  double p = 2.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string function_path;
  std::string measure_path;
  std::string operator_path;
  std::string partition_path;
  std::string functionals_path;
  std::string instance_path;
  std::string csv_path;
  std::string method = "finest";
  std::string suite = "all";
  std::string example;
  std::vector<double> deltas;
  std::vector<double> masses;
  std::size_t levels = 3;
  std::size_t restarts = 16;
  std::size_t sphere_points = 360;
  std::size_t tests = 64;
  double grid_eps = 0.01;
  bool grid_set = false;
};

struct Report {
  json inputs = json::object();
  json results = json::object();
  std::vector<Certification> certifications;
  bool failed = false;
};

std::string cert_name(Certification c) { return std::string(to_string(c)); }

json certification_summary(const std::vector<Certification>& certs) {
  if (certs.empty()) return "exact";
  Certification worst = certs.front();
  for (Certification c : certs) worst = weakest(worst, c);
  return cert_name(worst);
}

SimpleFunction load_function(const Options& o, json& inputs) {
  require(!o.function_path.empty(), ErrorCode::InvalidArgument, "--function is required");
  inputs["function"] = o.function_path;
  return io::function_from_json(io::read_json_file(o.function_path));
}

VectorMeasure load_measure(const Options& o, json& inputs) {
  if (!o.measure_path.empty()) {
    inputs["measure"] = o.measure_path;
    return io::measure_from_json(io::read_json_file(o.measure_path));
  }
  require(!o.function_path.empty(), ErrorCode::InvalidArgument, "--measure or --function is required");
  return indefinite_integral(load_function(o, inputs));
}

LinearOperator load_operator(const Options& o, json& inputs) {
  require(!o.operator_path.empty(), ErrorCode::InvalidArgument, "--operator is required");
  inputs["operator"] = o.operator_path;
  return io::operator_from_json(io::read_json_file(o.operator_path));
}

json moment_json(const MomentMaxResult& r, Report& report) {
  report.certifications.push_back(r.certification);
  return io::to_json(r);
}

std::vector<Vector> test_directions(const SpaceDescriptor& domain, std::size_t count) {
  auto tests = primal_sphere(domain, count);
  for (std::size_t j = 0; j < domain.dim(); ++j) {
    Vector e{std::vector<double>(domain.dim(), 0.0)};
    e.coords[j] = 1.0;
    tests.push_back(std::move(e));
  }
  return tests;
}

json composition_json(const CompositionReport& r) {
  return json{{"lhs", r.lhs},           {"dual_norm", r.dual_norm_value}, {"effective", r.effective},
              {"constant", r.constant}, {"rhs", r.rhs},                   {"slack", r.slack},
              {"holds", r.holds},       {"certification", cert_name(r.certification)}};
}

json radius_json(const ThicknessRadius& r) {
  return json{{"lower", r.lower}, {"upper", r.upper}, {"witness", r.witness.coords}, {"exact", r.exact}};
}

void cmd_dunford_norm(const Options& o, Report& r) {
  const auto f = load_function(o, r.inputs);
  r.results["dunford_norm"] = moment_json(dunford_norm(f, o.p), r);
}

void cmd_bochner_norm(const Options& o, Report& r) {
  const auto f = load_function(o, r.inputs);
  r.results["bochner_norm"] = bochner_norm(f, o.p);
}

void cmd_svprofile(const Options& o, Report& r) {
  const auto f = load_function(o, r.inputs);
  const auto profile = sv_profile(f, o.p);
  r.results["sv_profile"] = profile;
  if (!o.csv_path.empty()) {
    io::emit_csv(profile, o.csv_path);
    r.inputs["csv"] = o.csv_path;
  }
}

void cmd_defect(const Options& o, Report& r) {
  const auto f = load_function(o, r.inputs);
  require(!o.partition_path.empty(), ErrorCode::InvalidArgument, "--partition is required");
  r.inputs["partition"] = o.partition_path;
  json pj = io::read_json_file(o.partition_path);
  if (pj.is_object() && pj.contains("blocks")) pj = pj.at("blocks");
  const Partition partition = io::partition_from_json(pj, f.space().size());
  r.results["partition"] = io::to_json(partition);
  r.results["defect"] = moment_json(approximation_defect(f, partition, o.p), r);
}

void cmd_ui_modulus(const Options& o, Report& r) {
  const auto f = load_function(o, r.inputs);
  require(!o.deltas.empty(), ErrorCode::InvalidArgument, "--delta is required");
  r.inputs["delta"] = o.deltas;
  json entries = json::array();
  for (const auto& e : zfp_ui_modulus(f, o.p, o.deltas).entries) {
    r.certifications.push_back(e.certification);
    entries.push_back(json{{"delta", e.delta},
                           {"eta", e.eta},
                           {"witness", e.witness.coords},
                           {"atoms", e.atoms},
                           {"certification", cert_name(e.certification)}});
  }
  r.results["modulus"] = entries;
}

void cmd_variation(const Options& o, Report& r) {
  const auto nu = load_measure(o, r.inputs);
  const VariationMethod method = parse_variation_method(o.method);
  r.inputs["method"] = std::string(to_string(method));
  r.results["p_variation"] = p_variation(nu, o.p, method);
}

void cmd_semivariation(const Options& o, Report& r) {
  const auto nu = load_measure(o, r.inputs);
  if (!o.functionals_path.empty()) {
    r.inputs["functionals"] = o.functionals_path;
    const auto functionals = io::dual_vectors_from_json(io::read_json_file(o.functionals_path));
    r.results["semivariation_over_subset"] = semivariation_over_subset(nu, o.p, functionals);
    r.certifications.push_back(Certification::HeuristicLowerBound);
    return;
  }
  r.results["p_semivariation"] = moment_json(p_semivariation(nu, o.p), r);
}

void cmd_summing_lower(const Options& o, Report& r) {
  const auto u = load_operator(o, r.inputs);
  SearchBudget budget;
  budget.seed = o.seed;
  budget.restarts = o.restarts;
  r.inputs["restarts"] = o.restarts;
  const auto lower = pi_p_lower(u, o.p, budget);
  r.certifications.push_back(lower.certification);
  json family = json::array();
  for (const auto& v : lower.witness) family.push_back(v.coords);
  r.results["pi_p_lower"] = json{{"value", lower.value}, {"witness", family}, {"certification", cert_name(lower.certification)}};
}

PietschCertificate certificate_for(const Options& o, const LinearOperator& u, std::vector<Vector> extra, json& inputs) {
  inputs["grid"] = o.sphere_points;
  inputs["tests"] = o.tests;
  auto tests = test_directions(u.domain(), o.tests);
  for (auto& v : extra) tests.push_back(std::move(v));
  return pietsch_lp_upper(u, o.p, dual_sphere(u.domain(), o.sphere_points), tests);
}

void cmd_pietsch_lp(const Options& o, Report& r) {
  const auto u = load_operator(o, r.inputs);
  std::vector<Vector> extra;
  if (!o.function_path.empty()) extra = scaled_family(load_function(o, r.inputs), o.p);
  if (!o.measure_path.empty()) {
    for (auto& v : scaled_family(load_measure(o, r.inputs), o.p)) extra.push_back(std::move(v));
  }
  const auto cert = certificate_for(o, u, std::move(extra), r.inputs);
  r.certifications.push_back(Certification::LpEstimate);
  r.results["certificate"] = io::to_json(cert);
  r.results["violation"] = certificate_violation(u, cert);
  r.results["certification"] = cert_name(Certification::LpEstimate);
}

void cmd_compose(const Options& o, Report& r) {
  const auto u = load_operator(o, r.inputs);
  require(!o.function_path.empty() || !o.measure_path.empty(), ErrorCode::InvalidArgument,
          "--function or --measure is required");
  r.certifications.push_back(Certification::LpEstimate);
  if (!o.function_path.empty()) {
    const auto f = load_function(o, r.inputs);
    const auto cert = certificate_for(o, u, scaled_family(f, o.p), r.inputs);
    const auto report = verify_composition_bound(u, f, o.p, cert);
    r.certifications.push_back(report.certification);
    r.results["constant"] = cert.constant;
    r.results["function_bound"] = composition_json(report);
    r.failed = r.failed || !report.holds;
  }
  if (!o.measure_path.empty()) {
    json scratch = json::object();
    const auto nu = io::measure_from_json(io::read_json_file(o.measure_path));
    r.inputs["measure"] = o.measure_path;
    const auto cert = certificate_for(o, u, scaled_family(nu, o.p), scratch);
    const auto report = verify_measure_composition_bound(u, nu, o.p, cert);
    r.certifications.push_back(report.certification);
    r.results["measure_bound"] = composition_json(report);
    r.failed = r.failed || !report.holds;
  }
}

void cmd_counterexample(const Options& o, Report& r) {
  r.inputs["example"] = o.example;
  SimpleFunction f = [&] {
    if (o.example == "pettis") {
      const PettisExampleConfig config{o.levels, o.p};
      r.inputs["config"] = io::to_json(config);
      return pettis_example(config);
    }
    KotheExampleConfig config;
    config.p = o.p;
    if (!o.masses.empty()) config.atom_masses = o.masses;
    r.inputs["config"] = io::to_json(config);
    return kothe_example(config);
  }();
  r.results["function"] = io::to_json(f);
  r.results["dunford_norm"] = moment_json(dunford_norm(f, o.p), r);
  r.results["bochner_norm"] = bochner_norm(f, o.p);
  if (f.codomain().is_euclidean() && o.p == 2.0) r.results["sv_profile"] = sv_profile(f, o.p);
}

void cmd_thickness(const Options& o, Report& r) {
  require(!o.instance_path.empty(), ErrorCode::InvalidArgument, "--instance is required");
  r.inputs["instance"] = o.instance_path;
  r.inputs["grid"] = o.grid_eps;
  const auto instance = io::thickness_from_json(io::read_json_file(o.instance_path));
  r.results["radius"] = radius_json(thickness_radius(instance, o.grid_eps));
  if (instance.chain) {
    json stages = json::array();
    for (const auto& s : thickness_chain_profile(instance, o.grid_eps)) stages.push_back(radius_json(s));
    r.results["chain_profile"] = stages;
  }
  if (!o.function_path.empty()) {
    const auto f = load_function(o, r.inputs);
    const auto report = thickness_norm_bound(f, instance, o.p, o.grid_eps);
    r.results["norm_bound"] = json{{"level", report.level},   {"delta", report.delta},
                                   {"bound", report.bound},   {"dunford_norm", moment_json(report.dunford, r)},
                                   {"slack", report.slack},   {"holds", report.holds}};
    r.failed = r.failed || !report.holds;
  }
}

std::vector<int> parse_suite(const std::string& suite) {
  if (suite == "all") return acceptance::all_criteria();
  std::vector<int> ids;
  std::stringstream ss(suite);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int id = std::stoi(item, &used);
      require(used == item.size(), ErrorCode::InvalidArgument, "bad criterion id '" + item + "'");
      ids.push_back(id);
    } catch (const std::logic_error&) {
      fail(ErrorCode::InvalidArgument, "bad criterion id '" + item + "'");
    }
  }
  require(!ids.empty(), ErrorCode::InvalidArgument, "empty --suite");
  for (int id : ids) (void)acceptance::criterion_name(id);
  return ids;
}

void cmd_verify(const Options& o, Report& r, std::ostream& log) {
  const auto ids = parse_suite(o.suite);
  r.inputs["suite"] = o.suite;
  json criteria = json::array();
  for (int id : ids) {
    const auto result = acceptance::run_criterion(id);
    log << acceptance::format_line(result) << '\n';
    criteria.push_back(json{{"id", result.id}, {"name", result.name}, {"passed", result.passed}, {"detail", result.detail}});
    r.failed = r.failed || !result.passed;
  }
  r.results["criteria"] = criteria;
  r.results["all_passed"] = !r.failed;
}

json error_object(const std::string& code, const std::string& message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"dunford-norm",  "bochner-norm", "svprofile", "defect",         "ui-modulus",
                                              "variation",     "semivariation", "summing-lower", "pietsch-lp", "compose",
                                              "counterexample", "thickness",    "verify"};
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || std::find(subcommands().begin(), subcommands().end(), args.front()) == subcommands().end()) {
    if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) {
      out << "usage: vmlab <subcommand> [options]\nsubcommands:";
      for (const auto& s : subcommands()) out << ' ' << s;
      out << '\n';
      return kExitOk;
    }
    err << error_object("UnknownSubcommand", args.empty() ? "no subcommand given" : "unknown subcommand '" + args.front() + "'")
               .dump()
        << '\n';
    return kExitUnknownSubcommand;
  }
  const std::string sub = args.front();

  Options o;
  CLI::App app("vmlab " + sub);
  app.add_option("--p", o.p, "integrability exponent");
  app.add_option("--seed", o.seed, "seed for randomized searches");
  app.add_option("--out", o.out, "report path (stdout when omitted)");
  app.add_option("--function", o.function_path, "SimpleFunction JSON");
  app.add_option("--measure", o.measure_path, "VectorMeasure JSON");
  app.add_option("--operator", o.operator_path, "LinearOperator JSON");
  app.add_option("--partition", o.partition_path, "partition JSON (list of blocks)");
  app.add_option("--functionals", o.functionals_path, "list of dual vectors");
  app.add_option("--instance", o.instance_path, "ThicknessInstance JSON");
  app.add_option("--csv", o.csv_path, "also write the profile as CSV");
  app.add_option("--method", o.method, "finest | brute | holder_dual");
  app.add_option("--suite", o.suite, "all or comma-separated criterion ids");
  app.add_option("--delta", o.deltas, "measure budget (repeatable)");
  app.add_option("--masses", o.masses, "atom masses for the kothe example");
  app.add_option("--levels", o.levels, "levels for the pettis example");
  app.add_option("--restarts", o.restarts, "random restarts for summing-lower");
  app.add_option("--tests", o.tests, "random test directions for pietsch-lp and compose");
  app.add_option("--grid", o.grid_eps, "sphere points (pietsch-lp, compose) or grid eps (thickness)");
  if (sub == "counterexample") app.add_option("example", o.example, "pettis | kothe")->required();

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_object("InvalidArgument", e.what()).dump() << '\n';
    return kExitValidation;
  }
  o.grid_set = app.count("--grid") > 0;
  if (sub == "pietsch-lp" || sub == "compose") {
    if (o.grid_set) {
      if (!(o.grid_eps >= 1.0) || o.grid_eps != std::floor(o.grid_eps)) {
        err << error_object("InvalidArgument", "--grid must be a positive point count").dump() << '\n';
        return kExitValidation;
      }
      o.sphere_points = static_cast<std::size_t>(o.grid_eps);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  Report report;
  try {
    require(o.p >= 1.0, ErrorCode::BadExponent, "--p must be >= 1");
    if (sub == "counterexample") {
      require(o.example == "pettis" || o.example == "kothe", ErrorCode::InvalidArgument,
              "counterexample must be pettis or kothe");
    }
    static const std::map<std::string, std::function<void(const Options&, Report&)>> table{
        {"dunford-norm", cmd_dunford_norm}, {"bochner-norm", cmd_bochner_norm}, {"svprofile", cmd_svprofile},
        {"defect", cmd_defect},             {"ui-modulus", cmd_ui_modulus},     {"variation", cmd_variation},
        {"semivariation", cmd_semivariation}, {"summing-lower", cmd_summing_lower}, {"pietsch-lp", cmd_pietsch_lp},
        {"compose", cmd_compose},           {"counterexample", cmd_counterexample}, {"thickness", cmd_thickness}};
    if (sub == "verify") cmd_verify(o, report, err);
    else table.at(sub)(o, report);
  } catch (const Error& e) {
    err << error_object(std::string(to_string(e.code())), e.what()).dump() << '\n';
    return e.code() == ErrorCode::MalformedJson ? kExitMalformedJson : kExitValidation;
  }

  report.inputs["p"] = o.p;
  report.inputs["seed"] = o.seed;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json doc{{"subcommand", sub},
           {"inputs", report.inputs},
           {"results", report.results},
           {"provenance",
            {{"seed", o.seed},
             {"tolerances", {{"mass", kMassTolerance}, {"dual_norm", kDualNormSlack}, {"composition_slack", kCompositionSlack}}},
             {"certification", certification_summary(report.certifications)}}},
           {"wall_time_s", seconds}};
  const std::string text = doc.dump(2) + "\n";
  try {
    if (o.out.empty()) out << text;
    else io::write_text_file(o.out, text);
  } catch (const Error& e) {
    err << error_object(std::string(to_string(e.code())), e.what()).dump() << '\n';
    return kExitValidation;
  }
  return report.failed ? kExitFailure : kExitOk;
}

}  // namespace vmlab::cli
