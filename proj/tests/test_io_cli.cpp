#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "vmlab/cli.hpp"
#include "vmlab/error.hpp"
#include "vmlab/io.hpp"

using namespace vmlab;
using namespace vmlab::testing;
using nlohmann::json;

namespace {

const std::string kFixtures = VMLAB_FIXTURE_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json without_wall_time(json report) {
  report.erase("wall_time_s");
  return report;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "vmlab_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

template <typename T, typename Parse>
void round_trip(const T& value, Parse parse) {
  const json j = io::to_json(value);
  const json reparsed = json::parse(j.dump());
  CHECK(parse(reparsed) == value);
}

}  // namespace

TEST_CASE("json round trips") {
  Rng rng(91);
  for (int k = 0; k < 20; ++k) {
    const auto space = random_space(rng, 1 + rng.index(6));
    const double q = pick(rng, {1.0, 1.5, 2.0, kInf});
    const auto s = rng.uniform() < 0.5 ? SpaceDescriptor::lq(3, q)
                                       : SpaceDescriptor::weighted_lq({0.5, 1.5, 2.0}, q);
    const auto f = random_function(rng, space, s);
    round_trip(space, io::space_from_json);
    round_trip(s, io::descriptor_from_json);
    round_trip(f, io::function_from_json);
    round_trip(indefinite_integral(f), io::measure_from_json);
    round_trip(Vector{rng.normal_vector(3)}, io::vector_from_json);
    round_trip(DualVector{rng.normal_vector(3)}, io::dual_vector_from_json);
    const Partition part = random_partition(rng, space.size());
    CHECK(io::partition_from_json(json::parse(io::to_json(part).dump()), space.size()) == part);
    Eigen::MatrixXd m(2, 3);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 3; ++c) m(r, c) = rng.normal();
    }
    round_trip(LinearOperator(s, SpaceDescriptor::lq(2, 1.0), m), io::operator_from_json);
  }
  const auto l2 = SpaceDescriptor::lq(2, 2.0);
  const auto cert = pietsch_lp_upper(LinearOperator::identity(l2), 2.0, dual_sphere(l2, 36), primal_sphere(l2, 8));
  const auto back = io::certificate_from_json(json::parse(io::to_json(cert).dump()));
  CHECK(back.constant == cert.constant);
  CHECK(back.weights == cert.weights);
  CHECK(back.support == cert.support);
  CHECK(back.test_family == cert.test_family);
  CHECK(io::to_json(cert).at("test_family_hash") == family_hash(cert.test_family));

  const ThicknessInstance inst{l2, {DualVector{{1, 0}}, DualVector{{0, 1}}}, std::vector<std::size_t>{1, 2}};
  const auto inst_back = io::thickness_from_json(json::parse(io::to_json(inst).dump()));
  CHECK(inst_back.descriptor == inst.descriptor);
  CHECK(inst_back.gamma == inst.gamma);
  CHECK(inst_back.chain == inst.chain);

  const auto pettis = io::pettis_config_from_json(io::to_json(PettisExampleConfig{5, 2.0}));
  CHECK(pettis.levels == 5);
  const auto kothe = io::kothe_config_from_json(io::to_json(KotheExampleConfig{3.0, {0.25, 0.75}}));
  CHECK(kothe.atom_masses == std::vector<double>{0.25, 0.75});
  CHECK(io::to_json(SpaceDescriptor::lq(2, kInf)).at("q") == "inf");
}

TEST_CASE("schema errors") {
  auto code = [](auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code([] { io::read_json_file(fixture("truncated.json")); }) == ErrorCode::MalformedJson);
  CHECK(code([] { io::read_json_file(fixture("does_not_exist.json")); }) == ErrorCode::IoError);
  CHECK(code([] { io::function_from_json(io::read_json_file(fixture("missing_key.json"))); }) ==
        ErrorCode::MalformedJson);
  CHECK(code([] { io::function_from_json(io::read_json_file(fixture("bad_masses.json"))); }) == ErrorCode::MassNotOne);
  CHECK(code([] { io::descriptor_from_json(json{{"dim", 2}, {"q", "two"}}); }) == ErrorCode::MalformedJson);
}

TEST_CASE("csv profiles") {
  const std::vector<double> ones{1, 1, 1};
  CHECK(io::profile_csv(ones) == "index,value\n1,1\n2,1\n3,1\n");
  CHECK(io::profile_csv(std::vector<double>{0.1}) == "index,value\n1,0.10000000000000001\n");
  CHECK_THROWS_AS(io::profile_csv(std::vector<double>{}), Error);
  const auto path = scratch("profile.csv");
  io::emit_csv(ones, path);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == io::profile_csv(ones));
  CHECK_THROWS_AS(io::emit_csv(ones, "/nonexistent-dir/x.csv"), Error);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli({"integrate"}).code == cli::kExitUnknownSubcommand);
  CHECK(run_cli({}).code == cli::kExitUnknownSubcommand);
  const auto unknown = run_cli({"integrate", "--p", "2"});
  CHECK(json::parse(unknown.err).at("error").at("code") == "UnknownSubcommand");

  const auto malformed = run_cli({"dunford-norm", "--function", fixture("truncated.json")});
  CHECK(malformed.code == cli::kExitMalformedJson);
  CHECK(json::parse(malformed.err).at("error").at("code") == "MalformedJson");
  CHECK(run_cli({"dunford-norm", "--function", fixture("missing_key.json")}).code == cli::kExitMalformedJson);

  const auto guard = run_cli({"dunford-norm", "--function", fixture("bad_masses.json")});
  CHECK(guard.code == cli::kExitValidation);
  CHECK(json::parse(guard.err).at("error").at("code") == "MassNotOne");
  CHECK(run_cli({"dunford-norm", "--function", fixture("two_atom_function.json"), "--p", "0.5"}).code ==
        cli::kExitValidation);
  CHECK(run_cli({"dunford-norm"}).code == cli::kExitValidation);
  CHECK(run_cli({"dunford-norm", "--bogus"}).code == cli::kExitValidation);
  CHECK(run_cli({"counterexample", "weierstrass"}).code == cli::kExitValidation);
  CHECK(run_cli({"counterexample", "pettis", "--levels", "13"}).code == cli::kExitValidation);
  CHECK(run_cli({"verify", "--suite", "12"}).code == cli::kExitValidation);
  CHECK(run_cli({"pietsch-lp", "--operator", fixture("identity_l2.json"), "--grid", "0.5"}).code ==
        cli::kExitValidation);
}

TEST_CASE("cli pettis report") {
  const auto path = scratch("r.json");
  const auto r = run_cli({"counterexample", "pettis", "--levels", "3", "--p", "2", "--out", path.string()});
  REQUIRE(r.code == 0);
  const json report = io::read_json_file(path);
  CHECK(report.at("subcommand") == "counterexample");
  const auto& results = report.at("results");
  CHECK(results.at("dunford_norm").at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(results.at("dunford_norm").at("certification") == "exact");
  CHECK(results.at("bochner_norm").get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  const auto sv = results.at("sv_profile").get<std::vector<double>>();
  REQUIRE(sv.size() == 3);
  for (double s : sv) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.at("provenance").at("seed") == 0);
  CHECK(report.at("provenance").at("certification") == "exact");
  CHECK(report.contains("wall_time_s"));
  CHECK(report.at("inputs").at("config").at("levels") == 3);
}

TEST_CASE("cli kothe report") {
  const auto r = run_cli({"counterexample", "kothe", "--p", "3", "--masses", "0.25", "0.25", "0.5"});
  REQUIRE(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report.at("results").at("dunford_norm").at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cli numeric subcommands") {
  const std::string f = fixture("two_atom_function.json");
  const std::string g = fixture("linf_function.json");

  auto results = [](const Run& r) {
    REQUIRE(r.code == 0);
    return json::parse(r.out).at("results");
  };
  CHECK(results(run_cli({"dunford-norm", "--function", f})).at("dunford_norm").at("value").get<double>() ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(results(run_cli({"bochner-norm", "--function", f})).at("bochner_norm").get<double>() == doctest::Approx(1.0));

  const auto csv = scratch("sv.csv");
  const auto sv = results(run_cli({"svprofile", "--function", f, "--csv", csv.string()}));
  CHECK(sv.at("sv_profile").size() == 2);
  CHECK(std::filesystem::exists(csv));

  const auto defect = results(run_cli({"defect", "--function", g, "--partition", fixture("halves.json"), "--p", "1.5"}));
  CHECK(defect.at("defect").at("value").get<double>() > 0.0);
  CHECK(defect.at("partition") == json::parse("[[0, 1], [2]]"));

  const auto modulus = results(run_cli({"ui-modulus", "--function", g, "--delta", "0.25", "--delta", "1"}));
  REQUIRE(modulus.at("modulus").size() == 2);
  const double dn = results(run_cli({"dunford-norm", "--function", g})).at("dunford_norm").at("value").get<double>();
  CHECK(modulus.at("modulus")[1].at("eta").get<double>() == doctest::Approx(dn * dn));

  for (std::string method : {"finest", "brute", "holder_dual"}) {
    const auto v = results(run_cli({"variation", "--measure", fixture("single_atom_measure.json"), "--p", "1", "--method", method}));
    CHECK(v.at("p_variation").get<double>() == doctest::Approx(5.0));
  }
  CHECK(run_cli({"variation", "--measure", fixture("single_atom_measure.json"), "--method", "fastest"}).code ==
        cli::kExitValidation);

  const auto semi = results(run_cli({"semivariation", "--function", f}));
  CHECK(semi.at("p_semivariation").at("value").get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));

  const auto lower = results(run_cli({"summing-lower", "--operator", fixture("identity_l2.json")}));
  CHECK(lower.at("pi_p_lower").at("value").get<double>() == doctest::Approx(std::sqrt(2.0)));

  const auto lp = results(run_cli({"pietsch-lp", "--operator", fixture("identity_l2.json")}));
  const double c = lp.at("certificate").at("constant").get<double>();
  CHECK(c >= std::sqrt(2.0) - 1e-9);
  CHECK(c <= std::sqrt(2.0) * 1.05);
  CHECK(lp.at("certification") == "lp-estimate");
  CHECK(lp.at("violation").get<double>() <= 1e-9);

  const auto composed = results(run_cli({"compose", "--operator", fixture("identity_l2.json"), "--function", f}));
  CHECK(composed.at("function_bound").at("holds") == true);

  const auto thick = results(run_cli({"thickness", "--instance", fixture("square_gamma.json"), "--function", f}));
  CHECK(thick.at("radius").at("lower").get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(thick.at("chain_profile").size() == 2);
  CHECK(thick.at("norm_bound").at("holds") == true);
}

TEST_CASE("cli reports are deterministic apart from wall time") {
  const std::vector<std::vector<std::string>> commands{
      {"summing-lower", "--operator", fixture("identity_l2.json"), "--seed", "7"},
      {"dunford-norm", "--function", fixture("linf_function.json"), "--p", "1.5"},
      {"pietsch-lp", "--operator", fixture("identity_l2.json"), "--grid", "120", "--tests", "16"},
  };
  for (const auto& args : commands) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(without_wall_time(json::parse(a.out)).dump() == without_wall_time(json::parse(b.out)).dump());
  }
}

TEST_CASE("cli verify") {
  const auto some = run_cli({"verify", "--suite", "1,8,9"});
  CHECK(some.code == 0);
  CHECK(json::parse(some.out).at("results").at("criteria").size() == 3);
  const auto all = run_cli({"verify", "--suite", "all"});
  CHECK(all.code == 0);
  CHECK(json::parse(all.out).at("results").at("all_passed") == true);
}
