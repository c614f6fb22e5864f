#include "vmlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vmlab/error.hpp"

namespace vmlab::io {

namespace {

template <typename Fn>
auto schema(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedJson, std::string(what) + ": " + e.what());
  }
}

json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

double parse_exponent(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
    fail(ErrorCode::MalformedJson, "exponent string must be \"inf\"");
  }
  return j.get<double>();
}

json coords(const std::vector<double>& c) { return json(c); }

json vector_list(std::span<const Vector> vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(v.coords);
  return out;
}

std::vector<Vector> vectors_from(const json& j) {
  std::vector<Vector> out;
  for (const auto& item : j) out.push_back(Vector{item.get<std::vector<double>>()});
  return out;
}

}  // namespace

json to_json(const DiscreteProbabilitySpace& space) {
  return json{{"masses", std::vector<double>(space.masses().begin(), space.masses().end())}};
}

json to_json(const Partition& partition) { return json(partition.blocks()); }

json to_json(const SpaceDescriptor& d) {
  json out{{"dim", d.dim()}, {"q", number_or_inf(d.q())}};
  if (d.weights()) out["weights"] = *d.weights();
  return out;
}

json to_json(const Vector& v) { return coords(v.coords); }
json to_json(const DualVector& v) { return coords(v.coords); }

json to_json(const SimpleFunction& f) {
  return json{{"space", to_json(f.space())}, {"codomain", to_json(f.codomain())}, {"values", vector_list(f.values())}};
}

json to_json(const VectorMeasure& nu) {
  return json{{"space", to_json(nu.space())},
              {"codomain", to_json(nu.codomain())},
              {"atom_values", vector_list(nu.atom_values())}};
}

json to_json(const LinearOperator& u) {
  json rows = json::array();
  for (Eigen::Index k = 0; k < u.entries().rows(); ++k) {
    std::vector<double> row(static_cast<std::size_t>(u.entries().cols()));
    for (Eigen::Index j = 0; j < u.entries().cols(); ++j) row[static_cast<std::size_t>(j)] = u.entries()(k, j);
    rows.push_back(row);
  }
  return json{{"domain", to_json(u.domain())}, {"codomain", to_json(u.codomain())}, {"entries", rows}};
}

json to_json(const PietschCertificate& cert) {
  json support = json::array();
  for (const auto& s : cert.support) support.push_back(s.coords);
  return json{{"p", cert.p},
              {"support", support},
              {"weights", cert.weights},
              {"constant", cert.constant},
              {"test_family", vector_list(cert.test_family)},
              {"test_family_hash", family_hash(cert.test_family)}};
}

json to_json(const ThicknessInstance& instance) {
  json gamma = json::array();
  for (const auto& g : instance.gamma) gamma.push_back(g.coords);
  json out{{"descriptor", to_json(instance.descriptor)}, {"gamma", gamma}};
  if (instance.chain) out["chain"] = *instance.chain;
  return out;
}

json to_json(const MomentMaxResult& r) {
  return json{{"value", r.value}, {"witness", r.witness.coords}, {"certification", std::string(to_string(r.certification))}};
}

json to_json(const PettisExampleConfig& c) { return json{{"levels", c.levels}, {"p", c.p}}; }
json to_json(const KotheExampleConfig& c) { return json{{"p", c.p}, {"atom_masses", c.atom_masses}}; }

DiscreteProbabilitySpace space_from_json(const json& j) {
  auto masses = schema("space", [&] { return j.at("masses").get<std::vector<double>>(); });
  return make_space(std::move(masses));
}

Partition partition_from_json(const json& j, std::size_t atom_count) {
  auto blocks = schema("partition", [&] { return j.get<std::vector<std::vector<std::size_t>>>(); });
  return Partition(atom_count, std::move(blocks));
}

SpaceDescriptor descriptor_from_json(const json& j) {
  return schema("descriptor", [&] {
    const auto dim = j.at("dim").get<std::size_t>();
    const double q = parse_exponent(j.at("q"));
    std::optional<std::vector<double>> weights;
    if (j.contains("weights") && !j.at("weights").is_null()) weights = j.at("weights").get<std::vector<double>>();
    return SpaceDescriptor(dim, q, std::move(weights));
  });
}

Vector vector_from_json(const json& j) {
  return schema("vector", [&] { return Vector{j.get<std::vector<double>>()}; });
}

DualVector dual_vector_from_json(const json& j) {
  return schema("dual vector", [&] { return DualVector{j.get<std::vector<double>>()}; });
}

std::vector<DualVector> dual_vectors_from_json(const json& j) {
  return schema("dual vectors", [&] {
    std::vector<DualVector> out;
    for (const auto& item : j) out.push_back(DualVector{item.get<std::vector<double>>()});
    return out;
  });
}

SimpleFunction function_from_json(const json& j) {
  auto space = space_from_json(schema("function", [&] { return j.at("space"); }));
  auto codomain = descriptor_from_json(schema("function", [&] { return j.at("codomain"); }));
  auto values = schema("function", [&] { return vectors_from(j.at("values")); });
  return SimpleFunction(std::move(space), std::move(codomain), std::move(values));
}

VectorMeasure measure_from_json(const json& j) {
  auto space = space_from_json(schema("measure", [&] { return j.at("space"); }));
  auto codomain = descriptor_from_json(schema("measure", [&] { return j.at("codomain"); }));
  auto values = schema("measure", [&] { return vectors_from(j.at("atom_values")); });
  return VectorMeasure(std::move(space), std::move(codomain), std::move(values));
}

LinearOperator operator_from_json(const json& j) {
  auto domain = descriptor_from_json(schema("operator", [&] { return j.at("domain"); }));
  auto codomain = descriptor_from_json(schema("operator", [&] { return j.at("codomain"); }));
  auto rows = schema("operator", [&] { return j.at("entries").get<std::vector<std::vector<double>>>(); });
  require(rows.size() == codomain.dim(), ErrorCode::DimensionMismatch, "entries need one row per codomain coordinate");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(codomain.dim()), static_cast<Eigen::Index>(domain.dim()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    require(rows[k].size() == domain.dim(), ErrorCode::DimensionMismatch,
            "entries need one column per domain coordinate");
    for (std::size_t c = 0; c < rows[k].size(); ++c) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = rows[k][c];
    }
  }
  return LinearOperator(std::move(domain), std::move(codomain), std::move(m));
}

PietschCertificate certificate_from_json(const json& j) {
  return schema("certificate", [&] {
    PietschCertificate cert;
    cert.p = j.at("p").get<double>();
    for (const auto& s : j.at("support")) cert.support.push_back(DualVector{s.get<std::vector<double>>()});
    cert.weights = j.at("weights").get<std::vector<double>>();
    cert.constant = j.at("constant").get<double>();
    cert.test_family = vectors_from(j.at("test_family"));
    require(cert.weights.size() == cert.support.size(), ErrorCode::DimensionMismatch,
            "one weight per support point");
    return cert;
  });
}

ThicknessInstance thickness_from_json(const json& j) {
  auto descriptor = descriptor_from_json(schema("thickness", [&] { return j.at("descriptor"); }));
  ThicknessInstance instance{std::move(descriptor), {}, std::nullopt};
  instance.gamma = dual_vectors_from_json(schema("thickness", [&] { return j.at("gamma"); }));
  if (j.contains("chain") && !j.at("chain").is_null()) {
    instance.chain = schema("thickness", [&] { return j.at("chain").get<std::vector<std::size_t>>(); });
  }
  validate(instance);
  return instance;
}

PettisExampleConfig pettis_config_from_json(const json& j) {
  return schema("pettis config", [&] {
    PettisExampleConfig c;
    c.levels = j.at("levels").get<std::size_t>();
    if (j.contains("p")) c.p = j.at("p").get<double>();
    return c;
  });
}

KotheExampleConfig kothe_config_from_json(const json& j) {
  return schema("kothe config", [&] {
    KotheExampleConfig c;
    c.p = j.at("p").get<double>();
    c.atom_masses = j.at("atom_masses").get<std::vector<double>>();
    return c;
  });
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::MalformedJson, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

std::string profile_csv(std::span<const double> profile) {
  require(!profile.empty(), ErrorCode::InvalidArgument, "cannot emit an empty profile");
  std::ostringstream out;
  out << "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < profile.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", profile[i]);
    out << (i + 1) << ',' << buf << '\n';
  }
  return out.str();
}

void emit_csv(std::span<const double> profile, const std::filesystem::path& path) {
  write_text_file(path, profile_csv(profile));
}

}  // namespace vmlab::io
