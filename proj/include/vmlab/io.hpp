#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vmlab/counterexamples.hpp"
#include "vmlab/dunford.hpp"
#include "vmlab/measure.hpp"
#include "vmlab/normed.hpp"
#include "vmlab/space.hpp"
#include "vmlab/summing.hpp"
#include "vmlab/thickness.hpp"

namespace vmlab::io {

using json = nlohmann::json;

// Schema violations (missing keys, wrong types) raise ErrorCode::MalformedJson;
// values that parse but break an invariant raise the constructor's error.

json to_json(const DiscreteProbabilitySpace& space);
json to_json(const Partition& partition);
json to_json(const SpaceDescriptor& descriptor);
json to_json(const Vector& v);
json to_json(const DualVector& v);
json to_json(const SimpleFunction& f);
json to_json(const VectorMeasure& nu);
json to_json(const LinearOperator& u);
json to_json(const PietschCertificate& cert);
json to_json(const ThicknessInstance& instance);
json to_json(const MomentMaxResult& result);
json to_json(const PettisExampleConfig& config);
json to_json(const KotheExampleConfig& config);

DiscreteProbabilitySpace space_from_json(const json& j);
Partition partition_from_json(const json& j, std::size_t atom_count);
SpaceDescriptor descriptor_from_json(const json& j);
Vector vector_from_json(const json& j);
DualVector dual_vector_from_json(const json& j);
std::vector<DualVector> dual_vectors_from_json(const json& j);
SimpleFunction function_from_json(const json& j);
VectorMeasure measure_from_json(const json& j);
LinearOperator operator_from_json(const json& j);
PietschCertificate certificate_from_json(const json& j);
ThicknessInstance thickness_from_json(const json& j);
PettisExampleConfig pettis_config_from_json(const json& j);
KotheExampleConfig kothe_config_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Two-column "index,value" CSV, 1-based index, values with 17 significant
/// digits.
std::string profile_csv(std::span<const double> profile);
void emit_csv(std::span<const double> profile, const std::filesystem::path& path);

}  // namespace vmlab::io
