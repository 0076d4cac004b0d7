#pragma once

#include <filesystem>
#include <json.hpp>

#include "wtpuf/channel.hpp"
#include "wtpuf/construct.hpp"
#include "wtpuf/keygen.hpp"
#include "wtpuf/quantize.hpp"

namespace wtpuf {

using Json = nlohmann::ordered_json;

Json to_json(const Quantizer& qz);
Quantizer quantizer_from_json(const Json& j);

/// {q, label, with_helper_data, matrix (row-major), input_prior, trials, seed}
Json to_json(const DmcModel& model);
DmcModel channel_from_json(const Json& j);

/// {n, q, alpha, irreducible_poly, F, R, I, reliabilities, thresholds, seed}
Json to_json(const WiretapCode& code);
WiretapCode code_from_json(const Json& j);

Json to_json(const HelperDataBundle& bundle);
HelperDataBundle bundle_from_json(const Json& j);

/// Pretty-printed JSON written through a temporary file and atomic rename.
void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace wtpuf
