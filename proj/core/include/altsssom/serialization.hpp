#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "altsssom/model.hpp"

namespace altsssom {

/// JSON document holding params, dimension, phase, counters, every node and the edge list.
/// Doubles are written with 17 significant digits, so a round trip is exact.
std::string model_to_json(const SomModel& model);

/// Throws ParseError on malformed documents and ContractViolation on inconsistent contents.
SomModel model_from_json(std::string_view text);

void save_model(const SomModel& model, const std::filesystem::path& path);
SomModel load_model(const std::filesystem::path& path);

std::string params_to_json(const Params& params);
/// Fields absent from the document keep the values of `base`.
Params params_from_json(std::string_view text, const Params& base);

}  // namespace altsssom
