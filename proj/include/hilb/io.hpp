#pragma once

#include "hilb/surface.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace hilb {

using Json = nlohmann::ordered_json;

/// Accepts "p/q" strings and JSON integers.
Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);

SurfaceModel model_from_json(const Json& j, std::string name = "model");
Json model_to_json(const SurfaceModel& m);
SurfaceModel load_model(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

Json validation_to_json(const ValidationReport& r);

}  // namespace hilb
