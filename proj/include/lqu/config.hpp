#pragma once

#include <filesystem>
#include <string_view>

#include "lqu/sweep.hpp"

namespace lqu {

// Overlays a JSON document onto `config`. Keys mirror the SweepConfig and
// GAConfig field names; "format" ("csv" | "csv+svg") is accepted as an alias
// for "svg". Unknown keys and type mismatches throw ParseError.
void apply_config_json(SweepConfig& config, std::string_view json_text);

void apply_config_file(SweepConfig& config, const std::filesystem::path& path);

}  // namespace lqu
