#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bubblegap/config.hpp"

namespace bubblegap::cli {

enum class OutputFormat { Csv, Json };

struct RunConfig {
    CrystalConfig crystal;
    int alpha1_points = 41;
    int alpha2_points = 21;
    bool second_band = false;
    std::vector<double> eps0_radii{0.02, 0.05, 0.08};
    std::string out_path;
    OutputFormat format = OutputFormat::Csv;
};

// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
OutputFormat parse_format(const std::string& name);

}  // namespace bubblegap::cli
