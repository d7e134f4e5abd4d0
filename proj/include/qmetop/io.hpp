// io.hpp — JSON matrix interchange, the whitespace/pipe table loader, run
// configs, and the reproducibility manifest.

#pragma once

#include "qmetop/model.hpp"
#include "qmetop/opalg.hpp"
#include "qmetop/redfield.hpp"
#include "qmetop/top.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>

namespace qmetop::io {

using json = nlohmann::json;

// Complex matrices travel as row-major [re, im] pairs with a basis tag.
json matrix_to_json(const Matrix& m, const std::string& basis_order = "");
Matrix matrix_from_json(const json& j);
std::string basis_order_tag(const json& j);   // "" when untagged

// n x n whitespace- or pipe-separated real table (Table-style files).
Matrix load_table_matrix(const std::filesystem::path& path);

struct RunConfig {
    model::XxzParams params;
    double coupling_scale = 1.0;   // scales the default bath coupling operator
    double beta = 1.0;
    double delta = 1e-6;
    opalg::BasisOrder basis_order = opalg::BasisOrder::kPlusMinus;
    model::BathSpec bath;           // used by the redfield pipeline
    std::string raw;                // canonical serialization for digesting
};

RunConfig parse_config(const json& j);
RunConfig load_config(const std::filesystem::path& path);

top::TopInstance to_instance(const RunConfig& config);

// FNV-1a over the canonical config bytes; stable across runs and platforms.
std::string digest(const std::string& data);

struct RunManifest {
    std::string command;
    std::string config_digest;
    double tol = 1e-9;
    double delta = 1e-6;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;

    json to_json() const;
};

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

json cp_report_to_json(const redfield::CpReport& report);
json top_result_to_json(const top::TopResult& result);

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<top::SweepPoint>& points);

}  // namespace qmetop::io
