#include "qmetop/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace qmetop::io {

json matrix_to_json(const Matrix& m, const std::string& basis_order) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            entries.push_back({m(i, j).real(), m(i, j).imag()});
        }
    }
    json out{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
    if (!basis_order.empty()) out["basis_order"] = basis_order;
    return out;
}

Matrix matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const json& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
        throw std::invalid_argument("matrix_from_json: entry count mismatch");
    }
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index jj = 0; jj < cols; ++jj, ++k) {
            m(i, jj) = Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
        }
    }
    return m;
}

std::string basis_order_tag(const json& j) {
    return j.contains("basis_order") ? j["basis_order"].get<std::string>() : "";
}

Matrix load_table_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open table file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line) {
            if (c == '|' || c == ',') c = ' ';
        }
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("table file is empty: " + path.string());
    const std::size_t n = rows.size();
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw std::runtime_error("table file is not square: " + path.string());
        }
    }
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RunConfig parse_config(const json& j) {
    RunConfig c;
    c.params.n_qubits = j.at("N").get<int>();
    c.params.n_bath_qubits = j.at("N_L").get<int>();
    if (j.contains("omega0")) {
        c.params.omega0 = j["omega0"].get<std::vector<double>>();
    } else {
        c.params.omega0.assign(c.params.n_qubits, 1.0);
    }
    if (j.contains("g")) {
        c.params.g = j["g"].get<std::vector<double>>();
    } else {
        c.params.g.assign(std::max(0, c.params.n_qubits - 1), 0.1);
    }
    if (j.contains("Delta")) {
        c.params.delta = j["Delta"].get<std::vector<double>>();
    } else {
        c.params.delta.assign(std::max(0, c.params.n_qubits - 1), 1.0);
    }
    c.params.validate();
    c.coupling_scale = j.value("coupling_scale", 1.0);
    c.beta = j.value("beta", 1.0);
    c.delta = j.value("delta", 1e-6);
    c.basis_order = opalg::basis_order_from_name(
        j.value("basis_order", std::string("plus_minus")));
    if (j.contains("bath")) {
        const json& b = j["bath"];
        c.bath.beta = b.value("beta", c.beta);
        c.bath.mu = b.value("mu", 0.0);
        c.bath.omega_c = b.value("omega_c", 10.0);
        c.bath.validate();
    } else {
        c.bath.beta = c.beta;
    }
    c.raw = j.dump();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json(path));
}

top::TopInstance to_instance(const RunConfig& config) {
    top::TopInstance in;
    in.params = config.params;
    in.beta = config.beta;
    in.delta = config.delta;
    in.basis_order = config.basis_order;
    return in;
}

std::string digest(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json RunManifest::to_json() const {
    return json{{"command", command},       {"config_digest", config_digest},
                {"tol", tol},               {"delta", delta},
                {"outputs", outputs},       {"wall_time_s", wall_time_s}};
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

json cp_report_to_json(const redfield::CpReport& report) {
    json violations = json::array();
    for (int v : report.lemma1_violations) violations.push_back(v + 1);  // 1-based
    return json{{"is_psd", report.is_psd},
                {"min_eigenvalue", report.min_eigenvalue},
                {"lemma1_violations", violations},
                {"offdiag_block_norm", report.offdiag_block_norm}};
}

json top_result_to_json(const top::TopResult& result) {
    return json{{"tau_opt", result.tau_opt},
                {"gap", result.gap},
                {"verdict", result.verdict},
                {"marginal", result.marginal},
                {"tau_recomputed", result.tau_recomputed},
                {"iterations", result.stats.iterations},
                {"status", sdp::status_name(result.status)}};
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<top::SweepPoint>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "axis,value,N_M,tau_opt,gap,verdict\n";
    out.precision(17);
    for (const auto& p : points) {
        if (!p.ok) continue;
        out << p.axis << ',' << p.value << ',' << p.n_m << ',' << p.tau_opt << ','
            << p.gap << ',' << p.verdict << "\n";
    }
}

}  // namespace qmetop::io
