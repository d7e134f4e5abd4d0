// qmetop_cli.cpp — command-line surface: builds Redfield coefficient matrices,
// audits complete positivity, evaluates tau for stored generators, and solves
// or sweeps the thermalization optimization problem.

#include "qmetop/io.hpp"
#include "qmetop/lindblad.hpp"
#include "qmetop/redfield.hpp"
#include "qmetop/top.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace qmetop;
using io::json;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    double tol = 1e-9;
    double delta = -1.0;          // <0: take the config value
    std::string basis_order;      // empty: take the config value
    int jobs = 1;
};

io::RunConfig load(const CommonOptions& opt) {
    io::RunConfig config = io::load_config(opt.config_path);
    if (opt.delta >= 0) config.delta = opt.delta;
    if (!opt.basis_order.empty()) {
        config.basis_order = opalg::basis_order_from_name(opt.basis_order);
    }
    return config;
}

struct ManifestWriter {
    io::RunManifest manifest;
    fs::path dir;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ManifestWriter(const std::string& command, const io::RunConfig& config,
                   const CommonOptions& opt)
        : dir(opt.out_dir) {
        fs::create_directories(dir);
        manifest.command = command;
        manifest.config_digest = io::digest(config.raw);
        manifest.tol = opt.tol;
        manifest.delta = config.delta;
    }

    void emit(const std::string& name, json j) {
        j["manifest_digest"] = manifest.config_digest;
        io::write_json(dir / name, j);
        manifest.outputs.push_back(name);
    }

    void finish() {
        manifest.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        io::write_json(dir / "manifest.json", manifest.to_json());
    }
};

Matrix load_matrix_any(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return io::matrix_from_json(io::read_json(path));
    }
    return io::load_table_matrix(path);
}

std::string file_basis_tag(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return io::basis_order_tag(io::read_json(path));
    }
    return "";
}

int run_redfield_gamma(const CommonOptions& opt) {
    const io::RunConfig config = load(opt);
    ManifestWriter out("redfield-gamma", config, opt);

    const model::EigenSystem sys =
        model::diagonalize(model::build_xxz(config.params));
    const opalg::OperatorBasis basis = opalg::product_basis(
        config.params.n_bath_qubits,
        config.params.n_qubits - config.params.n_bath_qubits, config.basis_order);
    redfield::CouplingSet couplings =
        redfield::CouplingSet::sigma_minus_first_qubit(config.params.n_qubits);
    couplings.items[0].op *= config.coupling_scale;
    quad::PvSettings pv;
    pv.target = std::min(1e-9, opt.tol);
    const redfield::RedfieldParts parts =
        redfield::build_parts(sys, couplings, config.bath, basis, 1.0, pv);
    const redfield::CpReport report =
        redfield::cp_check(parts.gamma, basis.local_count());

    const std::string tag = opalg::basis_order_name(config.basis_order);
    out.emit("gamma.json", io::matrix_to_json(parts.gamma, tag));
    out.emit("hls.json", io::matrix_to_json(parts.h_ls, tag));
    out.emit("cp_report.json", io::cp_report_to_json(report));
    out.finish();
    std::cout << "gamma " << parts.gamma.rows() << "x" << parts.gamma.cols()
              << ", is_psd=" << (report.is_psd ? "true" : "false")
              << ", min_eigenvalue=" << report.min_eigenvalue << "\n";
    return 0;
}

int run_cp_check(const CommonOptions& opt, const std::string& gamma_path,
                 int local_count) {
    io::RunConfig config;
    config.raw = "cp-check:" + gamma_path;
    ManifestWriter out("cp-check", config, opt);
    const Matrix gamma = load_matrix_any(gamma_path);
    if (local_count <= 0) local_count = static_cast<int>(gamma.rows());
    const redfield::CpReport report = redfield::cp_check(gamma, local_count);
    out.emit("cp_report.json", io::cp_report_to_json(report));
    out.finish();
    std::cout << "is_psd=" << (report.is_psd ? "true" : "false")
              << ", min_eigenvalue=" << report.min_eigenvalue << "\n";
    return 0;
}

int run_tau_eval(const CommonOptions& opt, const std::string& gamma_path,
                 const std::string& hls_path) {
    const io::RunConfig config = load(opt);
    ManifestWriter out("tau-eval", config, opt);

    const std::string file_tag = file_basis_tag(gamma_path);
    const std::string want_tag = opalg::basis_order_name(config.basis_order);
    if (!file_tag.empty() && file_tag != want_tag) {
        throw std::invalid_argument("basis order mismatch: file carries '" +
                                    file_tag + "', run requested '" + want_tag + "'");
    }
    const Matrix gamma = load_matrix_any(gamma_path);
    const int d_l = config.params.dim_l();
    Matrix h_ls = Matrix::Zero(d_l, d_l);
    if (!hls_path.empty()) h_ls = load_matrix_any(hls_path);

    const top::TopInstance instance = io::to_instance(config);
    const double tau = top::tau_audit(gamma, h_ls, instance);
    out.emit("tau.json", json{{"tau", tau},
                              {"delta", config.delta},
                              {"below_delta", tau < config.delta}});
    out.finish();
    std::cout << "tau=" << tau << (tau < config.delta ? " (< delta)" : " (>= delta)")
              << "\n";
    return 0;
}

int run_top_solve(const CommonOptions& opt) {
    const io::RunConfig config = load(opt);
    ManifestWriter out("top-solve", config, opt);
    const top::TopResult result =
        top::solve_top(io::to_instance(config), opt.tol);
    const std::string tag = opalg::basis_order_name(config.basis_order);
    out.emit("top_result.json", io::top_result_to_json(result));
    out.emit("gamma_opt.json", io::matrix_to_json(result.gamma_l_opt, tag));
    out.emit("hls_opt.json", io::matrix_to_json(result.h_ls_opt, tag));
    out.finish();
    std::cout << "tau_opt=" << result.tau_opt << ", verdict=" << result.verdict
              << (result.marginal ? " (marginal)" : "") << ", gap=" << result.gap
              << "\n";
    return 0;
}

int run_top_sweep(const CommonOptions& opt, const std::string& axis,
                  const std::vector<double>& values) {
    const io::RunConfig config = load(opt);
    ManifestWriter out("top-sweep", config, opt);
    const std::vector<top::SweepPoint> points =
        top::sweep(io::to_instance(config), axis, values, opt.jobs, opt.tol);
    io::write_sweep_csv(fs::path(opt.out_dir) / "sweep.csv", points);
    out.manifest.outputs.push_back("sweep.csv");
    json errors = json::array();
    for (const auto& p : points) {
        if (!p.ok) {
            errors.push_back({{"axis", p.axis}, {"value", p.value}, {"error", p.error}});
        }
    }
    out.emit("sweep_errors.json", json{{"errors", errors}});
    out.finish();
    int ok = 0;
    for (const auto& p : points) ok += p.ok ? 1 : 0;
    std::cout << ok << "/" << points.size() << " points solved\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bloch-Redfield generators, complete-positivity audits, and the "
                 "thermalization optimization problem for XXZ chains"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string gamma_path, hls_path, axis = "g";
    std::vector<double> values;
    int local_count = 0;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", opt.config_path, "instance config JSON");
        if (needs_config) c->required();
        cmd->add_option("--out-dir", opt.out_dir, "output directory");
        cmd->add_option("--tol", opt.tol, "solver tolerance");
        cmd->add_option("--delta", opt.delta, "verdict tolerance override");
        cmd->add_option("--basis-order", opt.basis_order,
                        "plus_minus or minus_plus");
        cmd->add_option("--jobs", opt.jobs, "sweep parallelism");
    };

    auto* gamma_cmd = app.add_subcommand(
        "redfield-gamma", "build the coefficient matrix and audit positivity");
    add_common(gamma_cmd, true);

    auto* cp_cmd = app.add_subcommand("cp-check", "positivity audit of a stored matrix");
    add_common(cp_cmd, false);
    cp_cmd->add_option("--gamma", gamma_path, "matrix file (json or table)")->required();
    cp_cmd->add_option("--local-count", local_count, "bath-coupled block size d_L^2-1");

    auto* tau_cmd = app.add_subcommand("tau-eval", "tau of a stored generator");
    add_common(tau_cmd, true);
    tau_cmd->add_option("--gamma", gamma_path, "generator matrix (json or table)")
        ->required();
    tau_cmd->add_option("--hls", hls_path, "Lamb shift matrix (optional)");

    auto* solve_cmd = app.add_subcommand("top-solve", "solve the optimization problem");
    add_common(solve_cmd, true);

    auto* sweep_cmd = app.add_subcommand("top-sweep", "solve across a parameter grid");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--axis", axis, "g or beta");
    sweep_cmd->add_option("--values", values, "grid values")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gamma_cmd->parsed()) return run_redfield_gamma(opt);
        if (cp_cmd->parsed()) return run_cp_check(opt, gamma_path, local_count);
        if (tau_cmd->parsed()) return run_tau_eval(opt, gamma_path, hls_path);
        if (solve_cmd->parsed()) return run_top_solve(opt);
        if (sweep_cmd->parsed()) return run_top_sweep(opt, axis, values);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
