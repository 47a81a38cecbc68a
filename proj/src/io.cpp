#include "ddlqg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ddlqg::io {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("matrix_from_json: expected an array");
    const int rows = static_cast<int>(j.size());
    if (rows == 0) return {};
    // Accept both nested arrays and a flat vector (column).
    if (!j[0].is_array()) {
        Eigen::MatrixXd m(rows, 1);
        for (int i = 0; i < rows; ++i) m(i, 0) = j[i].get<double>();
        return m;
    }
    const int cols = static_cast<int>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw std::invalid_argument("matrix_from_json: ragged rows");
        for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const TrajectoryData& data) {
    auto out = open_out(path);
    out << "t";
    for (int i = 1; i <= data.nx(); ++i) out << ",x" << i;
    for (int i = 1; i <= data.nu(); ++i) out << ",u" << i;
    for (int i = 1; i <= data.ny(); ++i) out << ",y" << i;
    out << "\n";
    for (int t = 0; t < data.samples(); ++t) {
        out << t;
        for (int i = 0; i < data.nx(); ++i) out << ',' << format_g17(data.X0(i, t));
        for (int i = 0; i < data.nu(); ++i) out << ',' << format_g17(data.U0(i, t));
        for (int i = 0; i < data.ny(); ++i) out << ',' << format_g17(data.Y0(i, t));
        out << "\n";
    }
}

void write_trace_csv(const std::string& path, const ClosedLoopTrace& trace) {
    auto out = open_out(path);
    const int nx = static_cast<int>(trace.X.rows());
    const int nu = static_cast<int>(trace.U.rows());
    out << "t";
    for (int i = 1; i <= nx; ++i) out << ",x" << i;
    for (int i = 1; i <= nx; ++i) out << ",xhat" << i;
    for (int i = 1; i <= nu; ++i) out << ",u" << i;
    out << ",errnorm\n";
    for (int t = 0; t < trace.steps; ++t) {
        out << t;
        for (int i = 0; i < nx; ++i) out << ',' << format_g17(trace.X(i, t));
        for (int i = 0; i < nx; ++i) out << ',' << format_g17(trace.Xhat(i, t));
        for (int i = 0; i < nu; ++i) out << ',' << format_g17(trace.U(i, t));
        out << ',' << format_g17(trace.err_norm(t)) << "\n";
    }
}

CsvContent read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvContent content;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    content.header = line;

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        content.body.resize(0, 0);
        return content;
    }
    content.body.resize(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw std::runtime_error("ragged csv: " + path);
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            content.body(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return content;
}

nlohmann::json zonotope_to_json(const Zonotope& z) {
    return {{"center", matrix_to_json(z.c)}, {"generators", matrix_to_json(z.G)}};
}

Zonotope zonotope_from_json(const nlohmann::json& j) {
    const Eigen::MatrixXd c = matrix_from_json(j.at("center"));
    Eigen::MatrixXd G = matrix_from_json(j.at("generators"));
    if (G.size() == 0) G.resize(c.rows(), 0);
    return Zonotope(c.col(0), G);
}

nlohmann::json composite_report_to_json(const CompositeReport& rep) {
    nlohmann::json j;
    j["rho_xi0"] = rep.rho_xi0;
    j["rho_xi1"] = rep.rho_xi1;
    j["xi2_norm"] = rep.xi2_norm;
    j["similarity_residual"] = rep.similarity_residual;
    j["data_model_mismatch"] = rep.data_model_mismatch;
    nlohmann::json eig0 = nlohmann::json::array(), eig3 = nlohmann::json::array();
    for (const auto& e : rep.eig_xi0) eig0.push_back({e.real(), e.imag()});
    for (const auto& e : rep.eig_xi3) eig3.push_back({e.real(), e.imag()});
    j["eig_xi0"] = std::move(eig0);
    j["eig_xi3"] = std::move(eig3);
    return j;
}

SystemConfig system_config_from_json(const nlohmann::json& j) {
    SystemConfig cfg;
    cfg.sys = LtiSystem(matrix_from_json(j.at("A")), matrix_from_json(j.at("B")),
                        matrix_from_json(j.at("C")));
    cfg.T = j.value("T", 0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        const std::string kind = n.value("kind", "zero");
        if (kind == "zero") {
            cfg.noise = NoiseSpec::zero();
        } else if (kind == "uniform") {
            cfg.noise = NoiseSpec::uniform(n.value("wbar", 0.0), n.value("vbar", 0.0), cfg.seed);
            if (n.contains("Ew")) cfg.noise.Ew = matrix_from_json(n.at("Ew"));
        } else if (kind == "gaussian") {
            cfg.noise = NoiseSpec::gaussian(matrix_from_json(n.at("Nx")),
                                            matrix_from_json(n.at("Ny")), cfg.seed);
        } else {
            throw std::invalid_argument("system_config_from_json: unknown noise.kind " + kind);
        }
    }
    return cfg;
}

SystemConfig load_system_config(const std::string& path) {
    return system_config_from_json(read_json(path));
}

void write_json(const std::string& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace ddlqg::io
