#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddlqg/lqg_controller.hpp"
#include "ddlqg/lti_sim.hpp"
#include "ddlqg/zonotope.hpp"

namespace ddlqg::io {

/// 17-significant-digit decimal formatting (round-trips doubles exactly).
std::string format_g17(double v);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

/// Writes `t,x1..xn,u1..um,y1..yp` rows, one per sample, '\n' endings.
void write_trajectory_csv(const std::string& path, const TrajectoryData& data);

/// Writes `t,x1..xn,xhat1..xhatn,u1..um,errnorm` rows.
void write_trace_csv(const std::string& path, const ClosedLoopTrace& trace);

/// Minimal CSV reader for round-trip checks: returns the header line and a
/// dense matrix of the numeric body.
struct CsvContent {
    std::string header;
    Eigen::MatrixXd body;
};
CsvContent read_csv(const std::string& path);

nlohmann::json zonotope_to_json(const Zonotope& z);
Zonotope zonotope_from_json(const nlohmann::json& j);

nlohmann::json composite_report_to_json(const CompositeReport& rep);

/// System/scenario definition: keys A, B, C (row-major nested arrays),
/// noise.kind ("zero"/"uniform"/"gaussian"), noise.wbar, noise.vbar,
/// noise.Nx, noise.Ny, optional noise.Ew, T, seed.
struct SystemConfig {
    LtiSystem sys;
    NoiseSpec noise;
    int T = 0;
    std::uint64_t seed = 0;
};
SystemConfig system_config_from_json(const nlohmann::json& j);
SystemConfig load_system_config(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace ddlqg::io
