#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraclab/exterior_data.hpp"
#include "fraclab/modulus.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab::lab {

enum class ExperimentKind {
    solve,
    sweep_upper,
    sweep_lower,
    blowup,
    cancellation,
    check_dini,
    check_geometry,
    apply_operator,
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind kind);

/// t = 1 - 10^{-k}, k = 0, 0.5, ..., 4.
std::vector<double> default_grid();
/// t = 1 - 10^{-k} for k = first, first + step, ..., last.
std::vector<double> decade_grid(double first, double last, double step);

/// One experiment as read from a key=value file with [sections]:
///
///   [experiment]  id, kind, d, s (comma list), s0, modulus, datum, expect,
///                 variant
///   [grid]        t (comma list) or k_first, k_last, k_step
///   [quadrature]  rel_tol, abs_tol, max_subdivisions, split_factor
///   [output]      dir, prefix
///   [run]         seed, tol, serial
///   [geometry]    domain, depth, boundary_points, samples, cusp_beta
///
/// Moduli are written as power:a, power_log:a:p, log_inverse:p, zero,
/// table:t0/v0;t1/v1;... or times_power:a:<inner>, or in keyword form
/// (kind=power alpha=0.5, kind=power_log s=0.5 p=1,
/// kind=table points=[[0,0],[1,0.3]]); the token s stands for the current
/// order. Data: prop42, thm15, cex14, ex43, constant:c,
/// indicator:a.
struct ExperimentConfig {
    std::string id = "experiment";
    ExperimentKind kind = ExperimentKind::solve;
    int d = 1;
    std::vector<double> s_list{0.5};
    /// Declared lower bound of the orders in s_list.
    double s0 = 0.0;
    std::string modulus = "power:s";
    std::string datum = "prop42";
    /// What the run asserts: "" (experiment default), convergent, divergent,
    /// holds, violated.
    std::string expect;
    /// Dini variant for check-dini: plain or two_s.
    std::string variant = "plain";
    std::vector<double> grid = default_grid();
    QuadratureSpec quadrature;
    std::string out_dir = "out";
    std::string prefix;
    std::uint64_t seed = 1;
    /// Absolute tolerance of the cancellation and operator assertions.
    double tol = 1e-8;
    bool serial = false;

    std::string domain = "ball";
    double depth = 0.5;
    int boundary_points = 32;
    std::size_t samples = 10000;
    double cusp_beta = 0.5;

    void validate() const;
    std::string output_prefix() const { return prefix.empty() ? id : prefix; }
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
/// Built-in configuration of a CLI subcommand (used when no file is given).
ExperimentConfig default_config(ExperimentKind kind);

ModulusFunction parse_modulus(const std::string& text, double s);
ExteriorDatum make_datum(const ExperimentConfig& config, double s);

}  // namespace fraclab::lab
