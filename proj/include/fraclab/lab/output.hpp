#pragma once

#include <string>
#include <vector>

#include "fraclab/lab/config.hpp"
#include "fraclab/lab/experiments.hpp"

namespace fraclab::lab {

inline constexpr const char* kCsvHeader = "experiment,d,s,t,value,abs_err,predictor,ratio,flags";

std::string format_csv(const std::vector<ExperimentTable>& tables);
/// Gnuplot-style blocks, one per (experiment, datum, s) series, each with
/// columns t and value, separated by two blank lines.
std::string format_plot_data(const std::vector<ExperimentTable>& tables);
/// "N rows, all converged" (or the count that did not), then PASS/FAIL per
/// asserted criterion and the reported notes.
std::string format_summary(const std::vector<ExperimentTable>& tables);
std::string format_gnuplot_script(const std::vector<ExperimentTable>& tables, const std::string& dat_file);

struct OutputPaths {
    std::string csv;
    std::string dat;
    std::string summary;
    std::string gnuplot;
};

/// Writes <out_dir>/<prefix>.csv, .dat, _summary.txt and .gp. Throws
/// std::runtime_error naming the path on I/O failure.
OutputPaths emit_outputs(const std::vector<ExperimentTable>& tables, const ExperimentConfig& config);

}  // namespace fraclab::lab
