#include "fraclab/lab/output.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace fraclab::lab {

namespace {

// Round-trip formatting keeps the files bit-stable and lossless.
std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string series_key(const ExperimentRow& r) { return fmt::format("{} {} d={} s={}", r.experiment, r.datum, r.d, r.s); }

}  // namespace

std::string format_csv(const std::vector<ExperimentTable>& tables) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const ExperimentTable& t : tables)
        for (const ExperimentRow& r : t.rows)
            out += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_field(r.experiment), r.d, num(r.s), num(r.t),
                               num(r.value), num(r.abs_err), num(r.predictor), num(r.ratio), csv_field(r.flags()));
    return out;
}

std::string format_plot_data(const std::vector<ExperimentTable>& tables) {
    std::string out;
    std::vector<std::string> order;
    std::map<std::string, std::string> blocks;
    for (const ExperimentTable& t : tables) {
        for (const ExperimentRow& r : t.rows) {
            const std::string key = series_key(r);
            if (!blocks.count(key)) order.push_back(key);
            blocks[key] += num(r.t) + " " + num(r.value) + "\n";
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += "# " + order[i] + "\n" + blocks[order[i]];
    }
    return out;
}

std::string format_summary(const std::vector<ExperimentTable>& tables) {
    std::size_t rows = 0, bad = 0;
    for (const ExperimentTable& t : tables)
        for (const ExperimentRow& r : t.rows) {
            ++rows;
            if (!r.converged) ++bad;
        }
    std::string out = fmt::format("{} row{}, ", rows, rows == 1 ? "" : "s");
    out += bad == 0 ? "all converged\n" : fmt::format("{} not converged\n", bad);
    for (const ExperimentTable& t : tables) {
        for (const CriterionOutcome& c : t.checks)
            out += fmt::format("{} [{}] {}{}\n", c.passed ? "PASS" : "FAIL", t.experiment, c.name,
                               c.detail.empty() ? "" : ": " + c.detail);
        for (const std::string& n : t.notes) out += fmt::format("NOTE [{}] {}\n", t.experiment, n);
    }
    return out;
}

std::string format_gnuplot_script(const std::vector<ExperimentTable>& tables, const std::string& dat_file) {
    std::vector<std::string> order;
    for (const ExperimentTable& t : tables)
        for (const ExperimentRow& r : t.rows)
            if (std::find(order.begin(), order.end(), series_key(r)) == order.end()) order.push_back(series_key(r));
    std::string out = "set xlabel 't'\nset ylabel 'value'\nset key left top\n";
    if (order.empty()) return out + "# no data\n";
    out += "plot ";
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += ", \\\n     ";
        out += fmt::format("'{}' index {} using 1:2 with linespoints title '{}'", dat_file, i, order[i]);
    }
    return out + "\n";
}

OutputPaths emit_outputs(const std::vector<ExperimentTable>& tables, const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    const std::string prefix = config.output_prefix();
    OutputPaths p{(dir / (prefix + ".csv")).string(), (dir / (prefix + ".dat")).string(),
                  (dir / (prefix + "_summary.txt")).string(), (dir / (prefix + ".gp")).string()};
    write_file(p.csv, format_csv(tables));
    write_file(p.dat, format_plot_data(tables));
    write_file(p.summary, format_summary(tables));
    write_file(p.gnuplot, format_gnuplot_script(tables, prefix + ".dat"));
    return p;
}

}  // namespace fraclab::lab
