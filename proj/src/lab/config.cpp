#include "fraclab/lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "fraclab/error.hpp"

namespace fraclab::lab {

namespace {

struct KindName {
    ExperimentKind kind;
    const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::solve, "solve"},
    {ExperimentKind::sweep_upper, "sweep-upper"},
    {ExperimentKind::sweep_lower, "sweep-lower"},
    {ExperimentKind::blowup, "blowup"},
    {ExperimentKind::cancellation, "cancellation"},
    {ExperimentKind::check_dini, "check-dini"},
    {ExperimentKind::check_geometry, "check-geometry"},
    {ExperimentKind::apply_operator, "apply-operator"},
};

double parse_number(const std::string& raw, double s) {
    const std::string text = boost::algorithm::trim_copy(raw);
    if (text == "s") return s;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not a number: '" + text + "'");
    }
    if (used != text.size()) throw InvalidInput("not a number: '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
    std::vector<double> out;
    for (const std::string& p : parts)
        if (!boost::algorithm::trim_copy(p).empty()) out.push_back(parse_number(p, 0.0));
    return out;
}

}  // namespace

ExperimentKind parse_kind(const std::string& name) {
    for (const KindName& k : kKinds)
        if (name == k.name) return k.kind;
    throw InvalidInput("unknown experiment kind '" + name + "'");
}

std::string kind_name(ExperimentKind kind) {
    for (const KindName& k : kKinds)
        if (k.kind == kind) return k.name;
    return "unknown";
}

std::vector<double> decade_grid(double first, double last, double step) {
    if (!(step > 0.0) || !(last >= first) || first < 0.0) throw InvalidInput("decade grid needs 0 <= first <= last, step > 0");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((last - first) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(-std::expm1(-(first + i * step) * std::log(10.0)));
    return out;
}

std::vector<double> default_grid() { return decade_grid(0.0, 4.0, 0.5); }

void ExperimentConfig::validate() const {
    if (id.empty()) throw InvalidInput("experiment id is empty");
    if (d < 1 || d > kMaxDim) throw DimensionError("d must be 1, 2 or 3");
    if (s_list.empty()) throw InvalidInput("s list is empty");
    if (!(s0 >= 0.0 && s0 < 1.0)) throw InvalidInput("s0 must lie in [0, 1)");
    for (double s : s_list)
        if (!(s > 0.0 && s < 1.0 && s >= s0)) throw InvalidInput("every s must lie in [s0, 1) and be positive");
    for (double t : grid)
        if (!(std::abs(t) < 1.0)) throw DomainError("grid points t e1 must lie in the open unit ball");
    quadrature.validate();
    if (!(tol > 0.0)) throw InvalidInput("tol must be positive");
    if (!(depth > 0.0)) throw InvalidInput("paraboloid depth must be positive");
    if (boundary_points < 1 || samples < 1) throw InvalidInput("geometry sampling sizes must be positive");
    static const char* expectations[] = {"", "convergent", "divergent", "holds", "violated"};
    if (std::find(std::begin(expectations), std::end(expectations), expect) == std::end(expectations))
        throw InvalidInput("unknown expectation '" + expect + "'");
    if (variant != "plain" && variant != "two_s") throw InvalidInput("variant must be plain or two_s");
}

// ptree::get with a default swallows conversion failures; a present but
// malformed value must be an error instead.
template <class T>
T read(const boost::property_tree::ptree& tree, const std::string& path, T fallback) {
    const auto raw = tree.get_optional<std::string>(path);
    if (!raw) return fallback;
    try {
        return tree.get<T>(path);
    } catch (const boost::property_tree::ptree_bad_data&) {
        throw InvalidInput(path + ": cannot read '" + *raw + "'");
    }
}

ExperimentConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    if (auto k = tree.get_optional<std::string>("experiment.kind")) c = default_config(parse_kind(*k));
    c.id = tree.get("experiment.id", c.id);
    c.d = read(tree, "experiment.d", c.d);
    if (auto s = tree.get_optional<std::string>("experiment.s")) c.s_list = parse_list(*s);
    c.s0 = read(tree, "experiment.s0", c.s0);
    c.modulus = tree.get("experiment.modulus", c.modulus);
    c.datum = tree.get("experiment.datum", c.datum);
    c.expect = tree.get("experiment.expect", c.expect);
    c.variant = tree.get("experiment.variant", c.variant);

    if (auto t = tree.get_optional<std::string>("grid.t")) {
        c.grid = parse_list(*t);
    } else if (tree.get_child_optional("grid")) {
        c.grid = decade_grid(read(tree, "grid.k_first", 0.0), read(tree, "grid.k_last", 4.0), read(tree, "grid.k_step", 0.5));
    }

    c.quadrature.rel_tol = read(tree, "quadrature.rel_tol", c.quadrature.rel_tol);
    c.quadrature.abs_tol = read(tree, "quadrature.abs_tol", c.quadrature.abs_tol);
    c.quadrature.max_subdivisions = read(tree, "quadrature.max_subdivisions", c.quadrature.max_subdivisions);
    c.quadrature.split_factor = read(tree, "quadrature.split_factor", c.quadrature.split_factor);

    c.out_dir = tree.get("output.dir", c.out_dir);
    c.prefix = tree.get("output.prefix", c.prefix);

    c.seed = read(tree, "run.seed", c.seed);
    c.tol = read(tree, "run.tol", c.tol);
    c.serial = read(tree, "run.serial", c.serial);

    c.domain = tree.get("geometry.domain", c.domain);
    c.depth = read(tree, "geometry.depth", c.depth);
    c.boundary_points = read(tree, "geometry.boundary_points", c.boundary_points);
    c.samples = read(tree, "geometry.samples", c.samples);
    c.cusp_beta = read(tree, "geometry.cusp_beta", c.cusp_beta);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file '" + path + "'");
    try {
        return parse_config(in);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.id = kind_name(kind);
    switch (kind) {
        case ExperimentKind::solve:
        case ExperimentKind::sweep_upper:
            break;
        case ExperimentKind::sweep_lower:
            c.s_list = {0.3, 0.5, 0.7};
            break;
        case ExperimentKind::blowup:
            c.datum = "cex14";
            c.modulus = "log_inverse:1";
            c.grid = decade_grid(1.0, 4.0, 1.0);
            c.expect = "divergent";
            break;
        case ExperimentKind::cancellation:
            c.d = 2;
            c.datum = "ex43";
            break;
        case ExperimentKind::check_dini:
            c.modulus = "log_inverse:2";
            c.expect = "convergent";
            break;
        case ExperimentKind::check_geometry:
            c.d = 2;
            c.modulus = "power:1";
            c.expect = "holds";
            break;
        case ExperimentKind::apply_operator:
            c.grid = {0.0, 0.5};
            c.tol = 1e-3;
            break;
    }
    return c;
}

namespace {

// "kind=power alpha=0.5", "kind=power_log s=0.5 p=1",
// "kind=table points=[[0,0],[1,0.3]]".
ModulusFunction parse_keyword_modulus(const std::string& text, double s) {
    std::vector<std::string> tokens;
    boost::algorithm::split(tokens, text, boost::algorithm::is_space(), boost::algorithm::token_compress_on);
    std::map<std::string, std::string> kv;
    for (const std::string& tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw InvalidInput("modulus token '" + tok + "' is not key=value");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw InvalidInput("modulus '" + text + "' lacks " + key);
        return parse_number(it->second, s);
    };
    const std::string kind = kv["kind"];
    if (kind == "zero") return ModulusFunction::zero();
    if (kind == "power") return ModulusFunction::power(need("alpha"));
    if (kind == "log_inverse") return ModulusFunction::log_inverse(need("p"));
    if (kind == "power_log") return ModulusFunction::power_log(need("s"), need("p"));
    if (kind == "table") {
        const auto it = kv.find("points");
        if (it == kv.end()) throw InvalidInput("table modulus lacks points");
        const nlohmann::json pts = nlohmann::json::parse(it->second, nullptr, false);
        if (pts.is_discarded() || !pts.is_array()) throw InvalidInput("table points must be a JSON array of pairs");
        std::vector<std::pair<double, double>> table;
        for (const auto& p : pts) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw InvalidInput("table points must be [t, value] pairs");
            table.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        return ModulusFunction::table(std::move(table));
    }
    throw InvalidInput("unknown modulus kind '" + kind + "'");
}

}  // namespace

ModulusFunction parse_modulus(const std::string& raw, double s) {
    const std::string text = boost::algorithm::trim_copy(raw);
    if (text.rfind("kind=", 0) == 0) return parse_keyword_modulus(text, s);
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto args = [&](std::size_t n) {
        std::vector<std::string> parts;
        boost::algorithm::split(parts, rest, boost::algorithm::is_any_of(":"));
        if (rest.empty() || parts.size() != n) throw InvalidInput("modulus '" + text + "' needs " + std::to_string(n) + " argument(s)");
        std::vector<double> v;
        for (const std::string& p : parts) v.push_back(parse_number(p, s));
        return v;
    };
    if (head == "zero") return ModulusFunction::zero();
    if (head == "power") return ModulusFunction::power(args(1)[0]);
    if (head == "log_inverse") return ModulusFunction::log_inverse(args(1)[0]);
    if (head == "power_log") {
        const auto v = args(2);
        return ModulusFunction::power_log(v[0], v[1]);
    }
    if (head == "times_power") {
        const auto sep = rest.find(':');
        if (sep == std::string::npos) throw InvalidInput("times_power needs an exponent and an inner modulus");
        return ModulusFunction::times_power(parse_number(rest.substr(0, sep), s), parse_modulus(rest.substr(sep + 1), s));
    }
    if (head == "table") {
        std::vector<std::string> pts;
        boost::algorithm::split(pts, rest, boost::algorithm::is_any_of(";"));
        std::vector<std::pair<double, double>> table;
        for (const std::string& p : pts) {
            const auto slash = p.find('/');
            if (slash == std::string::npos) throw InvalidInput("table points are written t/v");
            table.emplace_back(parse_number(p.substr(0, slash), s), parse_number(p.substr(slash + 1), s));
        }
        return ModulusFunction::table(std::move(table));
    }
    throw InvalidInput("unknown modulus '" + text + "'");
}

ExteriorDatum make_datum(const ExperimentConfig& c, double s) {
    const std::string text = boost::algorithm::trim_copy(c.datum);
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "prop42") {
        if (c.d != 1) throw DimensionError("prop42 is a one-dimensional datum");
        return datum_prop42(parse_modulus(c.modulus, s));
    }
    if (head == "thm15") return datum_thm15(parse_modulus(c.modulus, s), c.d);
    if (head == "cex14") return datum_cex14(parse_modulus(c.modulus, s), s, c.d);
    if (head == "ex43") return datum_ex43(s, c.d);
    if (head == "constant") return datum_constant(arg.empty() ? 1.0 : parse_number(arg, s), c.d);
    if (head == "indicator") return datum_radial_indicator(arg.empty() ? 0.5 : parse_number(arg, s), c.d);
    throw InvalidInput("unknown datum '" + text + "'");
}

}  // namespace fraclab::lab
