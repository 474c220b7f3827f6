#pragma once

// Instance files, generators, result records and SVG plots. Needs the single
// header json.hpp (nlohmann) on the include path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "plurality/decision.hpp"
#include "plurality/geometry.hpp"

namespace plurality::io {

class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Format { Csv, Json };

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Decimal or hex-float; the whole field must be consumed.
inline double parse_real(const std::string& field, std::size_t line) {
    const std::string t = trim(field);
    if (t.empty()) throw FormatError("line " + std::to_string(line) + ": empty value");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    // underflow to a subnormal is fine; overflow shows up as infinity
    if (end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw FormatError("line " + std::to_string(line) + ": not a finite real: '" + t + "'");
    }
    return v;
}

inline std::string format_real(double v, bool hex) {
    char buf[64];
    std::snprintf(buf, sizeof buf, hex ? "%a" : "%.17g", v);
    return buf;
}

}  // namespace detail

/// CSV: a `dim=<d>` header, then one voter per line. Blank lines and lines
/// starting with '#' are skipped.
inline VoterSet parse_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> dim;
    std::vector<Point> voters;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!dim) {
            if (t.rfind("dim=", 0) != 0) throw FormatError("line " + std::to_string(lineno) + ": expected dim=<d>");
            const std::string num = detail::trim(t.substr(4));
            char* end = nullptr;
            const long d = std::strtol(num.c_str(), &end, 10);
            if (num.empty() || end != num.c_str() + num.size() || d < 1) {
                throw FormatError("line " + std::to_string(lineno) + ": bad dimension '" + num + "'");
            }
            dim = static_cast<std::size_t>(d);
            continue;
        }
        std::vector<double> c;
        std::stringstream row(t);
        std::string field;
        while (std::getline(row, field, ',')) c.push_back(detail::parse_real(field, lineno));
        if (c.size() != *dim) {
            throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(*dim) +
                              " values, got " + std::to_string(c.size()));
        }
        voters.emplace_back(std::move(c));
    }
    if (!dim) throw FormatError("missing dim=<d> header");
    if (voters.empty()) throw FormatError("instance has no voters");
    return VoterSet(*dim, std::move(voters));
}

/// JSON: {"dim": d, "voters": [[...], ...]}.
inline VoterSet parse_json(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("voters")) {
        throw FormatError("JSON instance needs \"dim\" and \"voters\"");
    }
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) throw FormatError("\"dim\" must be a positive integer");
    const auto dim = j["dim"].get<std::size_t>();
    if (!j["voters"].is_array() || j["voters"].empty()) throw FormatError("\"voters\" must be a nonempty array");
    std::vector<Point> voters;
    for (std::size_t i = 0; i < j["voters"].size(); ++i) {
        const auto& row = j["voters"][i];
        if (!row.is_array() || row.size() != dim) {
            throw FormatError("voter " + std::to_string(i) + ": expected " + std::to_string(dim) + " values");
        }
        std::vector<double> c;
        for (const auto& x : row) {
            if (!x.is_number()) throw FormatError("voter " + std::to_string(i) + ": non-numeric value");
            c.push_back(x.get<double>());
        }
        voters.emplace_back(std::move(c));
    }
    return VoterSet(dim, std::move(voters));
}

inline VoterSet parse_instance(std::istream& in, Format f) { return f == Format::Json ? parse_json(in) : parse_csv(in); }

/// Format by extension; for other names (and stdin) by the first non-blank byte.
inline VoterSet parse_instance_text(const std::string& text, std::string_view name = {}) {
    Format f = Format::Csv;
    if (name.ends_with(".json")) {
        f = Format::Json;
    } else if (!name.ends_with(".csv")) {
        const auto b = text.find_first_not_of(" \t\r\n");
        if (b != std::string::npos && text[b] == '{') f = Format::Json;
    }
    std::istringstream in(text);
    return parse_instance(in, f);
}

/// Reads a file, or stdin for "-".
inline std::string read_all(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(f), {});
}

inline VoterSet load_instance(const std::string& path) { return parse_instance_text(read_all(path), path); }

/// Writes to a file, or stdout for "-".
inline void write_all(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot write '" + path + "'");
    f << text;
}

/// %.17g round-trips every double; hex output is there for readers that want it explicit.
inline std::string to_csv(const VoterSet& voters, bool hex = false) {
    std::string out = "dim=" + std::to_string(voters.dim()) + "\n";
    for (const auto& v : voters) {
        for (std::size_t k = 0; k < v.dim(); ++k) {
            if (k) out += ',';
            out += detail::format_real(v[k], hex);
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const VoterSet& voters) {
    nlohmann::json j;
    j["dim"] = voters.dim();
    j["voters"] = nlohmann::json::array();
    for (const auto& v : voters) j["voters"].push_back(std::vector<double>(v.coords().begin(), v.coords().end()));
    return j.dump() + "\n";
}

inline std::string format_instance(const VoterSet& voters, std::string_view path) {
    return path.ends_with(".json") ? to_json(voters) : to_csv(voters);
}

/// "x,y[,z...]" into a point.
inline Point parse_point(const std::string& text) {
    std::vector<double> c;
    std::stringstream row(text);
    std::string field;
    while (std::getline(row, field, ',')) c.push_back(detail::parse_real(field, 0));
    if (c.empty()) throw FormatError("empty point");
    return Point(std::move(c));
}

// ---------------------------------------------------------------------------
// Generators

enum class Kind { Equilateral, RandomUniform, RandomGaussian, Collinear };

inline Kind parse_kind(const std::string& s) {
    static const std::map<std::string, Kind> kinds{{"equilateral", Kind::Equilateral},
                                                   {"random-uniform", Kind::RandomUniform},
                                                   {"random-gaussian", Kind::RandomGaussian},
                                                   {"collinear", Kind::Collinear}};
    const auto it = kinds.find(s);
    if (it == kinds.end()) throw std::invalid_argument("unknown instance kind '" + s + "'");
    return it->second;
}

namespace detail {

/// Portable variates on top of mt19937_64, whose output sequence is fixed by the standard.
struct Variates {
    std::mt19937_64 rng;
    explicit Variates(std::uint64_t seed) : rng(seed) {}
    double uniform() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
    double gaussian() {
        double u = uniform();
        while (u == 0.0) u = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
    }
};

}  // namespace detail

/// Equilateral ignores n and d: it is the side-2 triangle {(0,0), (2,0), (1, sqrt 3)}.
/// Uniform draws from [0,1)^d, Gaussian from N(0, I), collinear spreads n
/// uniform positions along a random line through a random point.
inline VoterSet generate(Kind kind, std::size_t n, std::size_t d, std::uint64_t seed) {
    if (kind == Kind::Equilateral) return VoterSet(2, {Point{0.0, 0.0}, Point{2.0, 0.0}, Point{1.0, std::sqrt(3.0)}});
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (d < 1) throw std::invalid_argument("d must be at least 1");
    detail::Variates rv(seed);
    std::vector<Point> voters;
    voters.reserve(n);
    if (kind == Kind::Collinear) {
        std::vector<double> base(d), dir(d);
        double len = 0.0;
        while (len == 0.0) {
            for (auto& x : dir) x = rv.gaussian();
            len = norm(dir);
        }
        for (auto& x : base) x = rv.uniform();
        for (auto& x : dir) x /= len;
        for (std::size_t i = 0; i < n; ++i) voters.push_back(offset(Point(base), dir, 2.0 * rv.uniform() - 1.0));
        return VoterSet(d, std::move(voters));
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(d);
        for (auto& x : c) x = kind == Kind::RandomUniform ? rv.uniform() : rv.gaussian();
        voters.emplace_back(std::move(c));
    }
    return VoterSet(d, std::move(voters));
}

// ---------------------------------------------------------------------------
// Results

struct ResultParams {
    double eps = 0.1;
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

struct ResultRecord {
    std::string method;  // median | planar | approx | oracle | eval
    Point point;
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    double runtime_ms = 0.0;
    ResultParams params;
};

inline nlohmann::json to_json(const ResultRecord& r) {
    nlohmann::json j;
    j["method"] = r.method;
    j["point"] = std::vector<double>(r.point.coords().begin(), r.point.coords().end());
    j["beta_lo"] = r.beta_lo;
    j["beta_hi"] = r.beta_hi;
    j["runtime_ms"] = r.runtime_ms;
    j["params"] = {{"eps", r.params.eps}, {"tol", r.params.tol}, {"seed", r.params.seed}};
    return j;
}

inline std::string to_json_line(const ResultRecord& r) { return to_json(r).dump() + "\n"; }

/// Strict reader: every field present with the right type.
inline ResultRecord parse_result(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    auto need = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
        if (!obj.is_object() || !obj.contains(key)) throw FormatError(std::string("result record lacks \"") + key + "\"");
        return obj.at(key);
    };
    ResultRecord r;
    const auto& method = need(j, "method");
    if (!method.is_string()) throw FormatError("\"method\" must be a string");
    r.method = method.get<std::string>();
    static const std::vector<std::string> methods{"median", "planar", "approx", "oracle", "eval"};
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) throw FormatError("unknown method");
    const auto& pt = need(j, "point");
    if (!pt.is_array() || pt.empty()) throw FormatError("\"point\" must be a nonempty array");
    std::vector<double> c;
    for (const auto& x : pt) {
        if (!x.is_number()) throw FormatError("\"point\" holds a non-number");
        c.push_back(x.get<double>());
    }
    r.point = Point(std::move(c));
    for (const char* key : {"beta_lo", "beta_hi", "runtime_ms"}) {
        if (!need(j, key).is_number()) throw FormatError(std::string("\"") + key + "\" must be a number");
    }
    r.beta_lo = j["beta_lo"].get<double>();
    r.beta_hi = j["beta_hi"].get<double>();
    r.runtime_ms = j["runtime_ms"].get<double>();
    const auto& params = need(j, "params");
    if (!need(params, "eps").is_number() || !need(params, "tol").is_number() || !need(params, "seed").is_number_unsigned()) {
        throw FormatError("\"params\" needs numeric eps, tol and an unsigned seed");
    }
    r.params = {params["eps"].get<double>(), params["tol"].get<double>(), params["seed"].get<std::uint64_t>()};
    if (!(r.beta_lo <= r.beta_hi) || r.runtime_ms < 0.0) throw FormatError("result record violates beta_lo <= beta_hi or runtime >= 0");
    return r;
}

// ---------------------------------------------------------------------------
// SVG

/// Standalone SVG 1.1: voters as dots, p as a cross, and the circle of radius
/// beta |pv| around every voter. The y axis points up.
inline std::string render_svg(const VoterSet& voters, const Point& p, double beta) {
    if (voters.dim() != 2) throw DimensionError("plots need planar instances");
    require_dim(voters, p);
    require_beta(beta);
    double x0 = p.x(), x1 = p.x(), y0 = p.y(), y1 = p.y();
    for (const auto& v : voters) {
        const double r = beta * distance(p, v);
        x0 = std::min(x0, v.x() - r);
        x1 = std::max(x1, v.x() + r);
        y0 = std::min(y0, v.y() - r);
        y1 = std::max(y1, v.y() + r);
    }
    double extent = std::max(x1 - x0, y1 - y0);
    if (extent == 0.0) extent = 1.0;
    const double margin = 0.05 * extent;
    const double unit = extent / 100.0;  // stroke and marker size
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
        return std::string(buf);
    };
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(x0 - margin) << ' '
      << num(-y1 - margin) << ' ' << num(x1 - x0 + 2 * margin) << ' ' << num(y1 - y0 + 2 * margin) << "\">\n";
    s << "<g fill=\"none\" stroke=\"#4a7ab5\" stroke-width=\"" << num(0.3 * unit) << "\">\n";
    for (const auto& v : voters) {
        s << "<circle cx=\"" << num(v.x()) << "\" cy=\"" << num(-v.y()) << "\" r=\"" << num(beta * distance(p, v))
          << "\"/>\n";
    }
    s << "</g>\n<g fill=\"#222222\">\n";
    for (const auto& v : voters) {
        s << "<circle cx=\"" << num(v.x()) << "\" cy=\"" << num(-v.y()) << "\" r=\"" << num(0.8 * unit) << "\"/>\n";
    }
    const double c = 1.5 * unit;
    s << "</g>\n<g stroke=\"#c0392b\" stroke-width=\"" << num(0.4 * unit) << "\">\n"
      << "<line x1=\"" << num(p.x() - c) << "\" y1=\"" << num(-p.y() - c) << "\" x2=\"" << num(p.x() + c) << "\" y2=\""
      << num(-p.y() + c) << "\"/>\n"
      << "<line x1=\"" << num(p.x() - c) << "\" y1=\"" << num(-p.y() + c) << "\" x2=\"" << num(p.x() + c) << "\" y2=\""
      << num(-p.y() - c) << "\"/>\n"
      << "</g>\n</svg>\n";
    return s.str();
}

}  // namespace plurality::io
