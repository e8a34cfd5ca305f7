#include "ebfdr/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ebfdr/error.hpp"

namespace ebfdr {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view s) {
    if (s == "inf" || s == "+inf" || s == "Inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

ValueFormat parse_value_format(std::string_view text) {
    if (text == "csv") return ValueFormat::Csv;
    if (text == "f64le") return ValueFormat::F64le;
    throw DomainError("unknown value format '" + std::string(text) + "' (expected csv|f64le)");
}

std::vector<double> parse_csv_values(std::string_view text) {
    std::vector<double> out;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto v = parse_number(line);
        if (!v) {
            // a single leading header line is allowed
            if (!seen_content) {
                seen_content = true;
                continue;
            }
            throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(line) + "' as a number");
        }
        seen_content = true;
        out.push_back(*v);
    }
    if (out.empty()) throw IoError("no values found");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<double> read_values(const std::string& path, ValueFormat format) {
    const std::string data = read_file(path);
    if (data.empty()) throw IoError("'" + path + "' is empty");
    if (format == ValueFormat::Csv) {
        try {
            return parse_csv_values(data);
        } catch (const IoError& e) {
            throw IoError(path + ": " + e.what());
        }
    }
    if (data.size() % 8 != 0) {
        throw IoError("'" + path + "' size " + std::to_string(data.size()) + " is not a multiple of 8");
    }
    std::vector<double> out(data.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(data[i * 8 + b]);
        out[i] = std::bit_cast<double>(bits);
    }
    return out;
}

void write_values_f64le(const std::string& path, const std::vector<double>& values) {
    std::string data(values.size() * 8, '\0');
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
        for (int b = 0; b < 8; ++b) {
            data[i * 8 + b] = static_cast<char>(bits & 0xffu);
            bits >>= 8;
        }
    }
    write_text(path, data);
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

// JSON has no infinities, so edges are stored as strings when infinite.
nlohmann::ordered_json edge_json(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

double edge_value(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto v = parse_number(j.get<std::string>());
        if (v) return *v;
    }
    throw IoError("model: bad bin edge " + j.dump());
}

}  // namespace

std::string model_to_json(const ModelFile& m) {
    nlohmann::ordered_json j;
    j["schema_version"] = m.schema_version;
    j["params"] = {{"pi0", m.params.pi0}, {"mu0", m.params.mu0}, {"var0", m.params.var0},
                   {"mu1", m.params.mu1}, {"var1", m.params.var1}};
    j["loglik"] = m.loglik;
    j["n_iter"] = m.n_iter;
    j["bin_edges"] = nlohmann::ordered_json::array();
    for (double e : m.bin_edges) j["bin_edges"].push_back(edge_json(e));
    j["bin_rule"] = m.bin_rule;
    j["n_total"] = m.n_total;
    j["n_pos_inf"] = m.n_pos_inf;
    j["n_neg_inf"] = m.n_neg_inf;
    j["seed"] = m.seed;
    return j.dump(2) + "\n";
}

ModelFile model_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("model: invalid JSON: ") + e.what());
    }
    ModelFile m;
    try {
        m.schema_version = j.at("schema_version").get<int>();
        if (m.schema_version != ModelFile::kSchemaVersion) {
            throw IoError("model: unsupported schema_version " + std::to_string(m.schema_version));
        }
        const auto& p = j.at("params");
        m.params = {p.at("pi0").get<double>(), p.at("mu0").get<double>(), p.at("var0").get<double>(),
                    p.at("mu1").get<double>(), p.at("var1").get<double>()};
        m.loglik = j.at("loglik").is_null() ? -std::numeric_limits<double>::infinity()
                                            : j.at("loglik").get<double>();
        m.n_iter = j.at("n_iter").get<std::size_t>();
        for (const auto& e : j.at("bin_edges")) m.bin_edges.push_back(edge_value(e));
        m.bin_rule = j.at("bin_rule").get<std::string>();
        m.n_total = j.at("n_total").get<std::size_t>();
        m.n_pos_inf = j.at("n_pos_inf").get<std::size_t>();
        m.n_neg_inf = j.at("n_neg_inf").get<std::size_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("model: ") + e.what());
    }
    try {
        m.params.validate(0.0);
    } catch (const DomainError& e) {
        throw IoError(std::string("model: ") + e.what());
    }
    return m;
}

void write_model(const std::string& path, const ModelFile& model) { write_text(path, model_to_json(model)); }

ModelFile read_model(const std::string& path) {
    try {
        return model_from_json(read_file(path));
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::string_view library_version() noexcept { return "0.1.0"; }

std::string provenance_header(std::uint64_t seed, const std::vector<std::pair<std::string, std::string>>& extra) {
    std::string s = "# ebfdr " + std::string(library_version()) + " seed=" + std::to_string(seed) + "\n";
    for (const auto& [k, v] : extra) s += "# " + k + "=" + v + "\n";
    return s;
}

}  // namespace ebfdr
