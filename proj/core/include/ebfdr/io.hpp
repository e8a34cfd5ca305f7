#pragma once

// File formats used by the command-line tool: value lists (CSV or raw
// little-endian doubles), the fitted-model JSON, and CSV output helpers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ebfdr/binning.hpp"
#include "ebfdr/mixture_fit.hpp"

namespace ebfdr {

enum class ValueFormat { Csv, F64le };
ValueFormat parse_value_format(std::string_view text);  // csv | f64le

// CSV: one number per line, LF or CRLF, optional single non-numeric header
// line. Blank lines and '#' comment lines are skipped. Throws IoError naming the offending line.
std::vector<double> parse_csv_values(std::string_view text);
std::vector<double> read_values(const std::string& path, ValueFormat format);
void write_values_f64le(const std::string& path, const std::vector<double>& values);

struct ModelFile {
    static constexpr int kSchemaVersion = 1;

    int schema_version = kSchemaVersion;
    MixtureParams params;
    double loglik = 0.0;
    std::size_t n_iter = 0;
    std::vector<double> bin_edges;
    std::string bin_rule = "sturges";
    std::size_t n_total = 0;
    std::size_t n_pos_inf = 0;
    std::size_t n_neg_inf = 0;
    std::uint64_t seed = 0;

    bool operator==(const ModelFile&) const = default;
};

std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(std::string_view text);
void write_model(const std::string& path, const ModelFile& model);
ModelFile read_model(const std::string& path);

// Shortest decimal text that reads back to the same double; "inf", "-inf", "nan".
std::string format_double(double x);

// Reads a whole file; throws IoError if it cannot be opened.
std::string read_file(const std::string& path);
// Writes text to path, or to stdout when path is "-".
void write_text(const std::string& path, const std::string& text);

// "# ebfdr <version> seed=<seed>" followed by any extra key=value comments.
std::string provenance_header(std::uint64_t seed,
                              const std::vector<std::pair<std::string, std::string>>& extra = {});

std::string_view library_version() noexcept;

}  // namespace ebfdr
