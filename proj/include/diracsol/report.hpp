#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace diracsol {

using ordered_json = nlohmann::ordered_json;

/// 17 significant digits; "nan"/"inf" for non-finite values.
std::string format_double(double x);

/// JSON number, or null when x is not finite.
ordered_json json_number(double x);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string const& data);

/// Streams rows of doubles to a CSV file with a fixed header.
class CsvWriter
{
  private:
    std::ofstream out_;
    std::size_t columns_;

  public:
    CsvWriter(std::filesystem::path const& path, std::vector<std::string> const& header);

    void row(std::initializer_list<double> values);
};

/// Pretty-printed with a trailing newline.
void write_json(std::filesystem::path const& path, ordered_json const& j);

struct GoldenResult
{
    std::vector<std::string> matched;
    std::vector<std::string> mismatched;
    std::vector<std::string> missing;

    bool ok() const
    {
        return mismatched.empty();
    }
};

/// With seed: copy each output file into golden_dir. Otherwise compare each
/// output byte-for-byte with its golden copy where one exists.
GoldenResult golden_files(std::filesystem::path const& out_dir, std::filesystem::path const& golden_dir,
                          std::vector<std::string> const& files, bool seed);

} // namespace diracsol
