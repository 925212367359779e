#include "diracsol/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "diracsol/errors.hpp"

namespace diracsol {

namespace fs = std::filesystem;

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ordered_json json_number(double x)
{
    return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

std::string sha256_hex(std::string const& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("SHA-256 digest failed");
    }
    std::ostringstream s;
    for (unsigned int i = 0; i < len; ++i) {
        s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return s.str();
}

CsvWriter::CsvWriter(fs::path const& path, std::vector<std::string> const& header)
    : out_(path)
    , columns_(header.size())
{
    if (!out_) {
        throw ValidationError("cannot write " + path.string());
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values)
{
    std::size_t i = 0;
    for (double v : values) {
        out_ << (i++ ? "," : "") << format_double(v);
    }
    out_ << '\n';
}

void write_json(fs::path const& path, ordered_json const& j)
{
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

GoldenResult golden_files(fs::path const& out_dir, fs::path const& golden_dir, std::vector<std::string> const& files,
                          bool seed)
{
    GoldenResult r;
    auto slurp = [](fs::path const& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    if (seed) {
        fs::create_directories(golden_dir);
    }
    for (auto const& f : files) {
        fs::path produced = out_dir / f;
        fs::path golden   = golden_dir / f;
        if (seed) {
            fs::copy_file(produced, golden, fs::copy_options::overwrite_existing);
            r.matched.push_back(f);
        } else if (!fs::exists(golden)) {
            r.missing.push_back(f);
        } else if (slurp(produced) == slurp(golden)) {
            r.matched.push_back(f);
        } else {
            r.mismatched.push_back(f);
        }
    }
    return r;
}

} // namespace diracsol
