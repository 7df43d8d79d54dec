#include "qtc/csv.hpp"

#include "qtc/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <memory>

namespace qtc {

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string column(std::string_view name, std::string_view unit)
{
    return std::string(name) + " [" + std::string(unit) + "]";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size())
{
    if (!out_) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values)
{
    if (values.size() != columns_) {
        throw std::invalid_argument("CsvWriter: row width does not match header");
    }
    line_.clear();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            line_ += ',';
        }
        line_ += format_double(values[i]);
    }
    line_ += '\n';
    out_ << line_;
    if (!out_) {
        throw IoError("write failed: " + path_.string());
    }
}

void CsvWriter::close()
{
    out_.close();
    if (out_.fail()) {
        throw IoError("close failed: " + path_.string());
    }
}

void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& W, std::string_view x_unit,
                      std::string_view p_unit)
{
    std::vector<std::string> header;
    header.push_back("x [" + std::string(x_unit) + "] \\ p [" + std::string(p_unit) + "]");
    for (std::size_t l = 0; l < W.p.m; ++l) {
        header.push_back(format_double(W.p.p(l)));
    }
    CsvWriter out(path, header);
    std::vector<double> row(W.p.m + 1);
    for (std::size_t j = 0; j < W.x.n; ++j) {
        row[0] = W.x.x(j);
        for (std::size_t l = 0; l < W.p.m; ++l) {
            row[l + 1] = W.at(j, l);
        }
        out.row(row);
    }
    out.close();
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw IoError("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> chunk{};
    while (in) {
        in.read(chunk.data(), chunk.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), chunk.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

} // namespace qtc
