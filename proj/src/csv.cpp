#include "wsdecay/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace wsdecay {

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& metadata,
                     const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path.string());
    for (const auto& [key, value] : metadata) out_ << "# " << key << " = " << value << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw std::runtime_error("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw std::runtime_error("CsvWriter: write failure on close");
}

} // namespace wsdecay
