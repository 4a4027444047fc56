#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace wsdecay {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// CSV emitter: '#'-prefixed comment block with the resolved parameter set,
/// a mandatory header row, then data rows. All numbers are written with
/// shortest round-trip formatting so reruns are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path,
              const std::vector<std::pair<std::string, std::string>>& metadata,
              const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::size_t n_columns_;
};

} // namespace wsdecay
