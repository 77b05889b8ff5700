#ifndef RMERTON_CSV_HPP
#define RMERTON_CSV_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace rmerton {

// Shortest round-trip decimal form via std::to_chars; locale-free, so files
// are byte-stable across runs and machines with the same binary.
std::string format_number(double v);

// Comma-separated writer. Metadata lines start with '#' and precede the
// header row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& metadata,
              const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);

    static std::string cell(double v) { return format_number(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::uint64_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }

private:
    std::ofstream out_;
};

}  // namespace rmerton

#endif  // RMERTON_CSV_HPP
