#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace ddbh {

/// Fixed %.17g formatting so that identical doubles give identical bytes.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(int v);
    CsvWriter& operator<<(long v);
    CsvWriter& operator<<(const std::string& v);
    CsvWriter& operator<<(const char* v) { return *this << std::string(v); }
    void end_row();
    void close();

    const std::string& path() const { return path_; }

private:
    void sep();

    std::string path_;
    std::ofstream out_;
    size_t columns_;
    size_t in_row_ = 0;
};

namespace schema {
extern const std::vector<std::string> phase_diagram;
extern const std::vector<std::string> response;
extern const std::vector<std::string> equilibrium;
/// k_index, k_1..k_d, branch_label, ...
std::vector<std::string> spectrum(int d);
}  // namespace schema

}  // namespace ddbh
