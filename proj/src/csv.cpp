#include "ddbh/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ddbh {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::sep() {
    if (in_row_ == columns_) throw std::logic_error("too many columns in row of " + path_);
    if (in_row_++) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double v) {
    sep();
    out_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::operator<<(long v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
    sep();
    out_ << v;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) throw std::logic_error("short row in " + path_);
    out_ << '\n';
    in_row_ = 0;
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + path_);
}

namespace schema {

const std::vector<std::string> phase_diagram{"Omega", "J", "n0", "abs_psi0", "omega0", "purity", "entropy", "phase"};
const std::vector<std::string> response{"k_index", "omega", "ReG", "ImG", "A",
                                        "absT2", "absR2", "absF2", "sumrule_violation"};
const std::vector<std::string> equilibrium{"k", "omega_G_closed_form", "omega_G_numeric", "c_s"};

std::vector<std::string> spectrum(int d) {
    std::vector<std::string> h{"k_index"};
    for (int a = 1; a <= d; ++a) h.push_back("k_" + std::to_string(a));
    for (const char* c : {"branch_label", "Re_omega", "Im_omega", "N_re", "N_im", "U_re", "U_im", "V_re", "V_im", "C"})
        h.push_back(c);
    return h;
}

}  // namespace schema

}  // namespace ddbh
