#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "lookdown/rational.hpp"

namespace lookdown {

// Doubles are printed with full round-trip precision; rationals as exact p/q.
inline std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    CsvWriter& cell(const std::string& s) {
        if (!first_) os_ << ',';
        os_ << s;
        first_ = false;
        return *this;
    }
    CsvWriter& cell(const char* s) { return cell(std::string(s)); }
    CsvWriter& cell(double x) { return cell(csv_double(x)); }
    CsvWriter& cell(int x) { return cell(std::to_string(x)); }
    CsvWriter& cell(long long x) { return cell(std::to_string(x)); }
    CsvWriter& cell(const Rational& r) { return cell(to_string(r)); }

    void end_row() {
        os_ << '\n';
        first_ = true;
    }

    template <class... Cells>
    void row(Cells&&... cells) {
        (cell(std::forward<Cells>(cells)), ...);
        end_row();
    }

private:
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace lookdown
