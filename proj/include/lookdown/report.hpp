#pragma once

#include <cstdint>
#include <string>

namespace lookdown {

// Monte Carlo point estimate with a normal-approximation interval.
struct EstimateWithCI {
    double estimate = 0.0;
    double se = 0.0;
    long long reps = 0;
    int horizon = 0;
    std::uint64_t seed = 0;
    double z = 3.89;  // two-sided 1e-4

    double half_width() const { return z * se; }
    double lower() const { return estimate - half_width(); }
    double upper() const { return estimate + half_width(); }
};

struct TestReport {
    std::string test;
    std::string kind;  // "exact", "chi-square", "CI"
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    bool exact_equal = false;
    double alpha = 0.01;
    bool reject = false;

    std::string decision() const { return reject ? "reject" : "accept"; }
};

}  // namespace lookdown
