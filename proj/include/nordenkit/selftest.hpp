#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nordenkit/sampler.hpp"

namespace nk {

struct SelftestCase {
    Parity parity;
    int n;
};

std::string case_name(const SelftestCase& c);

struct SelftestOptions {
    std::vector<SelftestCase> cases = {{Parity::Even, 2}, {Parity::Even, 3}, {Parity::Odd, 2}, {Parity::Odd, 3}};
    int samples = 100;       // random admissible F and targeted samples per case
    int structures = 4;      // random structures shared by the samples of a case
    int lie_models = 10;     // random Lie models per case
    int oracle_inputs = 10;  // oracle comparisons per even case
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    /// Canonical torsion of the even case from (N, N_hat). Replaced by test fixtures.
    std::function<Tensor3(const Tensor3&, const Tensor3&)> even_canonical_torsion = canonical_torsion_even;
};

struct CheckStat {
    std::string group;  // case name
    std::string name;
    double tolerance = 0.0;
    int count = 0;
    int failures = 0;
    double max_residual = 0.0;

    void record(double residual);
    void record(bool ok);
    bool passed() const { return failures == 0; }
};

struct SelftestReport {
    std::vector<CheckStat> checks;
    bool passed() const;
    const CheckStat* find(const std::string& group, const std::string& name) const;
};

SelftestReport run_selftest(const SelftestOptions& opt);

}  // namespace nk
