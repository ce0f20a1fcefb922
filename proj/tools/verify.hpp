#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cmc::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

/// Suite names in run order: elliptic, dn, omega, flow, involution, rotational,
/// mesh, profile, moduli, classification.
const std::vector<std::string>& suite_names();

/// Runs one suite by name, or all of them for "all". DomainError for unknown names.
/// on_result, if set, is called as each criterion finishes.
std::vector<CriterionResult> run(const std::string& suite = "all",
                                 const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] omega (0.01 s): detail"
std::string format(const CriterionResult& r);

} // namespace cmc::verify
