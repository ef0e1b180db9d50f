#pragma once

#include <string>
#include <vector>

namespace twistorkit {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    bool ok = true;
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    double tolerance = 0.0;

    bool pass() const;
    double maxResidual() const;
    const CheckResult* find(const std::string& name) const;
    void add(const std::string& name, double residual, const std::string& note = "");
    void addFlag(const std::string& name, bool ok, const std::string& note = "");
    void merge(const VerifyReport& other, const std::string& prefix = "");
};

} // namespace twistorkit
