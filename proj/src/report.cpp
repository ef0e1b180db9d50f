#include "twistorkit/report.hpp"

#include <algorithm>

namespace twistorkit {

bool VerifyReport::pass() const {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return true;
}

double VerifyReport::maxResidual() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.residual);
    return m;
}

const CheckResult* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void VerifyReport::add(const std::string& name, double residual, const std::string& note) {
    checks.push_back({name, residual, residual <= tolerance, note});
}

void VerifyReport::addFlag(const std::string& name, bool ok, const std::string& note) {
    checks.push_back({name, ok ? 0.0 : 1.0, ok, note});
}

void VerifyReport::merge(const VerifyReport& other, const std::string& prefix) {
    for (const auto& c : other.checks)
        checks.push_back({prefix + c.name, c.residual, c.ok, c.note});
}

} // namespace twistorkit
