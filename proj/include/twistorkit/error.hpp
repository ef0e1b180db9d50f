#pragma once

#include <stdexcept>
#include <string>

namespace twistorkit {

enum class Errc {
    backend_mismatch,
    backend_error,
    eval_at_pole,
    not_unit_on_cstar,
    degree_bound_unstable,
    scan_window_exhausted,
    inconsistent_winding,
    not_invertible_on_chart,
    not_quaternionic,
    odd_dimension,
    dimension_mismatch,
    singular_matrix,
    no_admissible_phase,
    zero_parameter,
    not_real,
    not_constant,
    invalid_section,
    not_regular,
    schema_error,
    usage_error,
    internal_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& msg)
        : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

} // namespace twistorkit
