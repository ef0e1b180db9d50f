#pragma once

#include <json.hpp>

#include "twistorkit/deformation.hpp"
#include "twistorkit/hypercomplex.hpp"

namespace twistorkit {

using json = nlohmann::json;

inline constexpr const char* kSchemaTag = "twistorkit/1";

// scalars: exact values encode re/im as decimal-free rational strings "p/q";
// float values encode as JSON numbers
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, Backend bk);

json poly_to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const json& j, Backend bk);

json lmatrix_to_json(const LaurentMatrix& m);
LaurentMatrix lmatrix_from_json(const json& j, Backend bk);

json cmatrix_to_json(const CMat& m);
CMat cmatrix_from_json(const json& j, Backend bk);

json cvec_to_json(const CVec& v);
CVec cvec_from_json(const json& j, Backend bk);

json bundle_to_json(const BundleCP1& E);
BundleCP1 bundle_from_json(const json& j, Backend bk);

json section_ab_to_json(const SectionAB& s);
SectionAB section_ab_from_json(const json& j, Backend bk);

json twistor_data_to_json(const TwistorData& D, const CMat& Omega_raw, const FlatHK& hk);
TwistorData twistor_data_from_json(const json& j, Backend bk);

json family_to_json(const BundleFamily& F);
BundleFamily family_from_json(const json& j, Backend bk);

json report_to_json(const VerifyReport& rep);

// "1/2+3/4i", "i", "-2i", "1.5" (float backend) and similar literals
Scalar parse_complex_literal(const std::string& text, Backend bk);

json load_json_file(const std::string& path);
void require_schema(const json& j, const char* kind);

} // namespace twistorkit
