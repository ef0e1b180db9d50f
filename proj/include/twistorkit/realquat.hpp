#pragma once

#include "twistorkit/bundle.hpp"
#include "twistorkit/linalg.hpp"

namespace twistorkit {

// Coefficient pair (a, b) of the section z0 -> a + b z0 of the rank-2n sum of
// degree-one line bundles.
struct SectionAB {
    int n = 1;
    CVec a, b;

    Backend backend() const { return a.empty() ? Backend::exact : a[0].backend(); }
    int dim() const { return 2 * n; } // fiber dimension
};

// Matrix A of a real structure on the bundle; equivalently the quaternionic
// structure j(x) = conj(A) conj(x) on the space of twisted sections.
class QuaternionicData {
public:
    int n() const { return n_; }
    const CMat& A() const { return A_; }
    Backend backend() const { return A_.backend(); }

    friend QuaternionicData check_quaternionic(const CMat& A, double tol);

private:
    QuaternionicData(int n, CMat A) : n_(n), A_(std::move(A)) {}
    int n_;
    CMat A_;
};

// Validates A * conj(A) = -I (exactly on the exact backend, within a Frobenius
// tolerance on the float backend) and wraps the matrix.
QuaternionicData check_quaternionic(const CMat& A, double tol = 1e-12);

CVec apply_j(const QuaternionicData& Q, const CVec& x);
SectionAB induced_r(const QuaternionicData& Q, const SectionAB& s);
SectionAB twist_section(const QuaternionicData& Q, const SectionAB& s);
SectionAB conj_section(const SectionAB& s);
QuaternionicData change_trivialization(const QuaternionicData& Q, const CMat& P);
bool is_real_section(const QuaternionicData& Q, const SectionAB& s);

// chart representation of the bundle-level map compatible with the antipodal
// map: (z0, x0) -> (-z0, -A x0) into the V1 chart and (z1, x1) -> (-z1, A x1)
// into the V0 chart
struct RealBundleMap {
    int n = 1;
    CMat fiber_u0_to_v1; // -A
    CMat fiber_u1_to_v0; // A
};

RealBundleMap bundle_map(const QuaternionicData& Q);
// re-extracts A after verifying both chart maps agree on the overlap
QuaternionicData extract_quaternionic(const RealBundleMap& f, SplitMix64& rng, int samples = 8);

// conversions against the bundle model (transition z0 * Id)
GlobalSection section_ab_to_global(const SectionAB& s);
SectionAB global_to_section_ab(const GlobalSection& g);

SectionAB section_ab_zero(int n, Backend bk = Backend::exact);
SectionAB section_ab_add(const SectionAB& x, const SectionAB& y);
SectionAB section_ab_scale(const Scalar& c, const SectionAB& s);
SectionAB random_section_ab(int n, SplitMix64& rng, Backend bk = Backend::exact);

// real rank of the real-linear map (a, b) -> b + j(a); the fixed-point set of
// induced_r has real dimension 8n minus this rank
int real_fixed_set_rank(const QuaternionicData& Q);

} // namespace twistorkit
