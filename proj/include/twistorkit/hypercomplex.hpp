#pragma once

#include "twistorkit/realquat.hpp"
#include "twistorkit/report.hpp"
#include "twistorkit/twistor_flat.hpp"

namespace twistorkit {

// Twistor input of the inverse construction: the real-structure matrix A, the
// phase-normalized fiber symplectic matrix Omega, and the phase mu that was
// applied to reach it.  H(a,b) = -a^T Omega conj(A) conj(b) is Hermitian
// positive-definite for valid data.
struct TwistorData {
    int n = 1;
    QuaternionicData Q;
    CMat Omega;
    Scalar mu;

    Backend backend() const { return Omega.backend(); }
    int dim() const { return 2 * n; }
};

// Finds the unit phase mu making H Hermitian positive-definite, if any.
std::pair<Scalar, CMat> normalize_symplectic_phase(const CMat& Omega_raw,
                                                   const QuaternionicData& Q,
                                                   double tol = 1e-10);

// Runs the phase normalization and validates every TwistorData invariant.
TwistorData make_twistor_data(const QuaternionicData& Q, const CMat& Omega_raw,
                              double tol = 1e-10);
// Wraps already-normalized data, validating the invariants only.
TwistorData wrap_twistor_data(const QuaternionicData& Q, const CMat& Omega, const Scalar& mu,
                              double tol = 1e-10);

// b = [ i (|alpha|^2-|beta|^2) a - 2 i conj(alpha) beta j(a) ] / (|alpha|^2+|beta|^2)
CVec tangent_cs(const TwistorData& D, const Scalar& alpha, const Scalar& beta, const CVec& a);

Scalar omega_pair(const TwistorData& D, const CVec& u, const CVec& v); // u^T Omega v
Scalar metric(const TwistorData& D, const CVec& a, const CVec& b, double tol = 1e-10);
Scalar psi(const TwistorData& D, const Scalar& zeta, const CVec& a, const CVec& b);

enum class Triple { I, J, K };
Scalar kahler(const TwistorData& D, Triple which, const CVec& a, const CVec& b,
              double tol = 1e-10);

// chart value of the real section with tangent parameter a: a - zeta j(a) on
// U0, zeta a - j(a) on U1
CVec evaluate_real_section(const TwistorData& D, Chart chart, const Scalar& zeta, const CVec& a);

VerifyReport verify_suite(const TwistorData& D, int samples, std::uint64_t seed,
                          double tol = 1e-10);

// Central-difference exterior derivative of the Kahler 2-forms on the flat
// model (float backend): the coefficient functions are constant over the base,
// so the result must vanish.  Returns the max |d omega(X,Y,Z)| over samples.
double finite_difference_closure(const TwistorData& D, int samples, std::uint64_t seed,
                                 double step = 1e-5);

} // namespace twistorkit
