#pragma once

#include <array>

#include "twistorkit/linalg.hpp"
#include "twistorkit/realquat.hpp"
#include "twistorkit/report.hpp"

namespace twistorkit {

enum class Chart { U0, U1 };

const char* chart_name(Chart c);

// Flat model: complexified tangent frame (dw^1 .. dw^{2n}, conj dw^1 .. conj
// dw^{2n}); the three complex structures and the Euclidean metric as constant
// 4n x 4n matrices.  Consecutive coordinate pairs (w^{2k-1}, w^{2k}) carry
// independent copies of the two-dimensional model.
struct FlatHK {
    int n = 1;
    CMat I, J, K, g;

    Backend backend() const { return I.backend(); }
    int dim() const { return 4 * n; } // complexified frame size
};

FlatHK standard_flat(int n, Backend b = Backend::exact);

// omega_1 = g(I.,.), omega_2 = g(J.,.), omega_3 = g(K.,.) in the same frame
struct OmegaFamily {
    CMat W1, W2, W3;
};

OmegaFamily omega_family(const FlatHK& hk);

// Point of a total space fibered over the projective line: a chart, the chart
// coordinate, and the fiber value (bundle coordinates z or flat coordinates w).
struct TwistorPoint {
    Chart chart = Chart::U0;
    Scalar zeta;
    CVec fiber;
};

// stereographic sphere weights (a, b, c) of the chart coordinate
std::array<Scalar, 3> stereo_abc(Chart chart, const Scalar& zeta);

// a I + b J + c K with the stereographic weights of the chart coordinate
CMat structure_at(const FlatHK& hk, Chart chart, const Scalar& zeta);

// The twisted symplectic pencil evaluated at a chart coordinate.  Relative to
// the stereographic family used by structure_at the middle term carries a
// minus sign, which is what makes omega_at(zeta) a (2,0)-form for the fiber
// structure at the same zeta (see README notes on conventions).
CMat omega_at(const FlatHK& hk, Chart chart, const Scalar& zeta);

// fiberwise real-linear bundle map onto the flat twistor space and back
TwistorPoint phi_forward(int n, const TwistorPoint& pt);
TwistorPoint phi_inverse(int n, const TwistorPoint& pt);

// complexified Jacobian of the fiber map of phi_forward, frame (z, conj z) ->
// (w, conj w)
CMat phi_fiber_jacobian(int n, Chart chart, const Scalar& zeta, Backend b);

// max-abs entry of S(zeta) Jac - Jac diag(i..,-i..); zero when phi intertwines
// the fiber structures
double intertwine_residual(const FlatHK& hk, Chart chart, const Scalar& zeta);

// the real structure acting on bundle points (chart swap, zeta -> -conj(zeta),
// fiber by the conjugate-linear matrix map of Q); the int overload uses the
// flat model's quaternionic structure
TwistorPoint tau_apply(const QuaternionicData& Q, const TwistorPoint& pt);
TwistorPoint tau_apply(int n, const TwistorPoint& pt);

// section z0 -> (z0, x - i z0 conj(y), y + i z0 conj(x)) blockwise per pair
SectionAB real_section_from_point(const CVec& x, const CVec& y);

// A = blockdiag([[0,-i],[i,0]]); the quaternionic structure induced by tau
QuaternionicData quaternionic_from_tau(int n, Backend b = Backend::exact);

// evaluates the pencil on constant twisted sections pushed through the fiber
// identification and returns the zeta-independent skew matrix (NotConstant
// when samples disagree); exact backend uses the deterministic sample set
CMat restrict_omega(const FlatHK& hk, double tol = 1e-12);

// derivative of tau on the vertical spaces in the trivialization shifted by a
// section; returns the extracted matrix A, which for the linear total space is
// constant across sections and sample points
CMat extract_section_real_structure(const QuaternionicData& Q, const SectionAB& s,
                                    const std::vector<Scalar>& zetas);
CMat extract_section_real_structure(int n, const SectionAB& s, const std::vector<Scalar>& zetas);

// deterministic chart sample set: 0, 1, -1, i, -i, 2, 1+i plus seeded extras
std::vector<Scalar> deterministic_zetas(Backend b, int count = 12,
                                        std::uint64_t seed = kDefaultSeed);

// invariant battery over deterministic and seeded sample points: structure
// squares, sphere weights, pencil type and chart law, intertwining, fiber map
// round trips and well-definedness, tau involution, restricted-pencil
// constancy
VerifyReport twistor_flat_battery(int n, Backend bk, int samples = 20,
                                  std::uint64_t seed = kDefaultSeed, double tol = 1e-10);

} // namespace twistorkit
