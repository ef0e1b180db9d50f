#pragma once

#include <optional>
#include <vector>

#include "twistorkit/laurent.hpp"
#include "twistorkit/linalg.hpp"

namespace twistorkit {

// Holomorphic vector bundle on the projective line given by its transition
// matrix.  Convention: a point (z0, x0) in the U0 chart equals (z1, x1) in the
// U1 chart iff z0*z1 = 1 and x0 = T(z0) * x1.
class BundleCP1 {
public:
    BundleCP1(int rank, LaurentMatrix transition);

    int rank() const { return rank_; }
    Backend backend() const { return T_.backend(); }
    const LaurentMatrix& transition() const { return T_; }
    int winding() const { return winding_; }

private:
    int rank_;
    LaurentMatrix T_;
    int winding_;
};

// Global holomorphic section: polynomial representatives on the two charts,
// p in the U0 coordinate and q in the U1 coordinate, glued by p(z) = T(z) q(1/z).
struct GlobalSection {
    std::vector<LaurentPoly> p;
    std::vector<LaurentPoly> q;

    bool operator==(const GlobalSection& o) const { return p == o.p && q == o.q; }
};

struct SplittingType {
    std::vector<int> degrees; // non-increasing

    int sum() const;
    bool operator==(const SplittingType& o) const { return degrees == o.degrees; }
    std::string str() const;
};

struct SectionSpace {
    int dimension = 0;
    std::vector<GlobalSection> basis;
};

BundleCP1 line_sum(const std::vector<int>& degrees, Backend b = Backend::exact);
BundleCP1 twist(const BundleCP1& E, int m);

// Solves the coefficient-matching linear system for p (deg <= D) and q
// (deg <= D); D defaults to rank*span + |winding| + 2 and the result is
// validated by recomputing at D+1.
SectionSpace section_space(const BundleCP1& E, std::optional<int> degree_bound = std::nullopt);

// Dimension-only variant used by the splitting scan.  Starts from a small
// degree bound and escalates until three consecutive bounds agree (capped at
// the default bound above), so the plateau evidence matches section_space.
int h0(const BundleCP1& E);

SplittingType splitting_type(const BundleCP1& E,
                             std::optional<int> scan_window = std::nullopt);
int h1(const BundleCP1& E);

// Chart changes of trivialization: P0 polynomial in the U0 coordinate with a
// constant nonzero determinant, P1 likewise in the U1 coordinate; the result
// has transition P0(z)^{-1} T(z) P1(1/z).
BundleCP1 gauge_transform(const BundleCP1& E, const LaurentMatrix& P0, const LaurentMatrix& P1);

// true iff p(z) - T(z) q(1/z) vanishes identically
bool section_is_compatible(const BundleCP1& E, const GlobalSection& s);

GlobalSection section_zero(const BundleCP1& E);
GlobalSection section_add(const GlobalSection& a, const GlobalSection& b);
GlobalSection section_scale(const Scalar& c, const GlobalSection& s);

} // namespace twistorkit
