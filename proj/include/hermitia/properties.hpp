#pragma once

// Seeded property runs over random finite-dimensional forms. Each function
// returns the worst residual found over `instances` independent draws.

#include <cstdint>

#include "hermitia/sampling.hpp"

namespace hermitia {

/// Hermitian form of the given dimension and rank; indefinite when `signs`
/// is true.
Matrix random_form(Rng& rng, Index dim, Index rank, bool signs);

/// Random map f: V -> W with f(Ker bV) in Ker bW.
Matrix random_adjointable(Rng& rng, const Matrix& g_v, const Matrix& g_w);

struct PropertyResult {
  double worst = 0;
  std::size_t failures = 0;  // instances with a discrete (dimension/containment) failure
};

/// max |bV(f^dagger x, y) - bW(x, f y)| relative to the sizes involved.
PropertyResult adjoint_identity_property(std::size_t instances, std::uint64_t seed);
/// Two adjoints differ by a map into Ker bV; torsor and codimension counts agree.
PropertyResult torsor_property(std::size_t instances, std::uint64_t seed);
/// f^dagger is adjointable and f^dagger^dagger - f lands in Ker bW.
PropertyResult double_adjoint_property(std::size_t instances, std::uint64_t seed);
/// S + S^perp = V, S cap S^perp = S cap Ker b, Ker b in S^perp.
PropertyResult complement_property(std::size_t instances, std::uint64_t seed);
/// The quotient form does not depend on the complement lift.
PropertyResult quotient_lift_property(std::size_t instances, std::uint64_t seed);
/// q = sum_quotient_form(b1, b2) is semipositive with Ker b1, Ker b2 in Ker q.
PropertyResult kernel_containment_property(std::size_t instances, std::uint64_t seed);
/// The purge quotient map is a Hermitian morphism onto the purged form.
PropertyResult purge_property(std::size_t instances, std::uint64_t seed);

}  // namespace hermitia
