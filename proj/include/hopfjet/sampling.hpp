#pragma once

// Deterministic point sets in C^n: a Halton sequence with a seeded
// Cranley-Patterson rotation, pushed to the sphere through Box-Muller.

#include <hopfjet/jet.hpp>

#include <cstdint>
#include <vector>

namespace hopfjet {

std::vector<CVector> sphere_points(int n, std::size_t count, double radius, std::uint64_t seed);
std::vector<CVector> ball_points(int n, std::size_t count, double radius, std::uint64_t seed);
/// Volume-uniform points with r_inner <= |z| <= r_outer.
std::vector<CVector> annulus_points(int n, std::size_t count, double r_inner, double r_outer,
                                    std::uint64_t seed);

}  // namespace hopfjet
