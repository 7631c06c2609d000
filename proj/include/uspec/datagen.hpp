#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "uspec/core.hpp"

namespace uspec {

/// Two-dimensional benchmark families with fixed class counts.
///
///  two_bananas         2  interleaved half-annuli (radius 1, arc pi, vertical offset 0.4)
///  smiling_face        4  face outline, two eyes, mouth arc
///  concentric_circles  3  radii 1, 2, 3, radial jitter
///  circles_gaussians  11  rings of radius 1 and 2 next to a 3x3 grid of blobs
///  flower             13  central disk ringed by 12 petal blobs
///
/// The geometries are stand-ins drawn to resemble the usual scatter plots of
/// these benchmarks; only the class counts and separability matter.
enum class Family { two_bananas, smiling_face, concentric_circles, circles_gaussians, flower };

struct SyntheticSpec {
    Family family = Family::two_bananas;
    std::size_t n = 1000;
    /// Standard deviation of the Gaussian jitter; negative selects the family default.
    double noise = -1.0;
    std::uint64_t seed = 0;
};

std::size_t class_count(Family f);
double default_noise(Family f);
std::string to_string(Family f);
Family parse_family(const std::string& name);

/// Points are split across classes as evenly as possible (the first n mod C
/// classes get one extra) and emitted class by class.
std::pair<Dataset, Labeling> generate(const SyntheticSpec& spec);

/// Distance from `point` to the noise-free structure of class `c`
/// (curve, arc, disk or blob center). Used for separability checks.
double distance_to_structure(Family f, std::size_t c, double x, double y);

}  // namespace uspec
