#include "uspec/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uspec/rng.hpp"

namespace uspec {

namespace {

constexpr double kPi = std::numbers::pi;

struct Point {
    double x, y;
};

double norm(double x, double y) { return std::hypot(x, y); }

// Distance to the arc of the circle (cx, cy, r) spanning angles [a0, a1].
double arc_distance(double x, double y, double cx, double cy, double r, double a0, double a1) {
    double t = std::atan2(y - cy, x - cx);
    while (t < a0) t += 2 * kPi;
    if (t <= a1) return std::abs(norm(x - cx, y - cy) - r);
    const double e0 = norm(x - (cx + r * std::cos(a0)), y - (cy + r * std::sin(a0)));
    const double e1 = norm(x - (cx + r * std::cos(a1)), y - (cy + r * std::sin(a1)));
    return std::min(e0, e1);
}

double disk_distance(double x, double y, double cx, double cy, double r) {
    return std::max(0.0, norm(x - cx, y - cy) - r);
}

double segment_distance(double x, double y, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double t = std::clamp(((x - a.x) * vx + (y - a.y) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
    return norm(x - (a.x + t * vx), y - (a.y + t * vy));
}

// Smiling face.
constexpr Point kEyes[2] = {{-0.35, 0.35}, {0.35, 0.35}};
constexpr Point kMouthCenter = {0.0, 0.05};
constexpr double kMouthRadius = 0.55;
constexpr double kMouthFrom = 1.2 * kPi, kMouthTo = 1.8 * kPi;

// Circles + Gaussians.
Point blob_center(std::size_t b) { return {3.5 + static_cast<double>(b % 3), -1.0 + static_cast<double>(b / 3)}; }

// Flower.
constexpr double kDiskRadius = 0.6;
constexpr double kPetalRing = 2.0;
constexpr double kPetalHalfLength = 0.35;
double petal_angle(std::size_t j) { return 2 * kPi * static_cast<double>(j) / 12.0; }
Point petal_end(std::size_t j, double sign) {
    const double r = kPetalRing + sign * kPetalHalfLength;
    return {r * std::cos(petal_angle(j)), r * std::sin(petal_angle(j))};
}

class Sampler {
public:
    Sampler(std::uint64_t seed, double noise) : rng_(seed), noise_(noise) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double gauss() { return noise_ > 0.0 ? std::normal_distribution<double>(0.0, noise_)(rng_) : 0.0; }

    Point jitter(Point p) {
        const double dx = gauss();
        const double dy = gauss();
        return {p.x + dx, p.y + dy};
    }
    Point on_arc(Point c, double r, double a0, double a1) {
        const double t = uniform(a0, a1);
        return jitter({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    Point in_disk(Point c, double r) {
        const double rad = r * std::sqrt(uniform(0.0, 1.0));
        const double t = uniform(0.0, 2 * kPi);
        return jitter({c.x + rad * std::cos(t), c.y + rad * std::sin(t)});
    }

private:
    Rng rng_;
    double noise_;
};

Point sample(Family f, std::size_t c, Sampler& s) {
    switch (f) {
        case Family::two_bananas:
            if (c == 0) return s.on_arc({0.0, 0.0}, 1.0, 0.0, kPi);
            return s.on_arc({1.0, 0.4}, 1.0, kPi, 2 * kPi);
        case Family::smiling_face:
            if (c == 0) return s.on_arc({0.0, 0.0}, 1.0, 0.0, 2 * kPi);
            if (c <= 2) return s.jitter(kEyes[c - 1]);
            return s.on_arc(kMouthCenter, kMouthRadius, kMouthFrom, kMouthTo);
        case Family::concentric_circles: {
            // Radial jitter only.
            const double t = s.uniform(0.0, 2 * kPi);
            const double r = static_cast<double>(c + 1) + s.gauss();
            return {r * std::cos(t), r * std::sin(t)};
        }
        case Family::circles_gaussians:
            if (c < 2) return s.on_arc({0.0, 0.0}, static_cast<double>(c + 1), 0.0, 2 * kPi);
            return s.jitter(blob_center(c - 2));
        case Family::flower: {
            if (c == 0) return s.in_disk({0.0, 0.0}, kDiskRadius);
            const double a = petal_angle(c - 1);
            const double r = kPetalRing + s.uniform(-kPetalHalfLength, kPetalHalfLength);
            return s.jitter({r * std::cos(a), r * std::sin(a)});
        }
    }
    throw ValueError("unknown family");
}

}  // namespace

std::size_t class_count(Family f) {
    switch (f) {
        case Family::two_bananas: return 2;
        case Family::smiling_face: return 4;
        case Family::concentric_circles: return 3;
        case Family::circles_gaussians: return 11;
        case Family::flower: return 13;
    }
    return 0;
}

double default_noise(Family f) {
    switch (f) {
        case Family::two_bananas: return 0.08;
        case Family::smiling_face: return 0.05;
        case Family::concentric_circles: return 0.1;
        case Family::circles_gaussians: return 0.1;
        case Family::flower: return 0.1;
    }
    return 0.0;
}

std::string to_string(Family f) {
    switch (f) {
        case Family::two_bananas: return "two_bananas";
        case Family::smiling_face: return "smiling_face";
        case Family::concentric_circles: return "concentric_circles";
        case Family::circles_gaussians: return "circles_gaussians";
        case Family::flower: return "flower";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    for (Family f : {Family::two_bananas, Family::smiling_face, Family::concentric_circles, Family::circles_gaussians,
                     Family::flower})
        if (to_string(f) == name) return f;
    throw ValueError("unknown dataset family '" + name + "'");
}

std::pair<Dataset, Labeling> generate(const SyntheticSpec& spec) {
    const std::size_t classes = class_count(spec.family);
    if (spec.n < classes)
        throw ValueError(to_string(spec.family) + " needs n >= " + std::to_string(classes));
    const double noise = spec.noise < 0.0 ? default_noise(spec.family) : spec.noise;
    if (!std::isfinite(noise)) throw ValueError("noise must be finite");

    Sampler sampler(spec.seed, noise);
    std::vector<double> values;
    values.reserve(spec.n * 2);
    std::vector<int> labels;
    labels.reserve(spec.n);
    for (std::size_t c = 0; c < classes; ++c) {
        const std::size_t count = spec.n / classes + (c < spec.n % classes ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            const Point p = sample(spec.family, c, sampler);
            values.push_back(p.x);
            values.push_back(p.y);
            labels.push_back(static_cast<int>(c));
        }
    }
    return {Dataset(spec.n, 2, std::move(values)), Labeling(std::move(labels), static_cast<int>(classes))};
}

double distance_to_structure(Family f, std::size_t c, double x, double y) {
    switch (f) {
        case Family::two_bananas:
            if (c == 0) return arc_distance(x, y, 0.0, 0.0, 1.0, 0.0, kPi);
            return arc_distance(x, y, 1.0, 0.4, 1.0, kPi, 2 * kPi);
        case Family::smiling_face:
            if (c == 0) return std::abs(norm(x, y) - 1.0);
            if (c <= 2) return norm(x - kEyes[c - 1].x, y - kEyes[c - 1].y);
            return arc_distance(x, y, kMouthCenter.x, kMouthCenter.y, kMouthRadius, kMouthFrom, kMouthTo);
        case Family::concentric_circles:
            return std::abs(norm(x, y) - static_cast<double>(c + 1));
        case Family::circles_gaussians:
            if (c < 2) return std::abs(norm(x, y) - static_cast<double>(c + 1));
            return norm(x - blob_center(c - 2).x, y - blob_center(c - 2).y);
        case Family::flower:
            if (c == 0) return disk_distance(x, y, 0.0, 0.0, kDiskRadius);
            return segment_distance(x, y, petal_end(c - 1, -1.0), petal_end(c - 1, 1.0));
    }
    throw ValueError("unknown family");
}

}  // namespace uspec
