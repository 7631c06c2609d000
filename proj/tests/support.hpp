#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "uspec/core.hpp"

namespace test {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("uspec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline uspec::Dataset gaussian_mixture(std::size_t n, std::size_t dim, std::size_t components, double spread,
                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::normal_distribution<double> g(0.0, spread);
    std::vector<double> centers(components * dim);
    for (auto& c : centers) c = u(rng);
    std::vector<double> v(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) v[i * dim + j] = centers[(i % components) * dim + j] + g(rng);
    return uspec::Dataset(n, dim, std::move(v));
}

inline uspec::Dataset uniform_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n * dim);
    for (auto& x : v) x = u(rng);
    return uspec::Dataset(n, dim, std::move(v));
}

}  // namespace test
