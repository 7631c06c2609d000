#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace uspec {

/// Entry point of the `uspec` tool. Subcommands: cluster, gen, eval, bench.
/// Returns 0 on success, 1 on a runtime error, 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Seed of repeat r of a `--runs` loop. Run 0 keeps the master seed.
std::uint64_t run_seed(std::uint64_t master, std::size_t r);

struct SweepSpec {
    std::string param;
    double start = 0.0;
    double step = 0.0;
    double end = 0.0;
};

/// Parses "param=start:step:end" (or "param=value" for a single point).
SweepSpec parse_sweep(const std::string& text);

}  // namespace uspec
