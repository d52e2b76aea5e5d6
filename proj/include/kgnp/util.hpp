#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace kgnp {

using Rng = std::mt19937_64;

// The standard distributions are implementation-defined; these are not, so
// seeded runs are reproducible across toolchains.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);
double uniform_real(Rng& rng, double lo, double hi);

/// First `k` entries of a seeded partial Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

/// Shortest text that parses back to the same double.
std::string format_number(double value);
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char delimiter);
std::string lowercase(std::string_view text);

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace kgnp
