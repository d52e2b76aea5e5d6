#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgnp/kg_store.hpp"

namespace kgnp {

/// Two Gaussian clusters over the cardiovascular layout: negatives around
/// healthy readings, positives around elevated ones. `separation` scales the
/// gap between the cluster means (1: well apart, 0: identical clusters).
/// Labels are drawn with even odds; ids run from `first_id`.
std::string synthetic_cardio_csv(std::size_t count, std::uint64_t seed, double separation = 1.0,
                                 std::size_t first_id = 1);
std::vector<MTuple> synthetic_cardio(std::size_t count, std::uint64_t seed, double separation = 1.0,
                                     std::size_t first_id = 1);

}  // namespace kgnp
