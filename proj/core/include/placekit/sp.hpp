#pragma once

#include <cstdint>
#include <vector>

#include "placekit/metrics.hpp"
#include "placekit/netlist.hpp"
#include "placekit/rng.hpp"

namespace placekit {

// A pair of permutations of the macro indices 0..k-1. Together they encode
// the pairwise left-of / below relations among macros.
struct SpGenotype {
  std::vector<int> pi_plus;
  std::vector<int> pi_minus;

  int size() const { return static_cast<int>(pi_plus.size()); }
  bool valid() const;
};

SpGenotype random_sp(int k, std::uint64_t seed);
SpGenotype random_sp(int k, Rng& rng);

// coordinate[i] = weight of the heaviest common subsequence of the elements
// strictly preceding i in both orders. O(k log k) via a prefix-max tree.
std::vector<double> weighted_lcs(const std::vector<int>& order_a,
                                 const std::vector<int>& order_b,
                                 const std::vector<double>& weights);

struct SpDecode {
  Placement placement;
  bool in_canvas = true;
  double exceed_area = 0.0;  // packed-bbox area lying outside the canvas
};

// Longest-path packing anchored at the canvas origin: x from
// weighted_lcs(pi+, pi-, widths), y from weighted_lcs(reverse(pi+), pi-,
// heights). The result is overlap-free and coordinate-tight; standard cells
// are left untouched.
SpDecode decode_sp(const SpGenotype& genotype, const Netlist& netlist);

}  // namespace placekit
