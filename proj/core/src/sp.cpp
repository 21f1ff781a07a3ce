#include "placekit/sp.hpp"

#include <algorithm>
#include <cmath>

namespace placekit {

bool SpGenotype::valid() const {
  if (pi_plus.size() != pi_minus.size()) return false;
  const int k = size();
  std::vector<char> seen(k);
  for (const auto* perm : {&pi_plus, &pi_minus}) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int v : *perm) {
      if (v < 0 || v >= k || seen[v]) return false;
      seen[v] = 1;
    }
  }
  return true;
}

SpGenotype random_sp(int k, Rng& rng) {
  SpGenotype g;
  g.pi_plus = random_permutation(k, rng);
  g.pi_minus = random_permutation(k, rng);
  return g;
}

SpGenotype random_sp(int k, std::uint64_t seed) {
  Rng rng(seed);
  return random_sp(k, rng);
}

namespace {

// Fenwick tree over positions, prefix maximum.
class PrefixMax {
 public:
  explicit PrefixMax(int n) : tree_(n + 1, 0.0) {}

  void update(int pos, double value) {
    for (int i = pos + 1; i < static_cast<int>(tree_.size()); i += i & -i)
      tree_[i] = std::max(tree_[i], value);
  }

  // max over positions [0, pos); 0 when empty.
  double query(int pos) const {
    double best = 0.0;
    for (int i = pos; i > 0; i -= i & -i) best = std::max(best, tree_[i]);
    return best;
  }

 private:
  std::vector<double> tree_;
};

}  // namespace

std::vector<double> weighted_lcs(const std::vector<int>& order_a,
                                 const std::vector<int>& order_b,
                                 const std::vector<double>& weights) {
  const int k = static_cast<int>(order_a.size());
  std::vector<int> pos_b(k);
  for (int i = 0; i < k; ++i) pos_b[order_b[i]] = i;

  std::vector<double> coord(k, 0.0);
  PrefixMax tree(k);
  for (int element : order_a) {
    const int p = pos_b[element];
    coord[element] = tree.query(p);
    tree.update(p, coord[element] + weights[element]);
  }
  return coord;
}

SpDecode decode_sp(const SpGenotype& genotype, const Netlist& netlist) {
  const std::vector<int>& macros = netlist.macro_ids();
  const int k = static_cast<int>(macros.size());
  if (!genotype.valid() || genotype.size() != k)
    throw DataError("decode_sp: genotype is not a permutation pair of size " +
                    std::to_string(k));

  std::vector<double> widths(k), heights(k);
  for (int i = 0; i < k; ++i) {
    widths[i] = netlist.module(macros[i]).width;
    heights[i] = netlist.module(macros[i]).height;
  }
  const std::vector<double> xs = weighted_lcs(genotype.pi_plus, genotype.pi_minus, widths);
  std::vector<int> reversed = genotype.pi_plus;
  std::reverse(reversed.begin(), reversed.end());
  const std::vector<double> ys = weighted_lcs(reversed, genotype.pi_minus, heights);

  SpDecode out;
  out.placement = Placement(netlist);
  const Canvas& canvas = netlist.canvas();
  double bbox_w = 0.0, bbox_h = 0.0;
  for (int i = 0; i < k; ++i) {
    out.placement.x[macros[i]] = canvas.x + xs[i];
    out.placement.y[macros[i]] = canvas.y + ys[i];
    bbox_w = std::max(bbox_w, xs[i] + widths[i]);
    bbox_h = std::max(bbox_h, ys[i] + heights[i]);
  }
  if (bbox_w > canvas.width || bbox_h > canvas.height) {
    out.in_canvas = false;
    out.exceed_area = bbox_w * bbox_h - std::min(bbox_w, canvas.width) *
                                            std::min(bbox_h, canvas.height);
  }
  return out;
}

}  // namespace placekit
