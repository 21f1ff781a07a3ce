#include <doctest.h>

#include <algorithm>
#include <map>

#include "fixtures.hpp"
#include "placekit/sp.hpp"

using namespace placekit;

namespace {

// Quadratic-time reference: coord[i] = max over predecessors in both orders
// of coord[j] + w[j].
std::vector<double> lcs_oracle(const std::vector<int>& order_a,
                               const std::vector<int>& order_b,
                               const std::vector<double>& weights) {
  const int k = static_cast<int>(order_a.size());
  std::vector<int> pos_a(k), pos_b(k);
  for (int i = 0; i < k; ++i) {
    pos_a[order_a[i]] = i;
    pos_b[order_b[i]] = i;
  }
  std::vector<double> coord(k, 0.0);
  // Process in order_a so predecessors are final before use.
  for (int idx = 0; idx < k; ++idx) {
    const int i = order_a[idx];
    double best = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      if (pos_a[j] < pos_a[i] && pos_b[j] < pos_b[i])
        best = std::max(best, coord[j] + weights[j]);
    }
    coord[i] = best;
  }
  return coord;
}

Netlist macros_only(const std::vector<std::pair<double, double>>& sizes,
                    double canvas_extent) {
  std::vector<Module> modules(sizes.size());
  std::vector<Pin> pins;
  std::vector<Net> nets = {{0, {}}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    modules[i].id = static_cast<int>(i);
    modules[i].width = sizes[i].first;
    modules[i].height = sizes[i].second;
    modules[i].kind = ModuleKind::macro;
    pins.push_back({static_cast<int>(i), static_cast<int>(i), 0, 0});
    nets[0].pins.push_back(static_cast<int>(i));
  }
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, canvas_extent, canvas_extent});
  nl.set_initial_coords(std::vector<double>(sizes.size(), 0.0),
                        std::vector<double>(sizes.size(), 0.0));
  return nl;
}

std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("weighted_lcs on a chain and an anti-chain") {
  CHECK(weighted_lcs({0, 1, 2}, {0, 1, 2}, {2, 3, 4}) ==
        std::vector<double>{0, 2, 5});
  CHECK(weighted_lcs({0, 1}, {1, 0}, {5, 9}) == std::vector<double>{0, 0});
}

TEST_CASE("weighted_lcs matches the quadratic oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 6;
    const std::vector<int> a = random_permutation(k, rng);
    const std::vector<int> b = random_permutation(k, rng);
    std::vector<double> w(k);
    for (double& x : w) x = rng.uniform(0.5, 4.0);
    CHECK(weighted_lcs(a, b, w) == lcs_oracle(a, b, w));
  }
}

TEST_CASE("decode_sp single macro lands at the origin") {
  const Netlist nl = macros_only({{3, 4}}, 10);
  const SpDecode d = decode_sp(SpGenotype{{0}, {0}}, nl);
  CHECK(d.placement.x[0] == 0.0);
  CHECK(d.placement.y[0] == 0.0);
  CHECK(d.in_canvas);
}

TEST_CASE("decode_sp two macros pack left to right") {
  const Netlist nl = macros_only({{3, 2}, {2, 2}}, 10);
  const SpDecode d = decode_sp(SpGenotype{{0, 1}, {0, 1}}, nl);
  CHECK(d.placement.x[0] == 0.0);
  CHECK(d.placement.x[1] == 3.0);
  CHECK(d.placement.y[0] == 0.0);
  CHECK(d.placement.y[1] == 0.0);
}

TEST_CASE("decode_sp satisfies relations for all k=3 genotypes") {
  const Netlist nl = macros_only({{3, 2}, {2, 4}, {4, 3}}, 100);
  const auto perms = all_permutations(3);
  int checked = 0;
  for (const auto& plus : perms) {
    for (const auto& minus : perms) {
      const SpGenotype g{plus, minus};
      const SpDecode d = decode_sp(g, nl);
      ++checked;
      CHECK(overlap_area(d.placement, nl.macro_ids()) == 0.0);

      std::vector<int> pos_p(3), pos_m(3);
      for (int i = 0; i < 3; ++i) {
        pos_p[plus[i]] = i;
        pos_m[minus[i]] = i;
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          const double xi = d.placement.x[i], xj = d.placement.x[j];
          const double yi = d.placement.y[i], yj = d.placement.y[j];
          if (pos_p[i] < pos_p[j] && pos_m[i] < pos_m[j])
            CHECK(xi + nl.module(i).width <= xj);
          if (pos_p[i] > pos_p[j] && pos_m[i] < pos_m[j])
            CHECK(yi + nl.module(i).height <= yj);
        }
      }

      // Exact match against the quadratic oracle on both axes.
      const std::vector<double> wx = {3, 2, 4}, wy = {2, 4, 3};
      const std::vector<double> ox = lcs_oracle(plus, minus, wx);
      std::vector<int> rev = plus;
      std::reverse(rev.begin(), rev.end());
      const std::vector<double> oy = lcs_oracle(rev, minus, wy);
      for (int i = 0; i < 3; ++i) {
        CHECK(d.placement.x[i] == ox[i]);
        CHECK(d.placement.y[i] == oy[i]);
      }
    }
  }
  CHECK(checked == 36);
}

TEST_CASE("decode_sp x-coordinates are tight") {
  Rng rng(31);
  const Netlist nl = macros_only({{3, 2}, {2, 4}, {4, 3}, {2, 2}, {5, 1}}, 100);
  for (int trial = 0; trial < 25; ++trial) {
    const SpGenotype g = random_sp(5, rng);
    const SpDecode d = decode_sp(g, nl);
    std::vector<int> pos_p(5), pos_m(5);
    for (int i = 0; i < 5; ++i) {
      pos_p[g.pi_plus[i]] = i;
      pos_m[g.pi_minus[i]] = i;
    }
    for (int i = 0; i < 5; ++i) {
      if (d.placement.x[i] == 0.0) continue;
      bool abuts = false;
      for (int j = 0; j < 5 && !abuts; ++j) {
        if (j == i) continue;
        const bool left_of = pos_p[j] < pos_p[i] && pos_m[j] < pos_m[i];
        if (left_of &&
            d.placement.x[j] + nl.module(j).width == d.placement.x[i])
          abuts = true;
      }
      CHECK(abuts);
    }
  }
}

TEST_CASE("decode_sp equivariant under macro relabeling") {
  Rng rng(41);
  const std::vector<std::pair<double, double>> sizes = {
      {3, 2}, {2, 4}, {4, 3}, {2, 2}};
  const Netlist nl = macros_only(sizes, 100);
  for (int trial = 0; trial < 10; ++trial) {
    const SpGenotype g = random_sp(4, rng);
    const SpDecode base = decode_sp(g, nl);

    // Relabel macros by sigma; sizes move with the labels.
    const std::vector<int> sigma = random_permutation(4, rng);
    std::vector<std::pair<double, double>> relabeled(4);
    for (int i = 0; i < 4; ++i) relabeled[sigma[i]] = sizes[i];
    const Netlist nl2 = macros_only(relabeled, 100);
    SpGenotype g2 = g;
    for (int i = 0; i < 4; ++i) {
      g2.pi_plus[i] = sigma[g.pi_plus[i]];
      g2.pi_minus[i] = sigma[g.pi_minus[i]];
    }
    const SpDecode mapped = decode_sp(g2, nl2);
    for (int i = 0; i < 4; ++i) {
      CHECK(mapped.placement.x[sigma[i]] == base.placement.x[i]);
      CHECK(mapped.placement.y[sigma[i]] == base.placement.y[i]);
    }
  }
}

TEST_CASE("decode_sp reversal flips x-extent order") {
  const Netlist nl = macros_only({{3, 2}, {2, 4}, {4, 3}}, 100);
  const auto perms = all_permutations(3);
  for (const auto& plus : perms) {
    for (const auto& minus : perms) {
      const SpDecode fwd = decode_sp(SpGenotype{plus, minus}, nl);
      std::vector<int> rp = plus, rm = minus;
      std::reverse(rp.begin(), rp.end());
      std::reverse(rm.begin(), rm.end());
      const SpDecode rev = decode_sp(SpGenotype{rp, rm}, nl);
      // Left-of pairs swap roles: compare module center orderings.
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          const bool left_fwd =
              fwd.placement.x[i] + nl.module(i).width <= fwd.placement.x[j];
          std::vector<int> pos_p(3), pos_m(3);
          for (int t = 0; t < 3; ++t) {
            pos_p[plus[t]] = t;
            pos_m[minus[t]] = t;
          }
          if (pos_p[i] < pos_p[j] && pos_m[i] < pos_m[j]) {
            CHECK(left_fwd);
            // Reversed genotype puts j left of i.
            CHECK(rev.placement.x[j] + nl.module(j).width <=
                  rev.placement.x[i]);
          }
        }
      }
    }
  }
}

TEST_CASE("decode_sp flags packings exceeding the canvas") {
  const Netlist nl = macros_only({{6, 6}, {6, 6}}, 10);
  const SpDecode d = decode_sp(SpGenotype{{0, 1}, {0, 1}}, nl);
  CHECK_FALSE(d.in_canvas);
  CHECK(d.exceed_area == doctest::Approx(12.0 * 6.0 - 10.0 * 6.0));
}

TEST_CASE("random_sp determinism and uniformity") {
  const SpGenotype a = random_sp(5, 1);
  const SpGenotype b = random_sp(5, 1);
  CHECK(a.pi_plus == b.pi_plus);
  CHECK(a.pi_minus == b.pi_minus);
  CHECK(random_sp(1, 9).pi_plus == std::vector<int>{0});

  // Chi-square over the 120 permutations of pi_plus, 10^4 samples.
  Rng rng(77);
  std::map<std::vector<int>, int> counts;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) counts[random_sp(5, rng).pi_plus]++;
  const double expected = samples / 120.0;
  double chi2 = 0.0;
  for (const auto& perm : all_permutations(5)) {
    const double diff = counts[perm] - expected;
    chi2 += diff * diff / expected;
  }
  // 119 degrees of freedom: mean 119, sd ~15.4; 5 sigma ~196.
  CHECK(chi2 < 196.0);
}
