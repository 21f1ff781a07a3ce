#include <algorithm>
#include <cmath>

#include "placekit/optim.hpp"

namespace placekit {

SpGenotype inversion(const SpGenotype& g, Rng& rng) {
  SpGenotype out = g;
  std::vector<int>& perm =
      rng.uniform_index(2) == 0 ? out.pi_plus : out.pi_minus;
  const int k = static_cast<int>(perm.size());
  if (k < 2) return out;
  int a = static_cast<int>(rng.uniform_index(k));
  int b = static_cast<int>(rng.uniform_index(k));
  if (a > b) std::swap(a, b);
  std::reverse(perm.begin() + a, perm.begin() + b + 1);
  return out;
}

BoxVector shuffle_pairs(const BoxVector& coords, int m, Rng& rng) {
  const int k = static_cast<int>(coords.size() / 2);
  if (m <= 0) m = std::max(2, static_cast<int>(std::ceil(0.1 * k)));
  m = std::min(m, k);
  if (m < 2 || k < 2) return coords;

  // m distinct macros via a partial Fisher-Yates.
  std::vector<int> pool(k);
  for (int i = 0; i < k; ++i) pool[i] = i;
  for (int i = 0; i < m; ++i)
    std::swap(pool[i], pool[i + rng.uniform_index(k - i)]);
  pool.resize(m);

  BoxVector out = coords;
  // Cyclic shift: macro pool[i] receives the pair of pool[i+1].
  for (int i = 0; i < m; ++i) {
    const int dst = pool[i], src = pool[(i + 1) % m];
    out[2 * dst] = coords[2 * src];
    out[2 * dst + 1] = coords[2 * src + 1];
  }
  return out;
}

BoxVector random_reset(const BoxVector& v, const SpaceDesc& space, Rng& rng) {
  BoxVector out = v;
  const std::size_t i = rng.uniform_index(v.size());
  out[i] = rng.uniform(space.lo[i], space.hi[i]);
  return out;
}

Genotype mutate(const Genotype& g, const Problem& problem, Rng& rng) {
  switch (problem.mutation) {
    case MutationKind::inversion:
      return inversion(std::get<SpGenotype>(g), rng);
    case MutationKind::shuffle_pairs:
      return shuffle_pairs(std::get<BoxVector>(g), problem.shuffle_m, rng);
    case MutationKind::random_reset:
      return random_reset(std::get<BoxVector>(g), problem.space, rng);
  }
  return g;
}

namespace {

std::vector<int> ox_single(const std::vector<int>& a, const std::vector<int>& b,
                           int from, int to) {
  const int k = static_cast<int>(a.size());
  std::vector<int> child(k, -1);
  std::vector<char> taken(k, 0);
  for (int i = from; i <= to; ++i) {
    child[i] = a[i];
    taken[a[i]] = 1;
  }
  int write = (to + 1) % k;
  for (int i = 0; i < k; ++i) {
    const int v = b[(to + 1 + i) % k];
    if (taken[v]) continue;
    child[write] = v;
    write = (write + 1) % k;
  }
  return child;
}

}  // namespace

SpGenotype order_crossover(const SpGenotype& a, const SpGenotype& b, Rng& rng) {
  const int k = a.size();
  SpGenotype child;
  if (k < 2) return a;
  for (int which = 0; which < 2; ++which) {
    int from = static_cast<int>(rng.uniform_index(k));
    int to = static_cast<int>(rng.uniform_index(k));
    if (from > to) std::swap(from, to);
    const auto& pa = which == 0 ? a.pi_plus : a.pi_minus;
    const auto& pb = which == 0 ? b.pi_plus : b.pi_minus;
    (which == 0 ? child.pi_plus : child.pi_minus) =
        ox_single(pa, pb, from, to);
  }
  return child;
}

BoxVector uniform_crossover(const BoxVector& a, const BoxVector& b, Rng& rng) {
  BoxVector child(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    child[i] = rng.uniform_index(2) == 0 ? a[i] : b[i];
  return child;
}

bool sa_accept(double delta, double temperature, Rng& rng) {
  if (delta <= 0.0) return true;
  if (temperature <= 0.0) return false;
  return rng.uniform01() < std::exp(-delta / temperature);
}

double sa_temperature(long evaluations) {
  return 100.0 * std::pow(0.99, static_cast<double>(evaluations / 100));
}

}  // namespace placekit
