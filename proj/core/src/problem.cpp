#include "placekit/problem.hpp"

#include <cmath>
#include <cstring>

namespace placekit {

bool SpaceDesc::contains(const std::vector<double>& v) const {
  if (kind != SpaceKind::box || v.size() != lo.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] >= lo[i] && v[i] <= hi[i])) return false;
  return true;
}

SpaceDesc SpaceDesc::permutation(int k) {
  SpaceDesc s;
  s.kind = SpaceKind::permutation_pair;
  s.perm_size = k;
  return s;
}

SpaceDesc SpaceDesc::unit_box(int d) {
  SpaceDesc s;
  s.kind = SpaceKind::box;
  s.lo.assign(d, 0.0);
  s.hi.assign(d, 1.0);
  return s;
}

SpaceDesc SpaceDesc::box_of(std::vector<double> lo, std::vector<double> hi) {
  SpaceDesc s;
  s.kind = SpaceKind::box;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

bool genotype_valid(const SpaceDesc& space, const Genotype& g) {
  if (space.kind == SpaceKind::permutation_pair) {
    const auto* perm = std::get_if<SpGenotype>(&g);
    return perm && perm->size() == space.perm_size && perm->valid();
  }
  const auto* vec = std::get_if<BoxVector>(&g);
  return vec && space.contains(*vec);
}

namespace {

void fnv1a(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
}

}  // namespace

std::string genotype_digest(const Genotype& g) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  if (const auto* perm = std::get_if<SpGenotype>(&g)) {
    fnv1a(h, perm->pi_plus.data(), perm->pi_plus.size() * sizeof(int));
    fnv1a(h, perm->pi_minus.data(), perm->pi_minus.size() * sizeof(int));
  } else {
    const auto& vec = std::get<BoxVector>(g);
    fnv1a(h, vec.data(), vec.size() * sizeof(double));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Genotype random_genotype(const SpaceDesc& space, Rng& rng) {
  if (space.kind == SpaceKind::permutation_pair)
    return random_sp(space.perm_size, rng);
  BoxVector v(space.lo.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = rng.uniform(space.lo[i], space.hi[i]);
  return v;
}

}  // namespace placekit
