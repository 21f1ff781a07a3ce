#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "placekit/placer.hpp"
#include "placekit/rng.hpp"

using namespace placekit;

namespace {

Netlist random_wl_instance(Rng& rng, int n_modules, int n_nets,
                           int max_pins_per_net, int n_fixed = 0) {
  const int total = n_modules + n_fixed;
  std::vector<Module> modules(total);
  for (int i = 0; i < total; ++i) {
    modules[i].id = i;
    modules[i].width = rng.uniform(1.0, 4.0);
    modules[i].height = rng.uniform(1.0, 4.0);
    modules[i].kind = ModuleKind::macro;
    if (i >= n_modules) modules[i].mobility = Mobility::fixed;
  }
  std::vector<Pin> pins;
  std::vector<Net> nets;
  for (int e = 0; e < n_nets; ++e) {
    std::vector<int> owners(total);
    for (int i = 0; i < total; ++i) owners[i] = i;
    rng.shuffle(owners);
    const int degree =
        2 + static_cast<int>(rng.uniform_index(max_pins_per_net - 1));
    Net net;
    net.id = e;
    for (int j = 0; j < std::min(degree, total); ++j) {
      Pin p;
      p.id = static_cast<int>(pins.size());
      p.owner = owners[j];
      p.dx = rng.uniform(-0.5, 0.5);
      p.dy = rng.uniform(-0.5, 0.5);
      net.pins.push_back(p.id);
      pins.push_back(p);
    }
    nets.push_back(std::move(net));
  }
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, 50, 50});
  std::vector<double> xs(total), ys(total);
  for (int i = 0; i < total; ++i) {
    xs[i] = rng.uniform(5.0, 40.0);
    ys[i] = rng.uniform(5.0, 40.0);
  }
  nl.set_initial_coords(xs, ys);
  return nl;
}

// Central finite differences of a scalar function of one module coordinate.
template <typename F>
double central_diff(Placement& p, std::vector<double>& coord, int id, double h,
                    F&& f) {
  const double keep = coord[id];
  coord[id] = keep + h;
  const double up = f(p);
  coord[id] = keep - h;
  const double down = f(p);
  coord[id] = keep;
  return (up - down) / (2.0 * h);
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

}  // namespace

TEST_CASE("smoothed span of a single pin is zero") {
  for (WirelengthModel model :
       {WirelengthModel::weighted_average, WirelengthModel::logsumexp}) {
    CHECK(smoothed_span({3.7}, 1.0, model) == 0.0);
  }
}

TEST_CASE("two-pin smoothed span approaches the distance for small gamma") {
  const double d = 10.0;
  const double gamma = d / 100.0;
  for (WirelengthModel model :
       {WirelengthModel::weighted_average, WirelengthModel::logsumexp}) {
    const double v = smoothed_span({0.0, d}, gamma, model);
    CHECK(std::abs(v - d) < 10.0 * gamma);
  }
}

TEST_CASE("smoothing bounds hold on random nets") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    std::vector<double> coords(n);
    for (double& c : coords) c = rng.uniform(0.0, 30.0);
    const double gamma = rng.uniform(0.5, 4.0);
    const double hpwl = *std::max_element(coords.begin(), coords.end()) -
                        *std::min_element(coords.begin(), coords.end());
    const double wa =
        smoothed_span(coords, gamma, WirelengthModel::weighted_average);
    const double lse = smoothed_span(coords, gamma, WirelengthModel::logsumexp);
    CHECK(wa >= -1e-9);
    CHECK(wa <= hpwl + 1e-9);
    CHECK(lse >= hpwl - 1e-9);
    CHECK(lse <= hpwl + 2.0 * gamma * std::log(static_cast<double>(n)) + 1e-9);
  }
}

TEST_CASE("smoothed models are translation invariant") {
  Rng rng(13);
  const Netlist nl = random_wl_instance(rng, 6, 8, 5);
  Placement p(nl);
  for (WirelengthModel model :
       {WirelengthModel::weighted_average, WirelengthModel::logsumexp}) {
    const double base = smoothed_wl(p, 2.0, model);
    Placement shifted = p;
    for (double& v : shifted.x) v += 3.25;
    for (double& v : shifted.y) v += 3.25;
    const double moved = smoothed_wl(shifted, 2.0, model);
    CHECK(rel_err(base, moved) < 1e-9);
  }
}

TEST_CASE("symmetric two-pin net has equal and opposite gradients") {
  Rng rng(1);
  const Netlist nl = random_wl_instance(rng, 2, 1, 2);
  Placement p(nl);
  std::vector<double> gx, gy;
  smoothed_wl_grad(p, 1.5, WirelengthModel::logsumexp, gx, gy);
  CHECK(gx[0] == doctest::Approx(-gx[1]).epsilon(1e-9));
  CHECK(gy[0] == doctest::Approx(-gy[1]).epsilon(1e-9));
}

TEST_CASE("wirelength gradients match finite differences") {
  Rng rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const Netlist nl = random_wl_instance(rng, 5, 7, 5, 2);
    Placement p(nl);
    const double gamma = rng.uniform(1.0, 3.0);
    const double h = 1e-4 * nl.canvas().width;
    for (WirelengthModel model :
         {WirelengthModel::weighted_average, WirelengthModel::logsumexp}) {
      std::vector<double> gx, gy;
      smoothed_wl_grad(p, gamma, model, gx, gy);
      auto f = [&](const Placement& pl) { return smoothed_wl(pl, gamma, model); };
      double max_err = 0.0;
      for (const Module& m : nl.modules()) {
        if (m.mobility != Mobility::movable) {
          CHECK(gx[m.id] == 0.0);  // fixed modules carry no gradient
          CHECK(gy[m.id] == 0.0);
          continue;
        }
        max_err = std::max(max_err,
                           rel_err(gx[m.id], central_diff(p, p.x, m.id, h, f)));
        max_err = std::max(max_err,
                           rel_err(gy[m.id], central_diff(p, p.y, m.id, h, f)));
      }
      CHECK(max_err <= 1e-4);
    }
  }
}

TEST_CASE("density penalty basics") {
  Rng rng(31);
  const Netlist nl = random_wl_instance(rng, 3, 2, 3);
  Placement p(nl);
  // Spread far apart on a 50x50 canvas with generous target: no overflow.
  p.x = {2, 20, 40};
  p.y = {2, 20, 40};
  std::vector<double> gx, gy;
  const double value = density_penalty_and_grad(p, 4, 4, 4.0, gx, gy);
  CHECK(value == 0.0);
  for (double g : gx) CHECK(g == 0.0);
  for (double g : gy) CHECK(g == 0.0);
}

TEST_CASE("density gradient pushes coincident modules apart") {
  std::vector<Module> modules(2);
  for (int i = 0; i < 2; ++i) {
    modules[i].id = i;
    modules[i].width = modules[i].height = 2.0;
    modules[i].kind = ModuleKind::macro;
  }
  std::vector<Pin> pins = {{0, 0, 0, 0}, {1, 1, 0, 0}};
  std::vector<Net> nets = {{0, {0, 1}}};
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, 8, 8});
  nl.set_initial_coords({2.6, 3.1}, {3.0, 3.0});
  Placement p(nl);
  std::vector<double> gx, gy;
  const double value = density_penalty_and_grad(p, 2, 2, 0.05, gx, gy);
  CHECK(value > 0.0);
  // Both sit in the lower-left bin; the gradient must separate them.
  CHECK(gx[0] != 0.0);
  CHECK(gx[0] * gx[1] <= 0.0);
}

TEST_CASE("density gradient matches finite differences off kinks") {
  Rng rng(43);
  int accepted = 0;
  while (accepted < 25) {
    const Netlist nl = random_wl_instance(rng, 4, 3, 4);
    Placement p(nl);
    const int bins = 4;
    const double target = 0.02;  // low target so overflow is active
    const double h = 1e-5 * nl.canvas().width;
    // Keep away from bin boundaries (multiples of 12.5) and from the
    // overflow activation threshold.
    bool near_kink = false;
    for (const Module& m : nl.modules()) {
      for (double edge : {p.x[m.id], p.x[m.id] + m.width}) {
        const double f = std::fmod(edge, 12.5);
        if (std::min(f, 12.5 - f) < 100 * h) near_kink = true;
      }
      for (double edge : {p.y[m.id], p.y[m.id] + m.height}) {
        const double f = std::fmod(edge, 12.5);
        if (std::min(f, 12.5 - f) < 100 * h) near_kink = true;
      }
    }
    const DensityGrid grid = build_density_grid(p, bins, bins);
    for (double occ : grid.occupancy)
      if (std::abs(occ - target * grid.bin_w * grid.bin_h) < 0.05)
        near_kink = true;
    if (near_kink) continue;
    ++accepted;

    std::vector<double> gx, gy, tmp_x, tmp_y;
    density_penalty_and_grad(p, bins, bins, target, gx, gy);
    auto f = [&](const Placement& pl) {
      return density_penalty_and_grad(pl, bins, bins, target, tmp_x, tmp_y);
    };
    double max_err = 0.0;
    for (const Module& m : nl.modules()) {
      max_err = std::max(max_err,
                         rel_err(gx[m.id], central_diff(p, p.x, m.id, h, f)));
      max_err = std::max(max_err,
                         rel_err(gy[m.id], central_diff(p, p.y, m.id, h, f)));
    }
    CHECK(max_err <= 1e-3);
  }
}

TEST_CASE("run_placement pulls a single module to its fixed pin") {
  // One movable module netted to a fixed pin at (24, 26) on a 40x40 canvas;
  // default knobs, capped at the 500 iterations the contract allows.
  std::vector<Module> modules(2);
  modules[0].id = 0;
  modules[0].width = modules[0].height = 2.0;
  modules[0].kind = ModuleKind::macro;
  modules[1].id = 1;
  modules[1].width = modules[1].height = 2.0;
  modules[1].kind = ModuleKind::macro;
  modules[1].mobility = Mobility::fixed;
  std::vector<Pin> pins = {{0, 0, 0, 0}, {1, 1, 0, 0}};
  std::vector<Net> nets = {{0, {0, 1}}};
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, 40, 40});
  nl.set_initial_coords({0, 23}, {0, 25});  // fixed pin center (24, 26)
  PlacerConfig config;
  config.max_iters = 500;
  const PlacerResult result = run_placement(
      nl, Placement(nl), config, std::vector<std::uint8_t>(2, 0), 3);
  CHECK(result.report.iterations <= 500);
  const double cx = result.placement.x[0] + 1.0;
  const double cy = result.placement.y[0] + 1.0;
  CHECK(std::abs(cx - 24.0) < 0.5);
  CHECK(std::abs(cy - 26.0) < 0.5);
}

TEST_CASE("run_placement separates crowded modules under strong density") {
  // Two netted modules start stacked in the center bin; strong density must
  // drive them into different bins with overflow settling monotonically.
  Rng rng(3);
  const Netlist nl = random_wl_instance(rng, 2, 1, 2);
  PlacerConfig config;
  config.bins_x = config.bins_y = 2;
  config.target_density = 0.01;
  config.density_weight = 10.0;
  config.max_iters = 200;
  const PlacerResult result = run_placement(
      nl, Placement(nl), config, std::vector<std::uint8_t>(2, 0), 5);
  const auto& curve = result.report.overflow_curve;
  REQUIRE(curve.size() >= 60);
  CHECK(curve.back() < curve.front());
  for (std::size_t i = curve.size() - 50; i < curve.size(); ++i)
    CHECK(curve[i] <= curve[i - 1] + 1e-9);
  // The pair no longer overlaps.
  CHECK(overlap_area(result.placement, {0, 1}) == doctest::Approx(0.0));
}

TEST_CASE("run_placement with everything frozen is the identity") {
  Rng rng(9);
  const Netlist nl = random_wl_instance(rng, 4, 3, 3);
  const Placement start(nl);
  const PlacerResult result =
      run_placement(nl, start, PlacerConfig{},
                    std::vector<std::uint8_t>(nl.modules().size(), 1), 1);
  CHECK(result.report.iterations == 0);
  CHECK(result.placement.x == start.x);
  CHECK(result.placement.y == start.y);
}

TEST_CASE("run_placement is deterministic for a fixed seed") {
  Rng rng(77);
  const Netlist nl = random_wl_instance(rng, 5, 6, 4);
  PlacerConfig config;
  config.max_iters = 50;
  const PlacerResult a = run_placement(
      nl, Placement(nl), config, std::vector<std::uint8_t>(5, 0), 11);
  const PlacerResult b = run_placement(
      nl, Placement(nl), config, std::vector<std::uint8_t>(5, 0), 11);
  CHECK(a.placement.x == b.placement.x);
  CHECK(a.placement.y == b.placement.y);
  CHECK(a.report.hpwl_curve == b.report.hpwl_curve);
}

TEST_CASE("lambda stays within its schedule bounds") {
  Rng rng(5);
  const Netlist nl = random_wl_instance(rng, 4, 4, 3);
  PlacerConfig config;
  config.max_iters = 40;
  config.lambda_update_every = 2;
  const PlacerResult result = run_placement(
      nl, Placement(nl), config, std::vector<std::uint8_t>(4, 0), 2);
  CHECK(result.report.iterations == 40);
  for (double v : result.report.hpwl_curve) CHECK(std::isfinite(v));
  const double updates = 40.0 / config.lambda_update_every;
  const double upper =
      config.density_weight * std::pow(config.upper_pcof, updates);
  const double lower =
      config.density_weight * std::pow(config.lower_pcof, updates);
  CHECK(result.report.final_lambda > 0.0);
  CHECK(result.report.final_lambda <= upper * (1.0 + 1e-9));
  CHECK(result.report.final_lambda >= lower * (1.0 - 1e-9));
}

TEST_CASE("nesterov optimizer also converges on the single-pin pull") {
  std::vector<Module> modules(2);
  modules[0].id = 0;
  modules[0].width = modules[0].height = 2.0;
  modules[0].kind = ModuleKind::macro;
  modules[1] = modules[0];
  modules[1].id = 1;
  modules[1].mobility = Mobility::fixed;
  std::vector<Pin> pins = {{0, 0, 0, 0}, {1, 1, 0, 0}};
  std::vector<Net> nets = {{0, {0, 1}}};
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, 40, 40});
  nl.set_initial_coords({0, 11}, {0, 29});
  PlacerConfig config;
  config.optimizer = GradOptimizer::nesterov;
  config.learning_rate = 0.05;
  const PlacerResult result = run_placement(
      nl, Placement(nl), config, std::vector<std::uint8_t>(2, 0), 3);
  CHECK(std::abs(result.placement.x[0] + 1.0 - 12.0) < 0.5);
  CHECK(std::abs(result.placement.y[0] + 1.0 - 30.0) < 0.5);
}
