#include "placekit/placer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "placekit/rng.hpp"

namespace placekit {

const char* to_string(GradOptimizer o) {
  return o == GradOptimizer::adam ? "adam" : "nesterov";
}

const char* to_string(WirelengthModel m) {
  return m == WirelengthModel::weighted_average ? "weighted_average"
                                                : "logsumexp";
}

void PlacerConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
  if (!(lower_pcof > 0.0 && lower_pcof <= 1.0 && upper_pcof >= 1.0))
    throw ConfigError("need 0 < lower_pcof <= 1 <= upper_pcof");
  if (gamma <= 0.0) throw ConfigError("gamma must be > 0");
  if (bins_x < 1 || bins_y < 1) throw ConfigError("bins must be >= 1");
  if (target_density <= 0.0) throw ConfigError("target_density must be > 0");
  if (lambda_update_every < 1 || inner_iters < 1)
    throw ConfigError("iteration counts must be >= 1");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
}

std::string PlacerConfig::to_json() const {
  std::ostringstream os;
  os << "{\"bins_x\":" << bins_x << ",\"bins_y\":" << bins_y
     << ",\"optimizer\":\"" << to_string(optimizer) << "\""
     << ",\"wirelength\":\"" << to_string(wirelength_model) << "\""
     << ",\"learning_rate\":" << learning_rate << ",\"lr_decay\":" << lr_decay
     << ",\"density_weight\":" << density_weight << ",\"gamma\":" << gamma
     << ",\"target_density\":" << target_density
     << ",\"stop_overflow\":" << stop_overflow
     << ",\"lower_pcof\":" << lower_pcof << ",\"upper_pcof\":" << upper_pcof
     << ",\"ref_hpwl\":" << ref_hpwl
     << ",\"lambda_update_every\":" << lambda_update_every
     << ",\"inner_iters\":" << inner_iters << ",\"max_iters\":" << max_iters
     << "}";
  return os.str();
}

namespace {

// One axis of one net. Returns the smoothed span and, when `grad` is given,
// writes d(span)/d(coord_i) into it.
double smoothed_span_impl(const double* coords, int n, double gamma,
                          WirelengthModel model, double* grad) {
  if (n <= 1) {
    if (grad) std::fill(grad, grad + n, 0.0);
    return 0.0;
  }
  double max_c = coords[0], min_c = coords[0];
  for (int i = 1; i < n; ++i) {
    max_c = std::max(max_c, coords[i]);
    min_c = std::min(min_c, coords[i]);
  }
  // Stabilized exponentials: e^{(c-max)/g} and e^{(min-c)/g} are both <= 1.
  double sum_p = 0.0, sum_m = 0.0;
  double wsum_p = 0.0, wsum_m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ep = std::exp((coords[i] - max_c) / gamma);
    const double em = std::exp((min_c - coords[i]) / gamma);
    sum_p += ep;
    sum_m += em;
    wsum_p += coords[i] * ep;
    wsum_m += coords[i] * em;
  }
  if (model == WirelengthModel::logsumexp) {
    const double value =
        (max_c - min_c) + gamma * (std::log(sum_p) + std::log(sum_m));
    if (grad) {
      for (int i = 0; i < n; ++i) {
        const double sp = std::exp((coords[i] - max_c) / gamma) / sum_p;
        const double sm = std::exp((min_c - coords[i]) / gamma) / sum_m;
        grad[i] = sp - sm;
      }
    }
    return value;
  }
  const double f = wsum_p / sum_p;  // smooth max
  const double g = wsum_m / sum_m;  // smooth min
  if (grad) {
    for (int i = 0; i < n; ++i) {
      const double sp = std::exp((coords[i] - max_c) / gamma) / sum_p;
      const double sm = std::exp((min_c - coords[i]) / gamma) / sum_m;
      grad[i] = sp * (1.0 + (coords[i] - f) / gamma) -
                sm * (1.0 - (coords[i] - g) / gamma);
    }
  }
  return f - g;
}

}  // namespace

double smoothed_span(const std::vector<double>& coords, double gamma,
                     WirelengthModel model) {
  return smoothed_span_impl(coords.data(), static_cast<int>(coords.size()),
                            gamma, model, nullptr);
}

double smoothed_wl(const Placement& placement, double gamma,
                   WirelengthModel model) {
  if (gamma <= 0.0) throw ConfigError("gamma must be > 0");
  double total = 0.0;
  std::vector<double> buf;
  for (const Net& net : placement.netlist->nets()) {
    const int n = static_cast<int>(net.pins.size());
    buf.resize(n);
    for (int i = 0; i < n; ++i) buf[i] = placement.pin_x(net.pins[i]);
    total += smoothed_span_impl(buf.data(), n, gamma, model, nullptr);
    for (int i = 0; i < n; ++i) buf[i] = placement.pin_y(net.pins[i]);
    total += smoothed_span_impl(buf.data(), n, gamma, model, nullptr);
  }
  return total;
}

void smoothed_wl_grad(const Placement& placement, double gamma,
                      WirelengthModel model, std::vector<double>& grad_x,
                      std::vector<double>& grad_y) {
  const Netlist& nl = *placement.netlist;
  grad_x.assign(nl.modules().size(), 0.0);
  grad_y.assign(nl.modules().size(), 0.0);
  std::vector<double> buf, pin_grad;
  for (const Net& net : nl.nets()) {
    const int n = static_cast<int>(net.pins.size());
    buf.resize(n);
    pin_grad.resize(n);
    for (int axis = 0; axis < 2; ++axis) {
      for (int i = 0; i < n; ++i)
        buf[i] = axis == 0 ? placement.pin_x(net.pins[i])
                           : placement.pin_y(net.pins[i]);
      smoothed_span_impl(buf.data(), n, gamma, model, pin_grad.data());
      auto& grad = axis == 0 ? grad_x : grad_y;
      for (int i = 0; i < n; ++i) {
        const int owner = nl.pin(net.pins[i]).owner;
        if (nl.module(owner).mobility == Mobility::movable)
          grad[owner] += pin_grad[i];
      }
    }
  }
}

double density_penalty_and_grad(const Placement& placement, int bins_x,
                                int bins_y, double target,
                                std::vector<double>& grad_x,
                                std::vector<double>& grad_y) {
  const Netlist& nl = *placement.netlist;
  const Canvas& canvas = nl.canvas();
  const DensityGrid grid = build_density_grid(placement, bins_x, bins_y);
  const double bin_area = grid.bin_w * grid.bin_h;

  std::vector<double> excess(grid.occupancy.size());
  double value = 0.0;
  for (std::size_t b = 0; b < grid.occupancy.size(); ++b) {
    excess[b] = std::max(0.0, grid.occupancy[b] - target * bin_area);
    value += excess[b] * excess[b];
  }

  grad_x.assign(nl.modules().size(), 0.0);
  grad_y.assign(nl.modules().size(), 0.0);
  for (const Module& m : nl.modules()) {
    if (m.mobility != Mobility::movable) continue;
    const double x0 = placement.x[m.id], y0 = placement.y[m.id];
    const double x1 = x0 + m.width, y1 = y0 + m.height;
    const double cx0 = std::max(x0, canvas.x), cy0 = std::max(y0, canvas.y);
    const double cx1 = std::min(x1, canvas.x + canvas.width);
    const double cy1 = std::min(y1, canvas.y + canvas.height);
    if (!(cx1 > cx0 && cy1 > cy0)) continue;
    const int bx0 = std::clamp(static_cast<int>((cx0 - canvas.x) / grid.bin_w), 0, bins_x - 1);
    const int bx1 = std::clamp(static_cast<int>((cx1 - canvas.x) / grid.bin_w), 0, bins_x - 1);
    const int by0 = std::clamp(static_cast<int>((cy0 - canvas.y) / grid.bin_h), 0, bins_y - 1);
    const int by1 = std::clamp(static_cast<int>((cy1 - canvas.y) / grid.bin_h), 0, bins_y - 1);
    for (int by = by0; by <= by1; ++by) {
      const double b_y0 = canvas.y + by * grid.bin_h;
      const double b_y1 = b_y0 + grid.bin_h;
      const double oy = std::min(cy1, b_y1) - std::max(cy0, b_y0);
      if (oy <= 0.0) continue;
      // d(overlap_y)/dy: the lower edge moving up past b_y0 grows the
      // overlap, the upper edge moving past b_y1 shrinks it.
      const double doy = (y0 > b_y0 ? -1.0 : 0.0) + (y1 < b_y1 ? 1.0 : 0.0);
      for (int bx = bx0; bx <= bx1; ++bx) {
        const double b_x0 = canvas.x + bx * grid.bin_w;
        const double b_x1 = b_x0 + grid.bin_w;
        const double ox = std::min(cx1, b_x1) - std::max(cx0, b_x0);
        if (ox <= 0.0) continue;
        const double e = excess[by * bins_x + bx];
        if (e <= 0.0) continue;
        const double dox = (x0 > b_x0 ? -1.0 : 0.0) + (x1 < b_x1 ? 1.0 : 0.0);
        grad_x[m.id] += 2.0 * e * dox * oy;
        grad_y[m.id] += 2.0 * e * doy * ox;
      }
    }
  }
  return value;
}

PlacerResult run_placement(const Netlist& netlist, const Placement& start,
                           const PlacerConfig& config,
                           const std::vector<std::uint8_t>& frozen,
                           std::uint64_t seed) {
  config.validate();
  const Canvas& canvas = netlist.canvas();
  PlacerResult out;
  out.placement = start;
  out.placement.netlist = &netlist;

  std::vector<int> movable;
  for (const Module& m : netlist.modules()) {
    const bool is_frozen = m.id < static_cast<int>(frozen.size()) && frozen[m.id];
    if (m.mobility == Mobility::movable && !is_frozen) movable.push_back(m.id);
  }
  if (movable.empty()) {
    out.report.status = PlacerStatus::converged;
    out.report.final_hpwl = total_hpwl(out.placement);
    out.report.final_overflow = density_overflow(
        out.placement, config.bins_x, config.bins_y, config.target_density);
    out.report.final_lambda = config.density_weight;
    return out;
  }

  // Canvas center plus ~1% jitter.
  Rng rng(seed);
  const double jitter = 0.01 * std::max(canvas.width, canvas.height);
  for (int id : movable) {
    const Module& m = netlist.module(id);
    out.placement.x[id] =
        canvas.x + 0.5 * (canvas.width - m.width) + jitter * rng.normal();
    out.placement.y[id] =
        canvas.y + 0.5 * (canvas.height - m.height) + jitter * rng.normal();
  }

  auto clamp_coords = [&]() {
    for (int id : movable) {
      const Module& m = netlist.module(id);
      out.placement.x[id] = std::clamp(out.placement.x[id], canvas.x,
                                       canvas.x + std::max(0.0, canvas.width - m.width));
      out.placement.y[id] = std::clamp(out.placement.y[id], canvas.y,
                                       canvas.y + std::max(0.0, canvas.height - m.height));
    }
  };
  clamp_coords();

  const std::size_t n_modules = netlist.modules().size();
  std::vector<double> wl_gx, wl_gy, d_gx, d_gy;
  std::vector<double> m_x(n_modules, 0.0), m_y(n_modules, 0.0);  // adam m / momentum
  std::vector<double> v_x(n_modules, 0.0), v_y(n_modules, 0.0);  // adam v
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  const double momentum = 0.9;

  double lambda = config.density_weight;
  double lr = config.learning_rate;
  double hpwl_at_last_update = total_hpwl(out.placement);
  long adam_t = 0;

  ConvergenceReport& report = out.report;
  report.status = PlacerStatus::max_iters;
  report.final_lambda = lambda;

  for (int outer = 0; outer < config.max_iters; ++outer) {
    for (int inner = 0; inner < config.inner_iters; ++inner) {
      smoothed_wl_grad(out.placement, config.gamma, config.wirelength_model,
                       wl_gx, wl_gy);
      density_penalty_and_grad(out.placement, config.bins_x, config.bins_y,
                               config.target_density, d_gx, d_gy);
      ++adam_t;
      for (int id : movable) {
        const double gx = wl_gx[id] + lambda * d_gx[id];
        const double gy = wl_gy[id] + lambda * d_gy[id];
        if (config.optimizer == GradOptimizer::adam) {
          m_x[id] = beta1 * m_x[id] + (1.0 - beta1) * gx;
          m_y[id] = beta1 * m_y[id] + (1.0 - beta1) * gy;
          v_x[id] = beta2 * v_x[id] + (1.0 - beta2) * gx * gx;
          v_y[id] = beta2 * v_y[id] + (1.0 - beta2) * gy * gy;
          const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t));
          const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t));
          out.placement.x[id] -=
              lr * (m_x[id] / bc1) / (std::sqrt(v_x[id] / bc2) + eps);
          out.placement.y[id] -=
              lr * (m_y[id] / bc1) / (std::sqrt(v_y[id] / bc2) + eps);
        } else {
          // Nesterov momentum.
          const double prev_mx = m_x[id], prev_my = m_y[id];
          m_x[id] = momentum * m_x[id] - lr * gx;
          m_y[id] = momentum * m_y[id] - lr * gy;
          out.placement.x[id] += -momentum * prev_mx + (1.0 + momentum) * m_x[id];
          out.placement.y[id] += -momentum * prev_my + (1.0 + momentum) * m_y[id];
        }
      }
      clamp_coords();
    }

    const double hpwl = total_hpwl(out.placement);
    const double overflow = density_overflow(
        out.placement, config.bins_x, config.bins_y, config.target_density);
    report.hpwl_curve.push_back(hpwl);
    report.overflow_curve.push_back(overflow);
    report.iterations = outer + 1;
    report.final_hpwl = hpwl;
    report.final_overflow = overflow;
    report.final_lambda = lambda;

    if (!std::isfinite(hpwl)) {
      report.status = PlacerStatus::diverged;
      return out;
    }
    if ((outer + 1) % config.lambda_update_every == 0) {
      const double delta = hpwl - hpwl_at_last_update;
      const double mult = std::clamp(
          std::pow(config.upper_pcof, 1.0 - delta / config.ref_hpwl),
          config.lower_pcof, config.upper_pcof);
      lambda *= mult;
      hpwl_at_last_update = hpwl;
    }
    lr *= config.lr_decay;
    if (config.stop_overflow >= 0.0 && overflow <= config.stop_overflow) {
      report.status = PlacerStatus::converged;
      return out;
    }
  }
  return out;
}

std::string ConvergenceReport::to_json() const {
  std::ostringstream os;
  os << "{\"status\":\""
     << (status == PlacerStatus::converged
             ? "converged"
             : status == PlacerStatus::diverged ? "diverged" : "max_iters")
     << "\",\"iterations\":" << iterations
     << ",\"final_overflow\":" << final_overflow
     << ",\"final_hpwl\":" << final_hpwl << ",\"overflow_curve\":[";
  for (std::size_t i = 0; i < overflow_curve.size(); ++i)
    os << (i ? "," : "") << overflow_curve[i];
  os << "],\"hpwl_curve\":[";
  for (std::size_t i = 0; i < hpwl_curve.size(); ++i)
    os << (i ? "," : "") << hpwl_curve[i];
  os << "]}";
  return os.str();
}

}  // namespace placekit
