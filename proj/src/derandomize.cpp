#include "orbitbench/derandomize.hpp"

#include <algorithm>
#include <deque>

#include "orbitbench/errors.hpp"
#include "orbitbench/rng.hpp"

namespace orbitbench {

namespace {

// Largest l1 distance from a window position to the mask.
std::int64_t max_distance(const Window& w, const PositionMask& mask) {
  std::vector<std::int64_t> dist(w.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) {
      dist[i] = 0;
      queue.push_back(i);
    }
  std::int64_t worst = 0;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    worst = std::max(worst, dist[i]);
    const Element p = w.position(i);
    for (int a = 0; a < w.rank; ++a)
      for (int step : {-1, 1}) {
        Element q = p;
        q[a] += step;
        if (!w.in_window(q)) continue;
        const std::size_t j = w.index(q);
        if (dist[j] >= 0) continue;
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
  }
  return worst;
}

}  // namespace

DerandomizeResult derandomize(CocyclePtr tau, const PositionMask& u, const DerandomizeConfig& cfg) {
  if (cfg.eps <= 0) throw DomainError("derandomize: eps must be positive");
  const SamplePtr& sample = tau->sample_ptr();
  const Window& w = sample->window;
  DerandomizeResult res;
  double delta = cfg.eps;
  for (int k = 0; k <= cfg.max_halvings; ++k, delta /= 2) {
    MultiscaleResult ms;
    try {
      ms = multiscale_graphing(sample, u, delta);
    } catch (const CapacityError&) {
      if (k == 0) throw;
      break;
    }
    res.delta = delta;
    res.halvings = k;
    res.multiscale = std::move(ms);
    res.encoding = nn_encode(res.multiscale.graphing, *tau);
    res.entropy = graphing_entropy_bound(res.encoding.theta, res.encoding.values, cfg.eps);
    res.entropy_ok = res.entropy.estimated && res.entropy.estimate < cfg.eps;
    if (res.entropy_ok) break;
  }

  const auto verts = res.multiscale.graphing.vertices();
  res.vertices = verts.size();
  if (verts.empty()) return res;
  auto mask = std::make_shared<std::vector<std::uint8_t>>(w.size(), 0);
  for (std::size_t i : verts) (*mask)[i] = 1;
  auto alpha = std::make_shared<RestrictedCocycle>(tau, Domain::positions(mask));
  res.search_radius = max_distance(w, *mask) + 1;
  auto sigma = extend_by_return_map(alpha, res.search_radius);

  // sigma = tau on pairs of graphing vertices.
  Philox4x32 rng(cfg.seed, 11);
  const std::size_t n = verts.size();
  const bool exhaustive = n * n <= cfg.pairs;
  const std::size_t total = exhaustive ? n * n : cfg.pairs;
  for (std::size_t t = 0; t < total; ++t) {
    const std::size_t i = exhaustive ? t / n : rng.bits64(2 * t) % n;
    const std::size_t j = exhaustive ? t % n : rng.bits64(2 * t + 1) % n;
    const Element x = w.position(verts[i]);
    const Element g = sub(w.position(verts[j]), x);
    const auto a = tau->evaluate(g, x);
    const auto s = sigma->evaluate(g, x);
    ++res.v_pairs_checked;
    if (!a || !s || *a != *s) ++res.v_pair_failures;
  }
  res.extension = check_extension(*sigma, tau.get(), cfg.pairs, cfg.g_radius, cfg.seed);
  return res;
}

}  // namespace orbitbench
