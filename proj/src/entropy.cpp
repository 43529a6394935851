#include "orbitbench/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <string>
#include <unordered_map>

#include "orbitbench/errors.hpp"

namespace orbitbench {

double shannon(std::span<const double> p) {
  double sum = 0, h = 0;
  for (double v : p) {
    if (!(v >= 0.0)) throw DomainError("shannon: negative or NaN weight");
    sum += v;
    if (v > 0) h -= v * std::log(v);
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("shannon: weights do not sum to 1");
  return h;
}

double shannon_counts(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  double s = 0;
  for (auto c : counts) {
    n += c;
    if (c > 0) s += static_cast<double>(c) * std::log(static_cast<double>(c));
  }
  if (n == 0) return 0.0;
  const double dn = static_cast<double>(n);
  return std::max(0.0, std::log(dn) - s / dn);
}

double binary_entropy(double p) {
  double h = 0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log1p(-p);
  return h;
}

std::uint32_t LabelField::distinct() const {
  std::vector<std::uint32_t> v(labels);
  std::sort(v.begin(), v.end());
  return static_cast<std::uint32_t>(std::unique(v.begin(), v.end()) - v.begin());
}

LabelField to_field(const OrbitSample& sample) {
  LabelField f;
  f.rank = sample.rank();
  for (int i = 0; i < f.rank; ++i) f.extent[static_cast<std::size_t>(i)] = sample.window.extent(i);
  f.labels.assign(sample.symbols.begin(), sample.symbols.end());
  return f;
}

LabelField sequence_field(std::vector<std::uint32_t> seq) {
  LabelField f;
  f.rank = 1;
  f.extent[0] = static_cast<std::int64_t>(seq.size());
  f.labels = std::move(seq);
  return f;
}

namespace {

struct PatternStats {
  std::size_t samples = 0;
  std::size_t patterns = 0;
  double entropy = 0;
  double var_log = 0;  // variance of -log p over the empirical law
};

PatternStats stats_from_sorted(std::vector<std::uint64_t>& keys) {
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  PatternStats st;
  st.samples = keys.size();
  st.patterns = counts.size();
  st.entropy = shannon_counts(counts);
  const double n = static_cast<double>(keys.size());
  double m2 = 0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / n;
    m2 += p * std::log(p) * std::log(p);
  }
  st.var_log = std::max(0.0, m2 - st.entropy * st.entropy);
  return st;
}

PatternStats count_patterns(const LabelField& f, const std::vector<std::uint32_t>& dense, unsigned bits,
                            std::int64_t side) {
  const int d = f.rank;
  std::array<std::int64_t, kMaxRank> stride{};
  std::int64_t s = 1;
  for (int i = d - 1; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = s;
    s *= f.extent[static_cast<std::size_t>(i)];
  }
  // Cell offsets of the cube, anchors = all positions with the cube inside.
  std::vector<std::int64_t> cells{0};
  for (int i = 0; i < d; ++i) {
    std::vector<std::int64_t> next;
    for (auto c : cells)
      for (std::int64_t t = 0; t < side; ++t) next.push_back(c + t * stride[static_cast<std::size_t>(i)]);
    cells = std::move(next);
  }
  std::vector<std::int64_t> anchors{0};
  for (int i = 0; i < d; ++i) {
    const std::int64_t n = f.extent[static_cast<std::size_t>(i)] - side + 1;
    if (n <= 0) return {};
    std::vector<std::int64_t> next;
    next.reserve(anchors.size() * static_cast<std::size_t>(n));
    for (auto a : anchors)
      for (std::int64_t t = 0; t < n; ++t) next.push_back(a + t * stride[static_cast<std::size_t>(i)]);
    anchors = std::move(next);
  }
  const bool packed = bits * cells.size() <= 64;
  if (packed) {
    std::vector<std::uint64_t> keys(anchors.size());
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      std::uint64_t key = 0;
      for (auto c : cells) key = (key << bits) | dense[static_cast<std::size_t>(anchors[k] + c)];
      keys[k] = key;
    }
    return stats_from_sorted(keys);
  }
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string key(cells.size() * sizeof(std::uint32_t), '\0');
  for (auto a : anchors) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::uint32_t v = dense[static_cast<std::size_t>(a + cells[j])];
      std::memcpy(key.data() + j * sizeof v, &v, sizeof v);
    }
    ++counts[key];
  }
  // Reduce to sorted counts for a deterministic sum.
  std::vector<std::uint64_t> c;
  c.reserve(counts.size());
  for (const auto& kv : counts) c.push_back(kv.second);
  std::sort(c.begin(), c.end());
  PatternStats st;
  st.samples = anchors.size();
  st.patterns = c.size();
  st.entropy = shannon_counts(c);
  const double n = static_cast<double>(anchors.size());
  double m2 = 0;
  for (auto v : c) {
    const double p = static_cast<double>(v) / n;
    m2 += p * std::log(p) * std::log(p);
  }
  st.var_log = std::max(0.0, m2 - st.entropy * st.entropy);
  return st;
}

}  // namespace

EntropyEstimate block_entropy(const LabelField& field, const std::vector<std::int64_t>& sides_in,
                              double min_samples_per_pattern) {
  if (field.labels.empty()) throw DegenerateInputError("block_entropy: empty field");
  if (!(min_samples_per_pattern > 0)) throw DomainError("block_entropy: min_samples_per_pattern must be positive");
  std::vector<std::int64_t> sides(sides_in);
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  if (sides.empty() || sides.front() < 1) throw DomainError("block_entropy: sides must be positive");
  if (field.rank == 1) {
    // The difference form needs side k-1 next to every k.
    std::vector<std::int64_t> extra;
    for (auto s : sides)
      if (s > 1 && !std::binary_search(sides.begin(), sides.end(), s - 1)) extra.push_back(s - 1);
    sides.insert(sides.end(), extra.begin(), extra.end());
    std::sort(sides.begin(), sides.end());
  }

  // Dense relabelling so packed keys use as few bits as possible.
  std::vector<std::uint32_t> values(field.labels);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::uint32_t> dense(field.labels.size());
  for (std::size_t i = 0; i < dense.size(); ++i)
    dense[i] = static_cast<std::uint32_t>(std::lower_bound(values.begin(), values.end(), field.labels[i]) - values.begin());
  const unsigned bits = std::max(1u, static_cast<unsigned>(std::bit_width(values.size() - 1)));

  EntropyEstimate est;
  est.window_size = field.size();
  std::vector<PatternStats> stats;
  for (auto s : sides) {
    PatternStats st = count_patterns(field, dense, bits, s);
    BlockPoint bp;
    bp.side = s;
    bp.cells = 1;
    for (int i = 0; i < field.rank; ++i) bp.cells *= static_cast<std::size_t>(s);
    bp.samples = st.samples;
    bp.patterns = st.patterns;
    bp.entropy = st.entropy;
    bp.normalized = st.entropy / static_cast<double>(bp.cells);
    bp.reliable = st.samples > 0 &&
                  static_cast<double>(st.patterns) * min_samples_per_pattern <= static_cast<double>(st.samples);
    est.curve.push_back(bp);
    stats.push_back(st);
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < est.curve.size(); ++i)
    if (est.curve[i].reliable) best = i;
  if (!best) throw DegenerateInputError("block_entropy: every block size is excluded (too many patterns)");

  double prev = -1;
  for (const auto& bp : est.curve) {
    if (!bp.reliable) continue;
    if (prev >= 0 && bp.normalized > prev * 1.02 + 1e-12) est.monotone = false;
    prev = bp.normalized;
  }

  const auto& b = est.curve[*best];
  est.side_used = b.side;
  const double se = std::sqrt(stats[*best].var_log / static_cast<double>(std::max<std::size_t>(1, b.samples)));
  if (field.rank == 1 && b.side > 1) {
    est.method = "difference";
    est.value = std::max(0.0, b.entropy - est.curve[*best - 1].entropy);
    est.stderr_proxy = se;
  } else {
    est.method = "normalized";
    est.value = b.normalized;
    est.stderr_proxy = se / static_cast<double>(b.cells);
  }
  return est;
}

PartialEntropy partial_entropy(std::span<const std::optional<std::uint32_t>> labels) {
  PartialEntropy out;
  if (labels.empty()) return out;
  std::map<std::uint32_t, std::uint64_t> on_u;
  std::uint64_t in_u = 0;
  for (const auto& l : labels)
    if (l) {
      ++on_u[*l];
      ++in_u;
    }
  const double n = static_cast<double>(labels.size());
  out.measure = static_cast<double>(in_u) / n;
  if (in_u == 0) return out;  // H(phi; U) = 0 by convention
  std::vector<std::uint64_t> cond;
  for (const auto& kv : on_u) cond.push_back(kv.second);
  out.value = binary_entropy(out.measure) + out.measure * shannon_counts(cond);
  std::vector<std::uint64_t> star(cond);
  star.push_back(labels.size() - in_u);
  out.star_value = shannon_counts(star);
  return out;
}

int furman_k(double eps) {
  if (!(eps > 0)) throw DomainError("furman_k: eps must be positive");
  for (int k = 1; k < 1000; ++k) {
    const double tail = 2.0 * std::exp(-1.0) * std::exp(-static_cast<double>(k)) / (1.0 - std::exp(-static_cast<double>(k)));
    if (tail <= eps) return k;
  }
  throw CapacityError("furman_k: eps too small");
}

double furman_constant(double c, double eps) {
  if (!(c > 0)) throw DomainError("furman_constant: c must be positive");
  return 2.0 * (c + furman_k(eps)) + 2.0 * std::log(2.0);
}

FurmanCheck furman_bound_check(const Group& group, const std::map<Element, double>& p, double eps, double c) {
  const double ce = furman_constant(c, eps);
  FurmanCheck out;
  double weighted = 0;
  for (const auto& [g, v] : p) {
    if (g == group.identity()) throw DomainError("furman_bound_check: support must exclude the identity");
    if (!(v >= 0 && v <= 1)) throw DomainError("furman_bound_check: values must lie in [0,1]");
    out.lhs += binary_entropy(v);
    weighted += static_cast<double>(group.word_length(g)) * v;
  }
  out.rhs = ce * weighted + eps;
  out.holds = out.lhs <= out.rhs;
  return out;
}

FurmanCheck furman_distribution_check(const Group& group, const std::map<Element, double>& q, double eps,
                                      double c) {
  const double ce = furman_constant(c, eps);
  std::vector<double> w;
  double mean = 0;
  for (const auto& [g, v] : q) {
    if (g == group.identity()) throw DomainError("furman_distribution_check: support must exclude the identity");
    w.push_back(v);
    mean += static_cast<double>(group.word_length(g)) * v;
  }
  FurmanCheck out;
  out.lhs = shannon(w);
  out.rhs = ce * mean + eps;
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace orbitbench
