#include "biasgraph/graph_process.hpp"

#include "biasgraph/detail/pair_set.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>

namespace biasgraph {

namespace {

// Below this missing/total ratio the non-isolated stratum is sampled by
// enumeration instead of rejection.
constexpr double kDenseStratumRatio = 0.05;

std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

double uniform01(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double parse_double(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double value = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception &) {
    throw std::invalid_argument("invalid " + std::string(what) + ": '" +
                                std::string(text) + "'");
  }
}

} // namespace

// Canonical pairs u < v keyed as u n + v. Four-byte slots while the key fits
// (n up to ~4 million), eight-byte slots beyond.
class EdgeRegistry {
public:
  explicit EdgeRegistry(std::uint32_t n) : n_(n), set_(make_set(n)) {}

  bool contains(VertexPair p) const {
    return std::visit([k = key(p)](const auto &s) { return s.contains(k); }, set_);
  }
  bool insert(VertexPair p) {
    return std::visit([k = key(p)](auto &s) { return s.insert(k); }, set_);
  }
  void prefetch(VertexPair p) const {
    std::visit([k = key(p)](const auto &s) { s.prefetch(k); }, set_);
  }

private:
  using Set = std::variant<detail::QuotientSet<std::uint32_t>,
                           detail::QuotientSet<std::uint64_t>>;

  static Set make_set(std::uint32_t n) {
    const std::uint64_t keys = std::uint64_t{n} * n;
    const unsigned bits =
        keys > 1 ? static_cast<unsigned>(std::bit_width(keys - 1)) : 1u;
    if (bits <= 44)
      return Set(std::in_place_index<0>, bits);
    return Set(std::in_place_index<1>, bits);
  }

  std::uint64_t key(VertexPair p) const {
    return std::uint64_t{p.u} * n_ + p.v;
  }

  std::uint64_t n_;
  Set set_;
};

void ModelSpec::validate() const {
  if (!std::isfinite(K) || K < 0.0)
    throw std::invalid_argument("model weight K must be finite and >= 0, got " +
                                std::to_string(K));
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Or ? "or" : "and";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "or")
    return ModelKind::Or;
  if (text == "and")
    return ModelKind::And;
  throw std::invalid_argument("unknown model '" + std::string(text) +
                              "' (expected 'or' or 'and')");
}

PairWeights pair_weights(const ModelSpec &model) {
  if (model.kind == ModelKind::Or)
    return {1.0, model.K, model.K};
  return {1.0, 1.0, model.K};
}

StopCondition parse_stop_condition(std::string_view text) {
  if (text == "connected")
    return stop::Connected{};
  if (text == "isolated-exhausted")
    return stop::IsolatedExhausted{};
  if (text.starts_with("edges=")) {
    const auto digits = text.substr(6);
    std::uint64_t m = 0;
    const auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), m);
    if (ec != std::errc{} || end != digits.data() + digits.size() ||
        digits.empty())
      throw std::invalid_argument("invalid edge count in stop spec '" +
                                  std::string(text) + "'");
    return stop::EdgeCount{m};
  }
  if (text.starts_with("giant=")) {
    const double alpha = parse_double(text.substr(6), "giant fraction");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("giant fraction must lie in (0, 1]");
    return stop::GiantFraction{alpha};
  }
  throw std::invalid_argument(
      "unknown stop spec '" + std::string(text) +
      "' (expected edges=<m>, giant=<alpha>, connected or isolated-exhausted)");
}

ProcessState::ProcessState(std::uint32_t n, ModelSpec model,
                           std::uint64_t seed)
    : n_(n), model_(model), tracker_(n), edges_(std::make_unique<EdgeRegistry>(n)),
      order_(n), pos_(n), iso_bits_((std::uint64_t{n} + 63) / 64, ~std::uint64_t{0}),
      num_iso_(n), rng_(seed) {
  model_.validate();
  std::iota(order_.begin(), order_.end(), vertex_t{0});
  std::iota(pos_.begin(), pos_.end(), std::uint32_t{0});
}

ProcessState::~ProcessState() = default;
ProcessState::ProcessState(ProcessState &&) noexcept = default;
ProcessState &ProcessState::operator=(ProcessState &&) noexcept = default;

bool ProcessState::is_isolated(vertex_t v) const {
  if (v >= n_)
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  return iso_bit(v);
}

bool ProcessState::has_edge(vertex_t u, vertex_t v) const {
  if (u == v)
    return false;
  return edges_->contains(VertexPair::canonical(u, v));
}

std::vector<vertex_t> ProcessState::isolated_vertices() const {
  return {order_.begin(), order_.begin() + num_iso_};
}

CategoryCensus ProcessState::census() const {
  const std::uint64_t i = num_iso_;
  const std::uint64_t rest = n_ - i;
  CategoryCensus c;
  c.iso_iso = pair_count(i);
  c.mixed = i * rest;
  c.noniso_noniso = pair_count(rest) - m_;
  c.weights = pair_weights(model_);
  c.total_weight = c.weights.iso_iso * static_cast<double>(c.iso_iso) +
                   c.weights.mixed * static_cast<double>(c.mixed) +
                   c.weights.noniso_noniso * static_cast<double>(c.noniso_noniso);
  return c;
}

VertexPair ProcessState::sample_edge_exact() {
  if (complete())
    throw std::logic_error("cannot sample an edge: the graph is complete");

  const CategoryCensus c = census();
  if (!(c.total_weight > 0.0))
    return sample_uniform_missing();

  const double a = c.weights.iso_iso * static_cast<double>(c.iso_iso);
  const double b = c.weights.mixed * static_cast<double>(c.mixed);
  const double r = uniform01(rng_) * c.total_weight;

  if (r < a || (b == 0.0 && c.weights.noniso_noniso * c.noniso_noniso == 0.0)) {
    const auto x = uniform_below(rng_, num_iso_);
    auto y = uniform_below(rng_, num_iso_ - 1);
    if (y >= x)
      ++y;
    return VertexPair::canonical(order_[x], order_[y]);
  }
  if (r < a + b || c.weights.noniso_noniso * c.noniso_noniso == 0.0) {
    const auto x = uniform_below(rng_, num_iso_);
    return VertexPair::canonical(order_[x], uniform_noniso());
  }
  return sample_noniso_pair();
}

VertexPair ProcessState::sample_uniform_missing() {
  const CategoryCensus c = census();
  const auto r = uniform_below(rng_, c.missing());
  if (r < c.iso_iso) {
    const auto x = uniform_below(rng_, num_iso_);
    auto y = uniform_below(rng_, num_iso_ - 1);
    if (y >= x)
      ++y;
    return VertexPair::canonical(order_[x], order_[y]);
  }
  if (r < c.iso_iso + c.mixed) {
    const auto x = uniform_below(rng_, num_iso_);
    return VertexPair::canonical(order_[x], uniform_noniso());
  }
  return sample_noniso_pair();
}

vertex_t ProcessState::uniform_noniso() {
  const std::uint32_t rest = n_ - num_iso_;
  if (num_iso_ > rest)
    return order_[num_iso_ + uniform_below(rng_, rest)];
  for (;;) {
    const auto v = static_cast<vertex_t>(uniform_below(rng_, n_));
    if (!iso_bit(v))
      return v;
  }
}

VertexPair ProcessState::sample_noniso_pair() {
  const std::uint64_t rest = n_ - num_iso_;
  const std::uint64_t total = pair_count(rest);
  const std::uint64_t missing = total - m_;
  if (static_cast<double>(missing) <
      kDenseStratumRatio * static_cast<double>(total))
    return missing_noniso_pair_at(uniform_below(rng_, missing));

  for (;;) {
    const auto [x, y] = draw_noniso_candidate();
    if (x == y)
      continue;
    const auto p = VertexPair::canonical(x, y);
    if (!edges_->contains(p))
      return p;
  }
}

std::pair<vertex_t, vertex_t> ProcessState::draw_noniso_candidate() {
  const std::uint32_t rest = n_ - num_iso_;
  std::pair<vertex_t, vertex_t> current;
  if (lookahead_rest_ == rest) {
    current = lookahead_;
  } else {
    current.first = uniform_noniso();
    current.second = uniform_noniso();
  }
  // Independent of everything decided before it is used, so the draw stays
  // exact; it is discarded if the non-isolated set grows in between.
  lookahead_.first = uniform_noniso();
  lookahead_.second = uniform_noniso();
  lookahead_rest_ = rest;
  const auto [u, v] = lookahead_;
  if (u != v) {
    edges_->prefetch(VertexPair::canonical(u, v));
    tracker_.prefetch(u);
    tracker_.prefetch(v);
  }
  return current;
}

VertexPair ProcessState::missing_noniso_pair_at(std::uint64_t index) const {
  for (std::uint32_t x = num_iso_; x < n_; ++x) {
    for (std::uint32_t y = x + 1; y < n_; ++y) {
      const auto p = VertexPair::canonical(order_[x], order_[y]);
      if (edges_->contains(p))
        continue;
      if (index == 0)
        return p;
      --index;
    }
  }
  throw std::logic_error("missing-pair index out of range");
}

std::pair<vertex_t, vertex_t> ProcessState::draw_ordered_pair() {
  const std::uint64_t i = num_iso_;
  const std::uint64_t rest = n_ - i;
  const PairWeights w = pair_weights(model_);

  // Mass on ordered pairs that are not loops; if it vanishes every weighted
  // draw would be a loop, so draw uniformly from V x V instead.
  const double non_loop = w.iso_iso * static_cast<double>(i * (i == 0 ? 0 : i - 1)) +
                          w.mixed * 2.0 * static_cast<double>(i * rest) +
                          w.noniso_noniso *
                              static_cast<double>(rest * (rest == 0 ? 0 : rest - 1));
  if (!(non_loop > 0.0))
    return {static_cast<vertex_t>(uniform_below(rng_, n_)),
            static_cast<vertex_t>(uniform_below(rng_, n_))};

  const double a = w.iso_iso * static_cast<double>(i * i);
  const double b = w.mixed * 2.0 * static_cast<double>(i * rest);
  const double c = w.noniso_noniso * static_cast<double>(rest * rest);
  const double r = uniform01(rng_) * (a + b + c);

  if (r < a || (b == 0.0 && c == 0.0))
    return {order_[uniform_below(rng_, i)], order_[uniform_below(rng_, i)]};
  if (r < a + b || c == 0.0) {
    const vertex_t iso = order_[uniform_below(rng_, i)];
    const vertex_t other = uniform_noniso();
    return (rng_() & 1) ? std::pair{iso, other} : std::pair{other, iso};
  }
  const vertex_t x = uniform_noniso();
  return {x, uniform_noniso()};
}

std::optional<VertexPair> ProcessState::sample_step_approx() {
  ++attempts_;
  const auto [u, v] = draw_ordered_pair();
  if (u == v)
    return std::nullopt;
  const auto p = VertexPair::canonical(u, v);
  if (edges_->contains(p))
    return std::nullopt;
  add_edge(p.u, p.v);
  return p;
}

void ProcessState::make_non_isolated(vertex_t v) {
  if (!iso_bit(v))
    return;
  iso_bits_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  const std::uint32_t p = pos_[v];
  const std::uint32_t last = num_iso_ - 1;
  const vertex_t other = order_[last];
  order_[last] = v;
  order_[p] = other;
  pos_[v] = last;
  pos_[other] = p;
  --num_iso_;
}

void ProcessState::add_edge(vertex_t u, vertex_t v) {
  if (u >= n_ || v >= n_)
    throw std::out_of_range("edge endpoint out of range");
  if (u == v)
    throw std::invalid_argument("self-loops are not allowed");
  if (!edges_->insert(VertexPair::canonical(u, v)))
    throw std::invalid_argument("edge " + std::to_string(u) + "-" +
                                std::to_string(v) + " already present");
  ++m_;
  make_non_isolated(u);
  make_non_isolated(v);
  tracker_.unite(u, v);
}

Snapshot ProcessState::step() {
  advance();
  return observables();
}

void ProcessState::advance() {
  if (model_.sampling == Sampling::Exact) {
    const auto p = sample_edge_exact();
    add_edge(p.u, p.v);
  } else {
    if (complete())
      throw std::logic_error("cannot add an edge: the graph is complete");
    while (!sample_step_approx()) {
    }
  }
}

bool ProcessState::satisfied(const StopCondition &condition) const {
  struct Visitor {
    const ProcessState &s;
    bool operator()(const stop::EdgeCount &c) const { return s.m_ >= c.m; }
    bool operator()(const stop::GiantFraction &c) const {
      return static_cast<double>(s.tracker_.largest()) >=
             c.alpha * static_cast<double>(s.n_);
    }
    bool operator()(const stop::Connected &) const {
      return s.tracker_.num_components() == 1;
    }
    bool operator()(const stop::IsolatedExhausted &) const {
      return s.num_iso_ == 0;
    }
  };
  return std::visit(Visitor{*this}, condition);
}

Snapshot ProcessState::run_until(const StopCondition &condition) {
  if (const auto *c = std::get_if<stop::EdgeCount>(&condition);
      c && c->m > pair_count(n_))
    throw std::invalid_argument("edge count " + std::to_string(c->m) +
                                " exceeds C(n,2) = " +
                                std::to_string(pair_count(n_)));
  if (const auto *g = std::get_if<stop::GiantFraction>(&condition);
      g && !(g->alpha > 0.0 && g->alpha <= 1.0))
    throw std::invalid_argument("giant fraction must lie in (0, 1]");

  while (!satisfied(condition))
    advance();
  return observables();
}

} // namespace biasgraph
