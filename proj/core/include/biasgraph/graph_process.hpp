#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "biasgraph/component_tracker.hpp"

namespace biasgraph {

/// Or: missing edges between two isolated vertices weigh 1, all others K.
/// And: missing edges between two non-isolated vertices weigh K, all others 1.
enum class ModelKind { Or, And };

enum class Sampling { Exact, OrderedPairApprox };

struct ModelSpec {
  ModelKind kind = ModelKind::And;
  double K = 1.0;
  Sampling sampling = Sampling::Exact;

  /// Throws std::invalid_argument unless K is finite and non-negative.
  void validate() const;
};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/// Weight of a missing pair by the isolation status of its endpoints.
struct PairWeights {
  double iso_iso;
  double mixed;
  double noniso_noniso;
};

PairWeights pair_weights(const ModelSpec &model);

/// Unordered vertex pair, stored with u < v.
struct VertexPair {
  vertex_t u;
  vertex_t v;

  static VertexPair canonical(vertex_t a, vertex_t b) {
    return a < b ? VertexPair{a, b} : VertexPair{b, a};
  }
  friend bool operator==(const VertexPair &, const VertexPair &) = default;
};

/// Missing-pair counts per stratum together with the model weights.
struct CategoryCensus {
  std::uint64_t iso_iso = 0;
  std::uint64_t mixed = 0;
  std::uint64_t noniso_noniso = 0;
  PairWeights weights{};
  double total_weight = 0.0;

  std::uint64_t missing() const { return iso_iso + mixed + noniso_noniso; }
};

namespace stop {
struct EdgeCount {
  std::uint64_t m;
};
struct GiantFraction {
  double alpha;
};
struct Connected {};
struct IsolatedExhausted {};
} // namespace stop

using StopCondition = std::variant<stop::EdgeCount, stop::GiantFraction,
                                   stop::Connected, stop::IsolatedExhausted>;

/// Parses "edges=<m>", "giant=<alpha>", "connected" or "isolated-exhausted".
StopCondition parse_stop_condition(std::string_view text);

using Rng = std::mt19937_64;

inline std::uint64_t pair_count(std::uint64_t k) { return k * (k - 1) / 2; }

class EdgeRegistry;

/// The evolving graph of one run of G_or(K) / G_and(K).
///
/// Vertices live in one permutation array split at `num_isolated()`:
/// positions [0, i) hold the isolated vertices, [i, n) the rest. A vertex
/// crosses the boundary at most once. Every existing edge lies in the
/// non-isolated stratum, so the missing-pair counts of the other two strata
/// follow from i alone.
class ProcessState {
public:
  ProcessState(std::uint32_t n, ModelSpec model, std::uint64_t seed);
  ~ProcessState();
  ProcessState(ProcessState &&) noexcept;
  ProcessState &operator=(ProcessState &&) noexcept;

  std::uint32_t n() const noexcept { return n_; }
  const ModelSpec &model() const noexcept { return model_; }
  const ComponentTracker &tracker() const noexcept { return tracker_; }
  std::uint64_t m() const noexcept { return m_; }
  std::uint64_t attempt_count() const noexcept { return attempts_; }
  std::uint32_t num_isolated() const noexcept { return num_iso_; }
  bool is_isolated(vertex_t v) const;
  bool has_edge(vertex_t u, vertex_t v) const;
  bool complete() const noexcept { return m_ == pair_count(n_); }

  /// Isolated vertices, in no particular order.
  std::vector<vertex_t> isolated_vertices() const;

  CategoryCensus census() const;

  /// Draws a missing pair with probability weight / total_weight without
  /// adding it. Falls back to the uniform distribution over missing pairs
  /// when every missing pair has weight zero. Throws std::logic_error on a
  /// complete graph.
  VertexPair sample_edge_exact();

  /// Draws an ordered pair (u, v) in V x V proportionally to the model
  /// weight. Changes nothing but the generator.
  std::pair<vertex_t, vertex_t> draw_ordered_pair();

  /// One step of the ordered-pair process: draws a pair, adds it when it is
  /// a new non-loop edge, otherwise reports a skip (std::nullopt).
  std::optional<VertexPair> sample_step_approx();

  /// Registers the edge and merges its endpoints' components.
  /// Throws on loops and duplicate edges.
  void add_edge(vertex_t u, vertex_t v);

  /// Adds one edge using the configured sampler. In ordered-pair mode
  /// skipped draws are repeated until an edge is added.
  Snapshot step();

  /// Advances until the first state satisfying `condition` and returns its
  /// observables. Returns immediately if the current state satisfies it.
  Snapshot run_until(const StopCondition &condition);

  bool satisfied(const StopCondition &condition) const;

  Snapshot observables() const { return tracker_.observables(m_); }

  Rng &rng() noexcept { return rng_; }

private:
  void advance();
  void make_non_isolated(vertex_t v);
  bool iso_bit(vertex_t v) const { return (iso_bits_[v >> 6] >> (v & 63)) & 1; }
  vertex_t uniform_noniso();
  std::pair<vertex_t, vertex_t> draw_noniso_candidate();
  VertexPair sample_noniso_pair();
  VertexPair sample_uniform_missing();
  VertexPair missing_noniso_pair_at(std::uint64_t index) const;

  std::uint32_t n_;
  ModelSpec model_;
  ComponentTracker tracker_;
  std::unique_ptr<EdgeRegistry> edges_;
  // isolated first, then non-isolated
  std::vector<vertex_t, detail::HugePageAllocator<vertex_t>> order_;
  // position of each vertex in order_
  std::vector<std::uint32_t, detail::HugePageAllocator<std::uint32_t>> pos_;
  // one bit per vertex, set while isolated; small enough to stay in cache
  std::vector<std::uint64_t> iso_bits_;
  // Candidate for the next non-isolated draw, taken one step early so its
  // memory can be prefetched. Valid only while the non-isolated count is
  // still lookahead_rest_.
  std::pair<vertex_t, vertex_t> lookahead_{};
  std::uint32_t lookahead_rest_ = ~std::uint32_t{0};
  std::uint32_t num_iso_;
  std::uint64_t m_ = 0;
  std::uint64_t attempts_ = 0;
  Rng rng_;
};

} // namespace biasgraph
