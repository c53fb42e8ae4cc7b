#include "biasgraph/selftest.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <stdexcept>

namespace biasgraph {

std::vector<Fixture> standard_fixtures() {
  return {
      {"n3-empty", 3, {}},
      {"n4-edge01", 4, {{0, 1}}},
      {"n6-path0123", 6, {{0, 1}, {1, 2}, {2, 3}}},
  };
}

namespace {

ProcessState build_state(const ModelSpec &model, const Fixture &f,
                         std::uint64_t seed) {
  if (f.n < 2 || f.n > 8)
    throw std::invalid_argument("fixture must have 2 <= n <= 8");
  ProcessState s(f.n, model, seed);
  for (auto [u, v] : f.edges)
    s.add_edge(u, v);
  return s;
}

} // namespace

std::vector<std::pair<VertexPair, double>>
brute_force_distribution(const ModelSpec &model, const Fixture &f) {
  std::vector<std::vector<bool>> adj(f.n, std::vector<bool>(f.n, false));
  std::vector<unsigned> degree(f.n, 0);
  for (auto [u, v] : f.edges) {
    adj[u][v] = adj[v][u] = true;
    ++degree[u];
    ++degree[v];
  }

  std::vector<std::pair<VertexPair, double>> out;
  double total = 0.0;
  for (vertex_t u = 0; u < f.n; ++u)
    for (vertex_t v = u + 1; v < f.n; ++v) {
      if (adj[u][v])
        continue;
      const bool u_iso = degree[u] == 0;
      const bool v_iso = degree[v] == 0;
      double w;
      if (model.kind == ModelKind::Or)
        w = (u_iso && v_iso) ? 1.0 : model.K;
      else
        w = (!u_iso && !v_iso) ? model.K : 1.0;
      out.push_back({{u, v}, w});
      total += w;
    }
  if (out.empty())
    throw std::invalid_argument("fixture graph is complete");
  for (auto &[pair, w] : out)
    w = total > 0.0 ? w / total : 1.0 / static_cast<double>(out.size());
  return out;
}

double chi_square_p_value(double statistic, unsigned dof) {
  if (dof == 0)
    return statistic == 0.0 ? 1.0 : 0.0;
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

SelftestResult sampler_selftest(const ModelSpec &model, const Fixture &fixture,
                                std::uint64_t draws, std::uint64_t seed) {
  if (draws < kMinSelftestDraws)
    throw std::invalid_argument("selftest needs at least 1000 draws");
  model.validate();

  SelftestResult r;
  r.fixture = fixture.name;
  r.model = model;
  r.draws = draws;
  const auto dist = brute_force_distribution(model, fixture);
  for (const auto &[pair, p] : dist) {
    r.pairs.push_back(pair);
    r.expected.push_back(p);
  }
  r.observed.assign(r.pairs.size(), 0);

  ProcessState state = build_state(model, fixture, seed);
  std::uint64_t stray = 0;
  auto tally = [&](VertexPair p) {
    const auto it = std::find(r.pairs.begin(), r.pairs.end(), p);
    if (it == r.pairs.end())
      ++stray;
    else
      ++r.observed[static_cast<std::size_t>(it - r.pairs.begin())];
  };

  for (std::uint64_t k = 0; k < draws;) {
    if (model.sampling == Sampling::Exact) {
      tally(state.sample_edge_exact());
      ++k;
      continue;
    }
    const auto [u, v] = state.draw_ordered_pair();
    if (u == v || state.has_edge(u, v))
      continue;
    tally(VertexPair::canonical(u, v));
    ++k;
  }

  unsigned cells = 0;
  bool zero_cell_hit = stray > 0;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const double expected = r.expected[i] * static_cast<double>(draws);
    if (expected == 0.0) {
      zero_cell_hit |= r.observed[i] > 0;
      continue;
    }
    const double d = static_cast<double>(r.observed[i]) - expected;
    r.chi_square += d * d / expected;
    ++cells;
  }
  r.dof = cells > 0 ? cells - 1 : 0;
  r.p_value = zero_cell_hit ? 0.0 : chi_square_p_value(r.chi_square, r.dof);
  r.pass = !zero_cell_hit && r.p_value > kSelftestPValue;
  return r;
}

} // namespace biasgraph
