#include "blochgen/detuning.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace blochgen {

ModeSum ModeSum::of(int mode, int sign) {
  ModeSum s;
  if (sign != 0) s.coeffs_[mode] = sign;
  return s;
}

ModeSum ModeSum::operator+(const ModeSum& other) const {
  ModeSum out = *this;
  for (auto [mode, c] : other.coeffs_) {
    const int v = (out.coeffs_[mode] += c);
    if (v == 0) out.coeffs_.erase(mode);
  }
  return out;
}

ModeSum ModeSum::operator-(const ModeSum& other) const { return *this + other.scaled(-1); }

ModeSum ModeSum::scaled(int factor) const {
  ModeSum out;
  if (factor == 0) return out;
  for (auto [mode, c] : coeffs_) out.coeffs_[mode] = c * factor;
  return out;
}

std::string ModeSum::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [mode, c] : coeffs_) {
    if (c < 0) os << (first ? "-" : " - ");
    else if (!first) os << " + ";
    if (std::abs(c) != 1) os << std::abs(c) << "*";
    os << "D" << mode;
    first = false;
  }
  return os.str();
}

namespace {

struct Edge {
  int to;
  LevelPair pair;
  ModeSum step;  // theta_to - theta_from
};

using Adjacency = std::vector<std::vector<Edge>>;

Adjacency build_adjacency(const LevelDiagram& diagram, std::map<LevelPair, DrivenPair>& driven) {
  Adjacency adj(static_cast<std::size_t>(diagram.size()) + 1);
  for (const auto& c : diagram.couplings) {
    const LevelPair p = c.pair();
    const int sign = (c.upper == p.hi) ? 1 : -1;
    driven[p] = {c.mode, sign};
    // Absorption (lower -> upper) adds the mode detuning.
    adj[static_cast<std::size_t>(c.lower)].push_back({c.upper, p, ModeSum::of(c.mode, 1)});
    adj[static_cast<std::size_t>(c.upper)].push_back({c.lower, p, ModeSum::of(c.mode, -1)});
  }
  for (auto& edges : adj)
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
  return adj;
}

/// BFS from `root`; parent edge per visited level (to == -1 for the root).
std::vector<const Edge*> bfs(const Adjacency& adj, int root, std::vector<int>& parent) {
  std::vector<const Edge*> via(adj.size(), nullptr);
  parent.assign(adj.size(), 0);
  std::deque<int> queue{root};
  parent[static_cast<std::size_t>(root)] = -1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const auto& e : adj[static_cast<std::size_t>(u)]) {
      if (parent[static_cast<std::size_t>(e.to)] != 0) continue;
      parent[static_cast<std::size_t>(e.to)] = u;
      via[static_cast<std::size_t>(e.to)] = &e;
      queue.push_back(e.to);
    }
  }
  return via;
}

}  // namespace

DetuningMap detuning_map(const LevelDiagram& diagram) {
  DetuningMap out;
  const int n = diagram.size();
  const Adjacency adj = build_adjacency(diagram, out.driven);

  // Spanning-forest potentials, then every coupling must agree with them.
  std::vector<ModeSum> theta(adj.size());
  std::vector<int> root_of(adj.size(), 0);
  std::vector<int> tree_parent(adj.size(), 0);
  for (int r = 1; r <= n; ++r) {
    if (root_of[static_cast<std::size_t>(r)] != 0) continue;
    root_of[static_cast<std::size_t>(r)] = r;
    tree_parent[static_cast<std::size_t>(r)] = -1;
    std::deque<int> queue{r};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& e : adj[static_cast<std::size_t>(u)]) {
        const auto v = static_cast<std::size_t>(e.to);
        if (root_of[v] != 0) continue;
        root_of[v] = r;
        tree_parent[v] = u;
        theta[v] = theta[static_cast<std::size_t>(u)] + e.step;
        queue.push_back(e.to);
      }
    }
  }

  for (const auto& c : diagram.couplings) {
    const ModeSum lhs = theta[static_cast<std::size_t>(c.upper)] - theta[static_cast<std::size_t>(c.lower)];
    if (lhs == ModeSum::of(c.mode, 1)) continue;
    // Close the loop through the tree: upper -> ... -> lca -> ... -> lower -> upper.
    auto chain = [&](int v) {
      std::vector<int> path;
      for (; v != -1; v = tree_parent[static_cast<std::size_t>(v)]) path.push_back(v);
      return path;
    };
    auto a = chain(c.upper);
    auto b = chain(c.lower);
    while (a.size() > 1 && b.size() > 1 && a[a.size() - 2] == b[b.size() - 2]) {
      a.pop_back();
      b.pop_back();
    }
    std::vector<int> loop(a.begin(), a.end());
    for (auto it = b.rbegin() + 1; it != b.rend(); ++it) loop.push_back(*it);
    loop.push_back(c.upper);
    std::ostringstream os;
    os << "no rotating frame: around the loop ";
    for (std::size_t k = 0; k < loop.size(); ++k) os << (k ? "-" : "") << loop[k];
    os << " the mode detunings sum to " << (lhs - ModeSum::of(c.mode, 1)).str() << " instead of 0";
    out.inconsistency = LoopInconsistency{loop, os.str()};
    break;
  }

  for (int i = 1; i <= n; ++i) {
    std::vector<int> parent;
    const auto via = bfs(adj, i, parent);
    for (int j = i + 1; j <= n; ++j) {
      PairDetuning pd;
      const LevelPair p{i, j};
      if (auto it = out.driven.find(p); it != out.driven.end()) {
        pd.connected = true;
        pd.driven = true;
        pd.formal = ModeSum::of(it->second.mode, it->second.sign);
        pd.path = {{p, 1}};
      } else if (parent[static_cast<std::size_t>(j)] != 0) {
        pd.connected = true;
        std::vector<DetuningStep> rev;
        for (int v = j; v != i; v = parent[static_cast<std::size_t>(v)]) {
          const Edge* e = via[static_cast<std::size_t>(v)];
          // Stepping parent -> v changes theta by +D_pair when v is the pair's hi end.
          rev.push_back({e->pair, v == e->pair.hi ? 1 : -1});
        }
        pd.path.assign(rev.rbegin(), rev.rend());
        for (const auto& s : pd.path) {
          const auto& dp = out.driven.at(s.pair);
          pd.formal = pd.formal + ModeSum::of(dp.mode, dp.sign * s.sign);
        }
      }
      out.pairs.emplace(p, std::move(pd));
    }
  }
  return out;
}

}  // namespace blochgen
