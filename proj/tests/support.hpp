// Shared helpers for the test binaries: seeded random digraphs, the
// adjacency-matrix degree oracle and scratch directories.
#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "recip/graph_core.hpp"

namespace recip::testkit {

struct RandomDigraph {
  std::size_t nodes{0};
  std::vector<std::vector<bool>> adj;  // adj[u][v]: u -> v
  std::vector<DirectedEdge> edges;     // ids are index + 1
};

inline RandomDigraph random_digraph(std::mt19937_64& rng, std::size_t nodes, double p) {
  RandomDigraph g;
  g.nodes = nodes;
  g.adj.assign(nodes, std::vector<bool>(nodes, false));
  std::bernoulli_distribution coin(p);
  for (std::size_t u = 0; u < nodes; ++u)
    for (std::size_t v = 0; v < nodes; ++v)
      if (u != v && coin(rng)) {
        g.adj[u][v] = true;
        g.edges.push_back({UserId{u + 1}, UserId{v + 1}});
      }
  return g;
}

/// k_in, k_out and k_m = sum_v A(u,v) A(v,u) by direct matrix scan.
inline DegreeSummary oracle_degrees(const RandomDigraph& g, std::size_t u) {
  DegreeSummary d{UserId{u + 1}, 0, 0, 0};
  for (std::size_t v = 0; v < g.nodes; ++v) {
    d.k_out += g.adj[u][v];
    d.k_in += g.adj[v][u];
    d.k_mutual += g.adj[u][v] && g.adj[v][u];
  }
  return d;
}

inline std::vector<UserId> node_ids(std::size_t n) {
  std::vector<UserId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.emplace_back(i + 1);
  return ids;
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("recip-" + tag + "-" + std::to_string(rng() % 1000000000));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Runs a shell command and returns its exit status (or -1 on abnormal end).
inline int run_command(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

}  // namespace recip::testkit
