#ifndef LSVCLUSTER_IO_HPP
#define LSVCLUSTER_IO_HPP

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lsvcluster/cluster.hpp"
#include "lsvcluster/coupling.hpp"
#include "lsvcluster/matrix.hpp"

namespace lsvc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

// Strips '#' comments; returns false for blank lines.
inline bool content_of(const std::string& raw, std::string& out) {
  const auto hash = raw.find('#');
  out = hash == std::string::npos ? raw : raw.substr(0, hash);
  for (char c : out)
    if (!std::isspace(static_cast<unsigned char>(c))) return true;
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dense matrix text format: first line "rows cols", then one line per row of
// space-separated decimal values, written with 17 significant digits.

inline void write_matrix_text(const Matrix& m, std::ostream& out) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << detail::format_double(m(i, j));
    }
    out << '\n';
  }
}

inline void write_matrix_text(const Matrix& m, const std::string& path) {
  auto out = detail::open_output(path);
  write_matrix_text(m, out);
}

inline Matrix read_matrix_text(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw ParseError("expected header \"rows cols\"", 1);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j)))
        throw ParseError("expected " + std::to_string(rows * cols) + " matrix entries",
                          static_cast<int>(i) + 2);
  return m;
}

inline Matrix read_matrix_text(const std::string& path) {
  auto in = detail::open_input(path);
  return read_matrix_text(in);
}

// ---------------------------------------------------------------------------
// Cluster list format: one line per cluster with 1-based ascending indices,
// the unclustered states (or '-'), and the detection flag.

struct ClusterFile {
  std::vector<IndexSet> clusters;
  IndexSet unclustered;
  bool clustered = true;
};

inline void write_clusters(const ClusterFile& cf, std::ostream& out) {
  int id = 1;
  for (const IndexSet& c : cf.clusters) {
    out << "cluster " << id++ << " size=" << c.size() << ":";
    for (int i : c.indices()) out << ' ' << (i + 1);
    out << '\n';
  }
  out << "unclustered:";
  if (cf.unclustered.empty())
    out << " -";
  else
    for (int i : cf.unclustered.indices()) out << ' ' << (i + 1);
  out << '\n';
  out << "clustered: " << (cf.clustered ? "true" : "false") << '\n';
}

inline ClusterFile to_cluster_file(const ClusterResult& result) {
  return ClusterFile{result.clusters, result.unclustered, result.clustered};
}

inline ClusterFile read_clusters(std::istream& in) {
  std::vector<std::vector<int>> clusters;
  std::vector<int> unclustered;
  bool clustered = true;
  bool saw_unclustered = false, saw_flag = false;
  int max_index = -1;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line;
    if (!detail::content_of(raw, line)) continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "cluster") {
      int id = 0;
      std::string size_field;
      if (!(ls >> id >> size_field)) throw ParseError("malformed cluster line", lineno);
      std::vector<int> idx;
      int v = 0;
      while (ls >> v) idx.push_back(v - 1);
      for (int i : idx) {
        if (i < 0) throw ParseError("cluster indices are 1-based", lineno);
        max_index = std::max(max_index, i);
      }
      clusters.push_back(std::move(idx));
    } else if (head.rfind("unclustered", 0) == 0) {
      std::string tok;
      while (ls >> tok) {
        if (tok == "-") break;
        const int v = std::stoi(tok);
        if (v < 1) throw ParseError("unclustered indices are 1-based", lineno);
        unclustered.push_back(v - 1);
        max_index = std::max(max_index, v - 1);
      }
      saw_unclustered = true;
    } else if (head.rfind("clustered", 0) == 0) {
      std::string tok;
      ls >> tok;
      if (tok != "true" && tok != "false") throw ParseError("expected true or false", lineno);
      clustered = tok == "true";
      saw_flag = true;
    } else {
      throw ParseError("unrecognised line: " + head, lineno);
    }
  }
  if (!saw_unclustered || !saw_flag)
    throw ParseError("missing unclustered/clustered trailer", lineno);
  const int n = max_index + 1;
  ClusterFile cf;
  for (auto& c : clusters) cf.clusters.emplace_back(std::move(c), n);
  cf.unclustered = IndexSet(std::move(unclustered), n);
  cf.clustered = clustered;
  return cf;
}

inline ClusterFile read_clusters(const std::string& path) {
  auto in = detail::open_input(path);
  return read_clusters(in);
}

// ---------------------------------------------------------------------------
// Coupling matrix output: the weight kind, the blocks, then the dense matrix.

inline void write_coupling(const CouplingMatrix& w, WeightKind kind, std::ostream& out) {
  out << "weights=" << to_string(kind) << '\n';
  for (std::size_t b = 0; b < w.partition.size(); ++b) {
    out << "block " << (b + 1) << ":";
    for (int i : w.partition[b].indices()) out << ' ' << (i + 1);
    out << '\n';
  }
  write_matrix_text(w.values, out);
}

// ---------------------------------------------------------------------------
// Edge list and bipartite list readers (1-based on disk, '#' comments).

/// Edge list: optional header "n <count>", then lines "i j [w]" (weight
/// defaults to 1). Without a header the vertex count is the largest endpoint.
/// Undirected edges add weight in both directions; duplicates accumulate.
inline Matrix read_edge_list(std::istream& in, bool directed) {
  struct Edge {
    int i, j;
    double w;
  };
  std::vector<Edge> edges;
  int declared_n = -1;
  int max_endpoint = 0;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line;
    if (!detail::content_of(raw, line)) continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "n") {
      if (!(ls >> declared_n) || declared_n < 1) throw ParseError("bad vertex count", lineno);
      continue;
    }
    Edge e{0, 0, 1.0};
    try {
      e.i = std::stoi(first);
    } catch (const std::exception&) {
      throw ParseError("expected edge \"i j [w]\"", lineno);
    }
    if (!(ls >> e.j)) throw ParseError("expected edge \"i j [w]\"", lineno);
    ls >> e.w;
    if (e.i < 1 || e.j < 1) throw ParseError("endpoints are 1-based", lineno);
    if (e.w < 0.0) throw ParseError("negative edge weight", lineno);
    if (declared_n > 0 && (e.i > declared_n || e.j > declared_n))
      throw ParseError("endpoint exceeds declared vertex count", lineno);
    max_endpoint = std::max({max_endpoint, e.i, e.j});
    edges.push_back(e);
  }
  const int n = declared_n > 0 ? declared_n : max_endpoint;
  if (n < 1) throw std::runtime_error("edge list: no vertices");
  Matrix a = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    a(e.i - 1, e.j - 1) += e.w;
    if (!directed && e.i != e.j) a(e.j - 1, e.i - 1) += e.w;
  }
  return a;
}

/// Bipartite list: header "rows <m> cols <n>", then lines "i j [w]" with i a
/// row node and j a column node. Produces the m x n biadjacency matrix.
inline Matrix read_bipartite_list(std::istream& in) {
  int m = -1, n = -1;
  Matrix d;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line;
    if (!detail::content_of(raw, line)) continue;
    std::istringstream ls(line);
    if (m < 0) {
      std::string rows_kw, cols_kw;
      if (!(ls >> rows_kw >> m >> cols_kw >> n) || rows_kw != "rows" || cols_kw != "cols" ||
          m < 1 || n < 1)
        throw ParseError("expected header \"rows <m> cols <n>\"", lineno);
      d = Matrix::Zero(m, n);
      continue;
    }
    int i = 0, j = 0;
    double w = 1.0;
    if (!(ls >> i >> j)) throw ParseError("expected edge \"i j [w]\"", lineno);
    ls >> w;
    if (i < 1 || i > m || j < 1 || j > n) throw ParseError("endpoint out of range", lineno);
    if (w < 0.0) throw ParseError("negative edge weight", lineno);
    d(i - 1, j - 1) += w;
  }
  if (m < 0) throw std::runtime_error("bipartite list: missing header");
  return d;
}

enum class NetworkKind { dense, edgelist, bipartite };

/// Reads raw network data as a dense weighted matrix. Bipartite inputs come
/// back as the biadjacency matrix, ready for bipartite_embed.
inline Matrix read_network(const std::string& path, NetworkKind kind, bool directed = false) {
  auto in = detail::open_input(path);
  switch (kind) {
    case NetworkKind::dense: return read_matrix_text(in);
    case NetworkKind::edgelist: return read_edge_list(in, directed);
    case NetworkKind::bipartite: return read_bipartite_list(in);
  }
  throw std::logic_error("read_network: unknown kind");
}

// ---------------------------------------------------------------------------
// Graymap rendering of a nonnegative matrix, one pixel per entry; darker
// means larger, with gamma-compressed scaling against the matrix maximum.

struct HeatmapConfig {
  double gamma = 0.5;
  bool ascii = false;  // emit P2 instead of binary P5
};

inline std::uint8_t heatmap_pixel(double value, double max_value, double gamma) {
  if (max_value <= 0.0) return 255;
  const double t = std::min(1.0, value / max_value);
  const double p = 255.0 * (1.0 - std::pow(t, gamma));
  return static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, p))));
}

inline void write_heatmap(const Matrix& m, const HeatmapConfig& config, std::ostream& out) {
  require(config.gamma > 0.0, "write_heatmap: gamma must be positive");
  require((m.array() >= 0.0).all(), "write_heatmap: negative entry");
  const double max_value = m.maxCoeff();
  out << (config.ascii ? "P2" : "P5") << '\n' << m.cols() << ' ' << m.rows() << '\n' << "255\n";
  if (config.ascii) {
    int width = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const int px = heatmap_pixel(m(i, j), max_value, config.gamma);
        const int digits = px > 99 ? 3 : (px > 9 ? 2 : 1);
        if (width > 0 && width + 1 + digits > 70) {
          out << '\n';
          width = 0;
        } else if (width > 0) {
          out << ' ';
          ++width;
        }
        out << px;
        width += digits;
      }
    }
    out << '\n';
  } else {
    std::vector<char> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        row[static_cast<std::size_t>(j)] =
            static_cast<char>(heatmap_pixel(m(i, j), max_value, config.gamma));
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
  }
}

inline void write_heatmap(const Matrix& m, const HeatmapConfig& config, const std::string& path) {
  auto out = detail::open_output(path, !config.ascii);
  write_heatmap(m, config, out);
}

// ---------------------------------------------------------------------------
// Largest strongly connected component of the directed graph with an arc
// i -> j wherever the weight matrix is positive (iterative Tarjan).

inline IndexSet largest_scc(const Matrix& a) {
  require(a.rows() == a.cols(), "largest_scc: matrix must be square");
  const int n = static_cast<int>(a.rows());
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  struct Frame {
    int v;
    int child;
  };
  for (int start = 0; start < n; ++start) {
    if (index[static_cast<std::size_t>(start)] != -1) continue;
    std::vector<Frame> call{{start, 0}};
    index[static_cast<std::size_t>(start)] = low[static_cast<std::size_t>(start)] = next_index++;
    stack.push_back(start);
    on_stack[static_cast<std::size_t>(start)] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      for (; f.child < n; ++f.child) {
        if (a(f.v, f.child) <= 0.0 || f.child == f.v) continue;
        const int w = f.child;
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = 1;
          ++f.child;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)])
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;
      if (low[static_cast<std::size_t>(f.v)] == index[static_cast<std::size_t>(f.v)]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = next_comp;
        } while (w != f.v);
        ++next_comp;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty())
        low[static_cast<std::size_t>(call.back().v)] =
            std::min(low[static_cast<std::size_t>(call.back().v)], low[static_cast<std::size_t>(v)]);
    }
  }

  std::vector<int> count(static_cast<std::size_t>(next_comp), 0);
  for (int v = 0; v < n; ++v) ++count[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
  // ties resolve to the component containing the smallest vertex
  int best = -1;
  for (int v = 0; v < n; ++v) {
    const int c = comp[static_cast<std::size_t>(v)];
    if (best == -1 || count[static_cast<std::size_t>(c)] > count[static_cast<std::size_t>(best)])
      best = c;
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (comp[static_cast<std::size_t>(v)] == best) out.push_back(v);
  return IndexSet(std::move(out), n);
}

}  // namespace lsvc

#endif  // LSVCLUSTER_IO_HPP
