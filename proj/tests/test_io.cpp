#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "lsvcluster/datasets.hpp"
#include "lsvcluster/ensembles.hpp"
#include "lsvcluster/io.hpp"
#include "test_helpers.hpp"

using namespace lsvc;

TEST_CASE("dense matrix text round-trips bit-exactly") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = gauss(rng) * std::pow(10.0, static_cast<int>(rng() % 7) - 3);
  std::stringstream ss;
  write_matrix_text(m, ss);
  const Matrix back = read_matrix_text(ss);
  REQUIRE(back.rows() == 5);
  REQUIRE(back.cols() == 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) REQUIRE(back(i, j) == m(i, j));
}

TEST_CASE("dense reader reports malformed input with a line number") {
  std::stringstream ss("3 3\n1 2 3\n4 5\n");
  try {
    read_matrix_text(ss);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("undirected edge list symmetrizes") {
  std::stringstream ss("# a comment\n1 2 3.0\n");
  const Matrix a = read_edge_list(ss, false);
  REQUIRE(a.rows() == 2);
  REQUIRE(a(0, 1) == 3.0);
  REQUIRE(a(1, 0) == 3.0);
  REQUIRE(a(0, 0) == 0.0);
}

TEST_CASE("directed edge list keeps one direction and defaults weights to one") {
  std::stringstream ss("n 3\n1 2\n3 1 0.5\n");
  const Matrix a = read_edge_list(ss, true);
  REQUIRE(a.rows() == 3);
  REQUIRE(a(0, 1) == 1.0);
  REQUIRE(a(1, 0) == 0.0);
  REQUIRE(a(2, 0) == 0.5);
}

TEST_CASE("edge list endpoint and weight validation carries line numbers") {
  std::stringstream ss("n 2\n1 2 1.0\n1 3 1.0\n");
  try {
    read_edge_list(ss, false);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 3);
  }
  std::stringstream neg("1 2 -1\n");
  REQUIRE_THROWS_AS(read_edge_list(neg, false), ParseError);
}

TEST_CASE("bipartite list reproduces the deep south biadjacency") {
  auto in = detail::open_input(std::string(LSV_DATA_DIR) + "/deepsouth.bip");
  const Matrix d = read_bipartite_list(in);
  REQUIRE(d.rows() == 18);
  REQUIRE(d.cols() == 14);
  REQUIRE((d - deep_south_biadjacency()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shipped courtois file parses to the built-in matrix") {
  const Matrix m = read_matrix_text(std::string(LSV_DATA_DIR) + "/courtois.mat");
  REQUIRE((m - courtois_matrix().mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cluster files round-trip") {
  ClusterFile cf;
  cf.clusters = {IndexSet({0, 1, 2}, 8), IndexSet({4, 6}, 8)};
  cf.unclustered = IndexSet({3, 5, 7}, 8);
  cf.clustered = true;
  std::stringstream ss;
  write_clusters(cf, ss);
  const ClusterFile back = read_clusters(ss);
  REQUIRE(back.clusters.size() == 2);
  REQUIRE(back.clusters[0].indices() == std::vector<int>{0, 1, 2});
  REQUIRE(back.clusters[1].indices() == std::vector<int>{4, 6});
  REQUIRE(back.unclustered.indices() == std::vector<int>{3, 5, 7});
  REQUIRE(back.clustered);
}

TEST_CASE("cluster file with no unclustered states uses a dash") {
  ClusterFile cf;
  cf.clusters = {IndexSet({0, 1}, 2)};
  cf.unclustered = IndexSet({}, 2);
  cf.clustered = false;
  std::stringstream ss;
  write_clusters(cf, ss);
  REQUIRE(ss.str().find("unclustered: -") != std::string::npos);
  REQUIRE(ss.str().find("clustered: false") != std::string::npos);
  const ClusterFile back = read_clusters(ss);
  REQUIRE(back.unclustered.empty());
  REQUIRE_FALSE(back.clustered);
}

TEST_CASE("coupling writer emits the weight kind, blocks and dense matrix") {
  CouplingMatrix w;
  w.values = Matrix::Identity(2, 2);
  w.partition = {IndexSet({0, 1}, 4), IndexSet({2, 3}, 4)};
  w.weight = Vector::Ones(4);
  std::stringstream ss;
  write_coupling(w, WeightKind::liwv, ss);
  const std::string text = ss.str();
  REQUIRE(text.find("weights=liwv") == 0);
  REQUIRE(text.find("block 1: 1 2") != std::string::npos);
  REQUIRE(text.find("block 2: 3 4") != std::string::npos);
  REQUIRE(text.find("2 2\n1 0\n0 1\n") != std::string::npos);
}

TEST_CASE("heatmap endpoints: zero matrix white, maximal entry black") {
  REQUIRE(heatmap_pixel(0.0, 0.0, 0.5) == 255);
  REQUIRE(heatmap_pixel(1.0, 1.0, 0.5) == 0);
  REQUIRE(heatmap_pixel(0.0, 1.0, 0.5) == 255);
  std::stringstream ss;
  write_heatmap(Matrix::Zero(2, 2), HeatmapConfig{0.5, false}, ss);
  const std::string img = ss.str();
  REQUIRE(img.rfind("P5\n2 2\n255\n", 0) == 0);
  for (std::size_t i = img.size() - 4; i < img.size(); ++i)
    REQUIRE(static_cast<unsigned char>(img[i]) == 255);
}

TEST_CASE("ascii heatmaps stay within the 70-column limit") {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(9, 40);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 40; ++j) m(i, j) = unif(rng);
  std::stringstream ss;
  write_heatmap(m, HeatmapConfig{0.5, true}, ss);
  std::string line;
  std::getline(ss, line);
  REQUIRE(line == "P2");
  while (std::getline(ss, line)) REQUIRE(line.size() <= 70);
}

TEST_CASE("heatmap of a permuted planted sample shows dark diagonal blocks") {
  EnsembleSpec spec;
  spec.sizes = {20, 20, 10};
  spec.p = 0.95;
  spec.q = 0.0095;
  spec.kind = EnsembleKind::uniform;
  spec.seed = 4096;
  spec.permute = false;  // blocks contiguous: compare block pixel means directly
  const EnsembleSample s = generate(spec);
  const int n = s.t.size();
  const double tmax = s.t.mat().maxCoeff();
  double in_px = 0.0, off_px = 0.0;
  long nin = 0, noff = 0;
  for (const IndexSet& c : s.truth.partition)
    for (int i : c.indices())
      for (int j = 0; j < n; ++j) {
        const double px = heatmap_pixel(s.t(i, j), tmax, 0.5);
        if (c.contains(j)) {
          in_px += px;
          ++nin;
        } else {
          off_px += px;
          ++noff;
        }
      }
  REQUIRE(in_px / static_cast<double>(nin) < off_px / static_cast<double>(noff));
}

TEST_CASE("heatmap rejects negative entries and nonpositive gamma") {
  Matrix m(1, 1);
  m << -0.5;
  std::stringstream ss;
  REQUIRE_THROWS_AS(write_heatmap(m, HeatmapConfig{0.5, false}, ss), std::invalid_argument);
  m << 0.5;
  REQUIRE_THROWS_AS(write_heatmap(m, HeatmapConfig{0.0, false}, ss), std::invalid_argument);
}

TEST_CASE("largest strongly connected component extraction") {
  // 0 -> 1 -> 2 -> 0 is a 3-cycle; 3 -> 4 and 4 -> 3 form a 2-cycle;
  // 5 only feeds into the 3-cycle and is its own component.
  Matrix a = Matrix::Zero(6, 6);
  a(0, 1) = a(1, 2) = a(2, 0) = 1.0;
  a(3, 4) = a(4, 3) = 1.0;
  a(5, 0) = 1.0;
  const IndexSet scc = largest_scc(a);
  REQUIRE(scc.indices() == std::vector<int>{0, 1, 2});
}

TEST_CASE("largest scc of a strongly connected walk is everything") {
  const Matrix a = bipartite_embed(deep_south_biadjacency());
  REQUIRE(largest_scc(a).size() == 32);
}

TEST_CASE("read_network dispatches by kind") {
  const Matrix dense = read_network(std::string(LSV_DATA_DIR) + "/courtois.mat",
                                    NetworkKind::dense);
  REQUIRE(dense.rows() == 8);
  const Matrix d = read_network(std::string(LSV_DATA_DIR) + "/deepsouth.bip",
                                NetworkKind::bipartite);
  REQUIRE(d.rows() == 18);
  REQUIRE_THROWS(read_network("/nonexistent/file.mat", NetworkKind::dense));
}
