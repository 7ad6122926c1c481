// Command-line front end: spectral cluster detection and diagnostics for
// finite Markov chains.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsvcluster/lsvcluster.hpp"

namespace {

using namespace lsvc;

struct GlobalArgs {
  double tol = 0.1;
  std::string weight = "liwv";
  std::uint64_t seed = 0;
  int trials = 1000;
  std::string format = "dense";
  bool directed = false;
  double gamma = 0.5;
  bool fix_zero_rows = false;
  int max_depth = -1;
  std::string out;
  bool largest_scc_flag = false;
  bool ascii = false;
};

NetworkKind parse_kind(const std::string& format) {
  if (format == "dense") return NetworkKind::dense;
  if (format == "edgelist") return NetworkKind::edgelist;
  if (format == "bipartite") return NetworkKind::bipartite;
  throw CLI::ValidationError("--format must be dense, edgelist or bipartite");
}

WeightKind parse_weight(const std::string& weight) {
  if (weight == "ones") return WeightKind::ones;
  if (weight == "liwv") return WeightKind::liwv;
  if (weight == "stationary") return WeightKind::stationary;
  throw CLI::ValidationError("--weight must be liwv, ones or stationary");
}

Matrix load_raw(const std::string& path, const GlobalArgs& g) {
  Matrix raw = read_network(path, parse_kind(g.format), g.directed);
  if (parse_kind(g.format) == NetworkKind::bipartite) raw = bipartite_embed(raw);
  if (g.largest_scc_flag) raw = principal_submatrix(raw, largest_scc(raw));
  return raw;
}

StochasticMatrix load_chain(const std::string& path, const GlobalArgs& g) {
  return row_normalize(load_raw(path, g),
                       g.fix_zero_rows ? ZeroRowPolicy::uniform : ZeroRowPolicy::error);
}

std::ostream& output_stream(const GlobalArgs& g, std::ofstream& file) {
  if (g.out.empty()) return std::cout;
  file = detail::open_output(g.out);
  return file;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_report(const BoundReport& r, bool& any_fail) {
  std::cout << r.name << " lhs=" << fmt(r.lhs) << " rhs=" << fmt(r.rhs)
            << " slack=" << fmt(r.slack) << ' ' << (r.holds ? "PASS" : "FAIL") << '\n';
  if (!r.holds) any_fail = true;
}

int cmd_spectrum(const std::string& path, const GlobalArgs& g) {
  const StochasticMatrix t = load_chain(path, g);
  const Vector s = full_svd(laplacian(t.mat())).singular_values;
  std::ofstream file;
  std::ostream& out = output_stream(g, file);
  for (Eigen::Index i = 0; i < s.size(); ++i) out << detail::format_double(s(i)) << '\n';
  return 0;
}

int cmd_cluster(const std::string& path, const GlobalArgs& g) {
  const StochasticMatrix t = load_chain(path, g);
  const ClusterResult result = lsv_cluster(t, g.tol, g.max_depth);
  std::ofstream file;
  std::ostream& out = output_stream(g, file);
  write_clusters(to_cluster_file(result), out);
  return 0;
}

int cmd_coupling(const std::string& path, const GlobalArgs& g) {
  const StochasticMatrix t = load_chain(path, g);
  const ClusterResult result = lsv_cluster(t, g.tol, g.max_depth);
  const WeightKind kind = parse_weight(g.weight);
  const CouplingMatrix w = coupling_matrix(t, result.clusters, make_weight_vector(t, result, kind));
  std::ofstream file;
  std::ostream& out = output_stream(g, file);
  write_coupling(w, kind, out);
  return 0;
}

int cmd_generate(const EnsembleSpec& spec, const GlobalArgs& g, const std::string& truth_out) {
  const EnsembleSample sample = generate(spec);
  write_matrix_text(sample.t.mat(), g.out);
  ClusterFile truth;
  truth.clusters = sample.truth.partition;
  truth.unclustered = IndexSet({}, sample.t.size());
  truth.clustered = true;
  const std::string tpath = truth_out.empty() ? g.out + ".truth" : truth_out;
  auto out = detail::open_output(tpath);
  write_clusters(truth, out);
  return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& empirical_path) {
  const ClusterFile ground = read_clusters(truth_path);
  const ClusterFile empirical = read_clusters(empirical_path);
  int n = 0;
  for (const auto& c : ground.clusters) n = std::max(n, c.ambient_size());
  for (const auto& c : empirical.clusters) n = std::max(n, c.ambient_size());
  n = std::max({n, ground.unclustered.ambient_size(), empirical.unclustered.ambient_size()});
  const double errors = count_errors(ground.clusters, empirical.clusters, n);
  std::cout << "clusters_ground: " << ground.clusters.size() << '\n'
            << "clusters_empirical: " << empirical.clusters.size() << '\n'
            << "errors: " << fmt(errors) << '\n'
            << "fully_recovered: "
            << (fully_recovered(ground.clusters, empirical.clusters) ? "true" : "false") << '\n';
  return 0;
}

int cmd_bench(const EnsembleSpec& spec, const GlobalArgs& g) {
  const BenchRow row = bench(spec, g.tol, g.trials);
  const char* label = spec.kind == EnsembleKind::uniform ? "NCUE" : "NCBE";
  std::cout << "ensemble\tavg_clusters\tavg_avg_diag_liwv\tavg_avg_diag_ones\t"
               "avg_min_diag_liwv\tavg_min_diag_ones\tpct_fully_recovered\tavg_errors\n";
  std::cout << label << " p=" << fmt(spec.p) << " q=" << fmt(spec.q) << " tau=" << fmt(g.tol)
            << '\t' << fmt(row.avg_clusters) << '\t' << fmt(row.avg_avg_diag_liwv) << '\t'
            << fmt(row.avg_avg_diag_ones) << '\t' << fmt(row.avg_min_diag_liwv) << '\t'
            << fmt(row.avg_min_diag_ones) << '\t' << fmt(row.pct_fully_recovered) << '\t'
            << fmt(row.avg_errors) << '\n';
  return 0;
}

// Theorem-derived diagnostics for one chain and its computed clustering.
void chain_battery(const StochasticMatrix& t, double tau, bool& any_fail) {
  const int n = t.size();
  print_report(sigma1_bound(t), any_fail);

  const ClusterResult result = lsv_cluster(t, tau);
  const CouplingMatrix w1 = coupling_matrix(t, result.clusters, Vector::Ones(n));

  if (result.unclustered.empty() && result.clusters.size() >= 2) {
    const double delta = 1.0 - diag_stats(w1).min + 1e-12;
    const NearDecoupledDecomposition nd = near_decoupled_decomp(t, result.clusters, delta);
    for (const BoundReport& r : nd.reports) print_report(r, any_fail);

    const StochasticMatrix b_dnf{nd.b_dnf};
    print_report(noblowup_check(b_dnf, t, result.clusters.front()), any_fail);
    print_report(diff_norm_bound(t, b_dnf), any_fail);
    const Matrix e = t.mat() - nd.b_dnf;
    if (inf_norm(e) > 0.0) {
      const BlowupDecomposition bd = blowup(e);
      const double rt =
          (bd.epsilon * (bd.t1tilde.mat() - bd.t2tilde.mat()) - e).cwiseAbs().maxCoeff();
      print_report(make_report("blowup_roundtrip", rt, 0.0), any_fail);
    }
  }

  if (result.tree && result.tree->split) {
    const auto pair = second_smallest_pair(laplacian(t.mat()));
    if (pair) {
      const SignSplit split = sign_split(pair->left, sign_threshold(pair->left));
      const int m = split.positive.size() + split.negative.size();
      Vector u1(split.positive.size()), u2(split.negative.size());
      for (int i = 0; i < split.positive.size(); ++i) u1(i) = pair->left(split.positive[i]);
      for (int i = 0; i < split.negative.size(); ++i) u2(i) = -pair->left(split.negative[i]);
      const CouplingMatrix wc =
          coupling_with_singletons(t, split.positive, split.negative, u1, u2);
      const double bound = 1.0 - pair->sigma * std::sqrt(static_cast<double>(m));
      print_report(make_report("split_coupling_lower_bound", bound,
                               std::max(wc.values(0, 0), wc.values(1, 1))),
                   any_fail);

      // Perron root lower bounds for the two sides of the split
      const IndexSet* sides[2] = {&split.positive, &split.negative};
      const double sgn[2] = {1.0, -1.0};
      for (int b = 0; b < 2; ++b) {
        const IndexSet& s = *sides[b];
        const PerronResult pr = spectral_radius(principal_submatrix(t.mat(), s));
        double ux = 0.0, vx = 0.0;
        for (int i = 0; i < s.size(); ++i) {
          ux += sgn[b] * pair->left(s[i]) * pr.vec(i);
          vx += sgn[b] * pair->right(s[i]) * pr.vec(i);
        }
        if (ux <= 0.0) continue;  // Perron vector of a reducible block can miss the support
        print_report(make_report("perron_lower_bound_" + std::to_string(b + 1),
                                 1.0 - pair->sigma * (vx / ux), pr.rho),
                     any_fail);
      }
    }
  }
}

int cmd_bounds(const std::optional<std::string>& path, const GlobalArgs& g) {
  bool any_fail = false;
  if (path) {
    chain_battery(load_chain(*path, g), g.tol, any_fail);
  } else {
    // built-in constructions
    {
      Matrix ext = Matrix::Zero(4, 4);
      ext.col(1).setOnes();
      const BoundReport r = sigma1_bound(StochasticMatrix(ext));
      print_report(make_report("sigma1_extremal_equality", std::abs(r.lhs - r.rhs), 0.0),
                   any_fail);
    }
    {
      const StochasticMatrix t = analytic_two_block(5, 0.1);
      const StochasticMatrix s = analytic_two_block_decoupled(5);
      print_report(count_small_singvals(t, 2, 0.1), any_fail);
      std::vector<int> first{0, 1, 2, 3, 4}, second{5, 6, 7, 8, 9};
      const std::vector<IndexSet> parts{IndexSet(first, 10), IndexSet(second, 10)};
      const BoundReport fs = frob_vs_sigma(t, s, parts);
      print_report(fs, any_fail);
      print_report(make_report("frob_vs_sigma_equality", std::abs(fs.rhs - fs.lhs), 0.0),
                   any_fail);
    }
    chain_battery(courtois_matrix(), 0.1, any_fail);
    for (int n : {10, 4}) {
      SmallDiagParams p{n, 0.2, 0.3, 1e-3, 1e-6};
      for (const BoundReport& r : smalldiag_example(p).reports) print_report(r, any_fail);
    }
    print_report(maxlem_grid_check(1, 2, 100000), any_fail);
    print_report(maxlem_grid_check(3, 7, 100000), any_fail);
    print_report(maxlem_grid_check(1, 100, 100000), any_fail);
    {
      std::mt19937_64 rng(g.seed ? g.seed : 0xb0747551u);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      auto random_stochastic = [&](int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) m(i, j) = unif(rng);
          m.row(i) /= m.row(i).sum();
        }
        return StochasticMatrix(std::move(m));
      };
      const StochasticMatrix t1 = random_stochastic(5), t2 = random_stochastic(5);
      const BlowupDecomposition bd = blowup(t1.mat() - t2.mat());
      const double rt = (bd.epsilon * (bd.t1tilde.mat() - bd.t2tilde.mat()) -
                         (t1.mat() - t2.mat()))
                            .cwiseAbs()
                            .maxCoeff();
      print_report(make_report("blowup_roundtrip", rt, 0.0), any_fail);
      print_report(diff_norm_bound(t1, t2), any_fail);

      Matrix sub = random_stochastic(6).mat() * 0.8;
      print_report(dnf_optimality_check(SubStochasticMatrix(std::move(sub)), 1000), any_fail);
    }
  }
  return any_fail ? 3 : 0;
}

int cmd_heatmap(const std::string& path, const GlobalArgs& g) {
  const Matrix m = load_raw(path, g);
  HeatmapConfig config;
  config.gamma = g.gamma;
  config.ascii = g.ascii;
  if (g.out.empty()) throw CLI::ValidationError("heatmap requires --out");
  write_heatmap(m, config, g.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster detection in finite Markov chains via Laplacian singular vectors"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs g;
  app.add_option("--tol,-t", g.tol, "Splitting tolerance for the second smallest singular value");
  app.add_option("--weight", g.weight, "Coupling weight vector: liwv, ones or stationary");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--trials", g.trials, "Number of benchmark trials");
  app.add_option("--format", g.format, "Input format: dense, edgelist or bipartite");
  app.add_flag("--directed", g.directed, "Treat edge lists as directed");
  app.add_option("--gamma", g.gamma, "Heatmap gamma");
  app.add_flag("--fix-zero-rows", g.fix_zero_rows, "Replace zero rows by uniform rows");
  app.add_option("--max-depth", g.max_depth, "Maximum recursion depth (default: chain size)");
  app.add_option("--out", g.out, "Output path (default: stdout)");
  app.add_flag("--largest-scc", g.largest_scc_flag,
               "Restrict to the largest strongly connected component");
  app.add_flag("--ascii", g.ascii, "Write heatmaps as ASCII P2 instead of binary P5");

  std::string input, truth_path, empirical_path, truth_out;
  std::string sizes_csv = "100,100,50,25";
  EnsembleSpec spec;
  spec.p = 0.95;
  spec.q = 0.0095;
  std::string kind_name = "uniform";
  bool no_permute = false;

  CLI::App* spectrum = app.add_subcommand("spectrum", "Print all singular values of I - T");
  spectrum->add_option("input", input, "Network or matrix file")->required();

  CLI::App* cluster = app.add_subcommand("cluster", "Detect and print clusters");
  cluster->add_option("input", input, "Network or matrix file")->required();

  CLI::App* coupling = app.add_subcommand("coupling", "Cluster, then print the coupling matrix");
  coupling->add_option("input", input, "Network or matrix file")->required();

  CLI::App* generate_cmd = app.add_subcommand("generate", "Sample a planted-cluster chain");
  generate_cmd->add_option("--sizes", sizes_csv, "Comma-separated cluster sizes");
  generate_cmd->add_option("--p", spec.p, "In-cluster parameter");
  generate_cmd->add_option("--q", spec.q, "Cross-cluster parameter");
  generate_cmd->add_option("--kind", kind_name, "uniform or bernoulli");
  generate_cmd->add_flag("--no-permute", no_permute, "Keep clusters contiguous");
  generate_cmd->add_option("--truth-out", truth_out, "Ground truth path (default: <out>.truth)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score an empirical clustering");
  evaluate->add_option("truth", truth_path, "Ground truth cluster file")->required();
  evaluate->add_option("empirical", empirical_path, "Empirical cluster file")->required();

  CLI::App* bench_cmd = app.add_subcommand("bench", "Ensemble benchmark statistics");
  bench_cmd->add_option("--sizes", sizes_csv, "Comma-separated cluster sizes");
  bench_cmd->add_option("--p", spec.p, "In-cluster parameter");
  bench_cmd->add_option("--q", spec.q, "Cross-cluster parameter");
  bench_cmd->add_option("--kind", kind_name, "uniform or bernoulli");
  bench_cmd->add_flag("--no-permute", no_permute, "Keep clusters contiguous");

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "Run the theorem oracle battery (exit 3 on any FAIL)");
  bounds_cmd->add_option("input", input, "Optional chain to diagnose");

  CLI::App* heatmap = app.add_subcommand("heatmap", "Render a matrix as a graymap image");
  heatmap->add_option("input", input, "Network or matrix file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!(std::isfinite(g.tol) && g.tol >= 0.0))
      throw CLI::ValidationError("--tol must be finite and nonnegative");
    if (*spectrum) return cmd_spectrum(input, g);
    if (*cluster) return cmd_cluster(input, g);
    if (*coupling) return cmd_coupling(input, g);
    if (*generate_cmd || *bench_cmd) {
      spec.sizes.clear();
      std::stringstream ss(sizes_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) spec.sizes.push_back(std::stoi(tok));
      if (kind_name == "uniform")
        spec.kind = EnsembleKind::uniform;
      else if (kind_name == "bernoulli")
        spec.kind = EnsembleKind::bernoulli;
      else
        throw CLI::ValidationError("--kind must be uniform or bernoulli");
      spec.seed = g.seed;
      spec.permute = !no_permute;
      spec.validate();
      if (*bench_cmd) return cmd_bench(spec, g);
      if (g.out.empty()) throw CLI::ValidationError("generate requires --out");
      return cmd_generate(spec, g, truth_out);
    }
    if (*evaluate) return cmd_evaluate(truth_path, empirical_path);
    if (*bounds_cmd) {
      std::optional<std::string> p;
      if (!input.empty()) p = input;
      return cmd_bounds(p, g);
    }
    if (*heatmap) return cmd_heatmap(input, g);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
