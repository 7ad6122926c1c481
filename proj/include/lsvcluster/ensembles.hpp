#ifndef LSVCLUSTER_ENSEMBLES_HPP
#define LSVCLUSTER_ENSEMBLES_HPP

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lsvcluster/matrix.hpp"

namespace lsvc {

enum class EnsembleKind { uniform, bernoulli };

inline std::string to_string(EnsembleKind kind) {
  return kind == EnsembleKind::uniform ? "uniform" : "bernoulli";
}

/// Parameters of a planted-cluster random stochastic matrix: entries are
/// drawn Unif[0, 2p] / Bernoulli(p) inside a cluster and Unif[0, 2q] /
/// Bernoulli(q) across clusters, then rows are normalised to sum one.
struct EnsembleSpec {
  std::vector<int> sizes;
  double p = 0.0;
  double q = 0.0;
  EnsembleKind kind = EnsembleKind::uniform;
  std::uint64_t seed = 0;
  bool permute = true;

  int total_size() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

  void validate() const {
    require(!sizes.empty(), "EnsembleSpec: sizes must be nonempty");
    for (int s : sizes) require(s >= 1, "EnsembleSpec: each cluster size must be >= 1");
    require(p > 0.0 && p <= 1.0, "EnsembleSpec: p must be in (0, 1]");
    require(q >= 0.0 && q < 1.0, "EnsembleSpec: q must be in [0, 1)");
    require(p > q, "EnsembleSpec: p must exceed q");
  }
};

/// The planted partition in the coordinates of the returned matrix, plus the
/// permutation that was applied (perm[new] = old; identity when disabled).
struct GroundTruth {
  std::vector<IndexSet> partition;
  std::vector<int> permutation;
};

struct EnsembleSample {
  StochasticMatrix t;
  GroundTruth truth;
};

/// Stateless per-trial seed derivation (splitmix64 of master + trial offset);
/// distinct trial indices give independent streams.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::uint64_t z = master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

// Unnormalised, unpermuted sample with clusters in contiguous index blocks.
// Consumes the leading part of the rng stream shared with generate().
inline Matrix raw_ensemble_matrix(const EnsembleSpec& spec, std::mt19937_64& rng) {
  const int n = spec.total_size();
  std::vector<int> label(static_cast<std::size_t>(n));
  {
    int pos = 0;
    for (std::size_t c = 0; c < spec.sizes.size(); ++c)
      for (int k = 0; k < spec.sizes[c]; ++k) label[static_cast<std::size_t>(pos++)] = static_cast<int>(c);
  }
  Matrix x(n, n);
  if (spec.kind == EnsembleKind::uniform) {
    std::uniform_real_distribution<double> in(0.0, 2.0 * spec.p);
    std::uniform_real_distribution<double> cross(0.0, 2.0 * spec.q);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        x(i, j) = label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)]
                      ? in(rng)
                      : cross(rng);
  } else {
    std::bernoulli_distribution in(spec.p);
    std::bernoulli_distribution cross(spec.q);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        x(i, j) = label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)]
                      ? (in(rng) ? 1.0 : 0.0)
                      : (cross(rng) ? 1.0 : 0.0);
  }
  return x;
}

}  // namespace detail

/// The unnormalised entry matrix a sample starts from, before permutation and
/// row normalisation; clusters occupy contiguous index blocks.
inline Matrix generate_raw(const EnsembleSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  return detail::raw_ensemble_matrix(spec, rng);
}

/// Draws one sample: random entries by block membership, an optional uniform
/// random relabeling of the states, then row normalisation (zero rows become
/// uniform rows). Bit-reproducible from the seed.
inline EnsembleSample generate(const EnsembleSpec& spec) {
  spec.validate();
  const int n = spec.total_size();
  std::mt19937_64 rng(spec.seed);
  Matrix x = detail::raw_ensemble_matrix(spec, rng);

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (spec.permute) {
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix permuted(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        permuted(i, j) = x(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    x = std::move(permuted);
  }

  std::vector<std::vector<int>> members(spec.sizes.size());
  std::vector<int> cluster_of_old(static_cast<std::size_t>(n));
  {
    int pos = 0;
    for (std::size_t c = 0; c < spec.sizes.size(); ++c)
      for (int k = 0; k < spec.sizes[c]; ++k) cluster_of_old[static_cast<std::size_t>(pos++)] = static_cast<int>(c);
  }
  for (int i = 0; i < n; ++i)
    members[static_cast<std::size_t>(cluster_of_old[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])]
        .push_back(i);

  GroundTruth truth;
  truth.permutation = std::move(perm);
  truth.partition.reserve(members.size());
  for (auto& m : members) truth.partition.emplace_back(std::move(m), n);

  return EnsembleSample{row_normalize(x, ZeroRowPolicy::uniform), std::move(truth)};
}

}  // namespace lsvc

#endif  // LSVCLUSTER_ENSEMBLES_HPP
