#include "reallog/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "reallog/error.hpp"

namespace reallog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Radius within which rounding can scatter the eigenvalues of an m-fold
// defective eigenvalue, relative to ||A||_F. Only used to prune candidate
// clusters; acceptance is decided by the kernel chain.
double spread_radius(int m, const Tolerances& tol) {
  return std::max(tol.eig_cluster, 10.0 * std::pow(1e-12, 1.0 / m));
}

struct Cluster {
  std::vector<std::size_t> members;
  Complex mean;
  bool real = true;
  // Real clusters: ranks of (A - mean I)^k. Non-real clusters: ranks of
  // ((A - Re I)^2 + Im^2 I)^k, whose nullities count each conjugate pair twice.
  std::vector<int> ranks;
  bool valid = false;
};

// Block counts from a rank sequence r_0..r_{m+1}; `pair_factor` is 2 when the
// nullities double-count a conjugate pair.
std::map<int, int> counts_from_ranks(const std::vector<int>& ranks, int pair_factor) {
  std::map<int, int> counts;
  const int m = static_cast<int>(ranks.size()) - 2;
  for (int s = 1; s <= m; ++s) {
    const int c = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1];
    if (c != 0) counts[s] = c / pair_factor;
  }
  return counts;
}

bool chain_consistent(const std::vector<int>& ranks, int n, int m, int pair_factor) {
  if (static_cast<int>(ranks.size()) != m + 2) return false;
  if ((n - ranks[m]) != pair_factor * m) return false;
  if (ranks[m + 1] != ranks[m]) return false;
  for (int s = 1; s <= m; ++s) {
    const int c = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1];
    if (c < 0 || c % pair_factor != 0) return false;
  }
  return true;
}

void evaluate_cluster(const Matrix& a, double scale, const Tolerances& tol, Cluster& cl) {
  const Eigen::Index n = a.rows();
  const int m = static_cast<int>(cl.members.size());
  if (cl.real) {
    const Matrix b = a - cl.mean.real() * identity(n);
    const double threshold = tol.rank_rel * std::max(b.norm(), scale);
    cl.ranks = power_rank_sequence(b, m + 1, threshold);
    cl.valid = chain_consistent(cl.ranks, static_cast<int>(n), m, 1);
  } else {
    const Matrix shifted = a - cl.mean.real() * identity(n);
    const double beta = cl.mean.imag();
    const Matrix q = shifted * shifted + beta * beta * identity(n);
    const double threshold = tol.rank_rel * std::max(q.norm(), scale * scale);
    cl.ranks = power_rank_sequence(q, m + 1, threshold);
    cl.valid = chain_consistent(cl.ranks, static_cast<int>(n), m, 2);
  }
}

Cluster make_cluster(const Matrix& a, const std::vector<Complex>& values, std::vector<std::size_t> members,
                     double scale, const Tolerances& tol) {
  Cluster cl;
  cl.members = std::move(members);
  Complex sum{0.0, 0.0};
  for (auto idx : cl.members) sum += values[idx];
  cl.mean = sum / static_cast<double>(cl.members.size());
  cl.real = std::abs(cl.mean.imag()) <= tol.imag_zero * scale;
  if (cl.real) cl.mean = Complex(cl.mean.real(), 0.0);
  evaluate_cluster(a, scale, tol, cl);
  return cl;
}

std::vector<Cluster> cluster_spectrum(const Matrix& a, const Tolerances& tol) {
  tol.validate();
  const Spectrum spec = eigenvalues(a, tol);
  const double scale = tolerance_scale(a);
  const std::size_t n = spec.values.size();
  std::vector<char> assigned(n, 0);
  std::vector<Cluster> clusters;

  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < n; ++j)
      if (!assigned[j]) candidates.push_back(j);
    const Complex center = spec.values[i];
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t x, std::size_t y) {
      const double dx = std::abs(spec.values[x] - center), dy = std::abs(spec.values[y] - center);
      if (dx != dy) return dx < dy;
      return (x == i) > (y == i);
    });

    std::optional<Cluster> chosen;
    for (std::size_t m = candidates.size(); m >= 2; --m) {
      const double radius = std::abs(spec.values[candidates[m - 1]] - center);
      if (radius > 2.0 * spread_radius(static_cast<int>(m), tol) * scale) continue;
      Cluster cl = make_cluster(a, spec.values, {candidates.begin(), candidates.begin() + m}, scale, tol);
      if (cl.valid) {
        chosen = std::move(cl);
        break;
      }
    }
    if (!chosen) chosen = make_cluster(a, spec.values, {i}, scale, tol);
    for (auto idx : chosen->members) assigned[idx] = 1;
    clusters.push_back(std::move(*chosen));
  }
  return clusters;
}

EigTag tag_for(const Cluster& cl, double scale, const Tolerances& tol) {
  if (!cl.real) return EigTag::NonRealPair;
  const double v = cl.mean.real();
  if (std::abs(v) <= tol.imag_zero * scale) return EigTag::Zero;
  return v < 0.0 ? EigTag::NegativeReal : EigTag::PositiveReal;
}

JordanProfile profile_of(const Cluster& cl) {
  JordanProfile p;
  p.eigenvalue = cl.mean.real();
  p.block_counts = counts_from_ranks(cl.ranks, 1);
  return p;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct ClassifiedCluster {
  EigClass cls;
  const Cluster* cluster;
};

std::vector<ClassifiedCluster> classify_clusters(const Matrix& a, const std::vector<Cluster>& clusters,
                                                 const Tolerances& tol) {
  const double scale = tolerance_scale(a);
  std::vector<ClassifiedCluster> out;
  std::vector<char> consumed(clusters.size(), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (consumed[c]) continue;
    const Cluster& cl = clusters[c];
    const int m = static_cast<int>(cl.members.size());
    const EigTag tag = tag_for(cl, scale, tol);
    if (tag != EigTag::NonRealPair) {
      out.push_back({{cl.mean, tag, m}, &cl});
      continue;
    }
    // Fold the conjugate partner cluster into a single NonRealPair class.
    int total = m;
    for (std::size_t d = c + 1; d < clusters.size(); ++d) {
      if (consumed[d] || clusters[d].real) continue;
      if (std::abs(clusters[d].mean - std::conj(cl.mean)) <=
          2.0 * spread_radius(m, tol) * scale) {
        total += static_cast<int>(clusters[d].members.size());
        consumed[d] = 1;
        break;
      }
    }
    const Complex rep = cl.mean.imag() >= 0.0 ? cl.mean : std::conj(cl.mean);
    out.push_back({{rep, EigTag::NonRealPair, total}, &cl});
  }
  return out;
}

Matrix rotation_plus_identity(double delta) {
  Matrix r(2, 2);
  r << 1.0 - std::cos(delta), -std::sin(delta), std::sin(delta), 1.0 - std::cos(delta);
  return r;
}

double distance_to_negative_axis(Complex z) {
  if (z.real() >= 0.0) return std::abs(z);
  return std::abs(z.imag());
}

}  // namespace

std::string_view to_string(EigTag tag) noexcept {
  switch (tag) {
    case EigTag::PositiveReal: return "PositiveReal";
    case EigTag::NegativeReal: return "NegativeReal";
    case EigTag::Zero: return "Zero";
    case EigTag::NonRealPair: return "NonRealPair";
  }
  return "Unknown";
}

std::string_view to_string(MatrixSet set) noexcept {
  switch (set) {
    case MatrixSet::K: return "K";
    case MatrixSet::KStar: return "Kstar";
    case MatrixSet::Closure: return "closure";
  }
  return "Unknown";
}

int JordanProfile::algebraic_multiplicity() const {
  int total = 0;
  for (auto [size, count] : block_counts) total += size * count;
  return total;
}

int JordanProfile::geometric_multiplicity() const {
  int total = 0;
  for (auto [size, count] : block_counts) total += count;
  return total;
}

bool JordanProfile::semisimple() const {
  for (auto [size, count] : block_counts)
    if (size > 1 && count != 0) return false;
  return true;
}

int JordanProfile::first_odd_size() const {
  for (auto [size, count] : block_counts)
    if (count % 2 != 0) return size;
  return 0;
}

std::vector<EigClass> classify_spectrum(const Matrix& a, const Tolerances& tol) {
  const auto clusters = cluster_spectrum(a, tol);
  std::vector<EigClass> out;
  for (const auto& c : classify_clusters(a, clusters, tol)) out.push_back(c.cls);
  return out;
}

JordanProfile jordan_profile(const Matrix& a, double mu, const Tolerances& tol) {
  const auto clusters = cluster_spectrum(a, tol);
  const double scale = tolerance_scale(a);
  const Cluster* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& cl : clusters) {
    const double d = std::abs(cl.mean - Complex(mu, 0.0));
    if (d < best_dist) {
      best_dist = d;
      best = &cl;
    }
  }
  if (best == nullptr || !best->real ||
      best_dist > std::max(tol.eig_cluster, spread_radius(static_cast<int>(best->members.size()), tol)) * scale)
    throw Error(ErrorCode::NotAnEigenvalue, format_value(mu) + " is not a real eigenvalue within tolerance");
  if (!best->valid)
    throw Error(ErrorCode::InconsistentJordanProfile,
                "rank sequence at " + format_value(best->mean.real()) + " is inconsistent");
  return profile_of(*best);
}

MembershipVerdict in_K(const Matrix& a, const Tolerances& tol) {
  for (const auto& c : classify_spectrum(a, tol)) {
    if (c.tag == EigTag::Zero)
      return {false, "eigenvalue " + format_value(c.value.real()) + " is zero within tolerance"};
    if (c.tag == EigTag::NegativeReal)
      return {false, "eigenvalue " + format_value(c.value.real()) + " lies on the negative real axis"};
  }
  return {true, ""};
}

MembershipVerdict in_K_star(const Matrix& a, const Tolerances& tol) {
  const auto clusters = cluster_spectrum(a, tol);
  for (const auto& c : classify_clusters(a, clusters, tol)) {
    if (c.cls.tag == EigTag::Zero)
      return {false, "eigenvalue " + format_value(c.cls.value.real()) + " is zero: matrix is singular"};
    if (c.cls.tag != EigTag::NegativeReal) continue;
    const std::string where = "eigenvalue " + format_value(c.cls.value.real());
    if (!c.cluster->valid)
      return {false, where + ": Jordan structure is numerically ambiguous (inconsistent rank sequence)"};
    const JordanProfile p = profile_of(*c.cluster);
    if (const int s = p.first_odd_size(); s != 0)
      return {false, where + ", block size " + std::to_string(s) + " count " +
                         std::to_string(p.block_counts.at(s)) + " (odd block count)"};
  }
  return {true, ""};
}

MembershipVerdict in_closure(const Matrix& a, const Tolerances& tol) {
  const auto clusters = cluster_spectrum(a, tol);
  const Eigen::Index n = a.rows();
  for (const auto& c : classify_clusters(a, clusters, tol)) {
    if (c.cls.tag != EigTag::NegativeReal) continue;
    // Geometric multiplicity n - rank(A - mu I) is the first step of the chain.
    const int geometric = static_cast<int>(n) - c.cluster->ranks.at(1);
    if (geometric % 2 != 0)
      return {false, "eigenvalue " + format_value(c.cls.value.real()) + " has geometric multiplicity " +
                         std::to_string(geometric) + " (odd)"};
  }
  return {true, ""};
}

MembershipVerdict membership(MatrixSet set, const Matrix& a, const Tolerances& tol) {
  switch (set) {
    case MatrixSet::K: return in_K(a, tol);
    case MatrixSet::KStar: return in_K_star(a, tol);
    case MatrixSet::Closure: return in_closure(a, tol);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown matrix set");
}

NegativeSplit split_negative_semisimple(const Matrix& a, const Tolerances& tol) {
  require_square(a, "split_negative_semisimple");
  const Eigen::Index n = a.rows();
  const double scale = tolerance_scale(a);
  const auto clusters = cluster_spectrum(a, tol);
  const auto classes = classify_clusters(a, clusters, tol);

  std::vector<std::pair<double, int>> negatives;
  for (const auto& c : classes) {
    const std::string where = "eigenvalue " + format_value(c.cls.value.real());
    if (c.cls.tag == EigTag::Zero) throw Error(ErrorCode::NotInKStar, where + " is zero");
    if (c.cls.tag != EigTag::NegativeReal) continue;
    if (!c.cluster->valid) throw Error(ErrorCode::NotInKStar, where + " has an ambiguous Jordan structure");
    const JordanProfile p = profile_of(*c.cluster);
    if (!p.semisimple())
      throw Error(ErrorCode::UnsupportedJordanStructure, where + " is defective");
    if (p.first_odd_size() != 0)
      throw Error(ErrorCode::NotInKStar, where + " occurs an odd number of times");
    negatives.emplace_back(c.cls.value.real(), c.cls.cluster_multiplicity);
  }

  NegativeSplit split;
  Matrix product = identity(n);
  for (auto [mu, dim] : negatives) product = product * (a - mu * identity(n));
  int negative_total = 0;
  for (auto [mu, dim] : negatives) negative_total += dim;
  const Matrix complement =
      negatives.empty() ? identity(n)
                        : range_basis(product, tol.rank_rel * std::max(product.norm(), scale));
  if (complement.cols() != n - negative_total)
    throw Error(ErrorCode::InconsistentJordanProfile, "complementary invariant subspace has wrong dimension");

  split.basis.resize(n, n);
  split.basis.leftCols(complement.cols()) = complement;
  split.complement_dim = complement.cols();
  Eigen::Index col = complement.cols();
  for (auto [mu, dim] : negatives) {
    const Matrix b = a - mu * identity(n);
    const Matrix kernel = null_space_basis(b, tol.rank_rel * std::max(b.norm(), scale));
    if (kernel.cols() != dim)
      throw Error(ErrorCode::InconsistentJordanProfile,
                  "eigenspace of " + format_value(mu) + " has dimension " + std::to_string(kernel.cols()) +
                      ", expected " + std::to_string(dim));
    split.basis.middleCols(col, dim) = kernel;
    split.negative_blocks.push_back({mu, col, dim});
    col += dim;
  }
  split.basis_inv = invert(split.basis, tol);
  return split;
}

Matrix approximate_from_K(const Matrix& a, double eps, const Tolerances& tol) {
  require_square(a, "approximate_from_K");
  require_finite(a, "approximate_from_K");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (in_K(a, tol).in_set) return a;

  const NegativeSplit split = split_negative_semisimple(a, tol);
  const Eigen::Index n = a.rows();
  // Every pair is moved off the axis by the same imaginary part tau, so the
  // smallest |mu| does not end up closest to the axis.
  double largest = 0.0;
  for (const auto& blk : split.negative_blocks) largest = std::max(largest, std::abs(blk.mu));
  const auto shift_for = [&](double tau) {
    Matrix core = Matrix::Zero(n, n);
    for (const auto& blk : split.negative_blocks) {
      const double mag = std::abs(blk.mu);
      const double delta = std::asin(std::min(1.0, tau / mag));
      for (Eigen::Index p = 0; p < blk.dim; p += 2)
        core.block(blk.start + p, blk.start + p, 2, 2) = mag * rotation_plus_identity(delta);
    }
    return Matrix(split.basis * core * split.basis_inv);
  };

  // Slack below eps absorbs the rounding of forming a + shift.
  const double budget = (1.0 - 1e-6) * eps;
  double lo = largest;
  int halvings = 0;
  while (shift_for(lo).norm() > budget) {
    lo *= 0.5;
    if (++halvings > 200) throw Error(ErrorCode::ConvergenceFailure, "could not meet the requested distance");
  }
  // Largest feasible tau in [lo, 2 lo] keeps the approximant furthest from the axis.
  double hi = 2.0 * lo;
  for (int it = 0; it < 50 && halvings > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shift_for(mid).norm() <= budget ? lo : hi) = mid;
  }
  const Matrix candidate = a + shift_for(lo);
  if ((candidate - a).norm() > eps || !in_K(candidate, tol).in_set)
    throw Error(ErrorCode::ConvergenceFailure,
                "approximant within eps cannot be separated from the negative axis at these tolerances");
  return candidate;
}

double openness_radius(const Matrix& a, const Tolerances& tol) {
  if (const auto v = in_K(a, tol); !v.in_set) throw Error(ErrorCode::NotInK, v.witness);
  const Spectrum spec = eigenvalues(a, tol);
  double delta0 = std::numeric_limits<double>::infinity();
  for (const auto& z : spec.values) delta0 = std::min(delta0, distance_to_negative_axis(z));
  return 0.5 * delta0;
}

double conservative_perturbation_radius(const Matrix& a, const Tolerances& tol) {
  const double target = 0.1 * 2.0 * openness_radius(a, tol);
  const Eigen::Index n = a.rows();

  double bauer_fike = 0.0;
  Eigen::EigenSolver<Matrix> es(a, true);
  if (es.info() == Eigen::Success) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
    const auto& s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    if (smallest > 0.0 && std::isfinite(s(0) / smallest)) bauer_fike = target / (1.0 + s(0) / smallest);
  }

  Eigen::ComplexSchur<Matrix> cs(a);
  double henrici = 0.0;
  if (cs.info() == Eigen::Success) {
    Eigen::MatrixXcd strict = cs.matrixT().triangularView<Eigen::StrictlyUpper>();
    const double nn = strict.norm();
    double series = 0.0, power = 1.0;
    for (Eigen::Index k = 0; k < n; ++k, power *= nn) series += power;
    const double theta = std::min(target, std::pow(target, static_cast<double>(n)));
    henrici = theta / series;
  }
  return std::max(bauer_fike, henrici);
}

}  // namespace reallog
