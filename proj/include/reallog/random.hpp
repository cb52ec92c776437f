#pragma once

#include <cstdint>
#include <random>

#include "reallog/core_linalg.hpp"

namespace reallog {

using Rng = std::mt19937_64;

/// Deterministic generator for trial `stream` of a run seeded with `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

Matrix random_orthogonal(Eigen::Index n, Rng& rng);

/// U * diag(s) * V^T with U, V Haar-orthogonal and singular values drawn
/// log-uniformly from [1, max_cond], so cond_2 < max_cond by construction.
Matrix random_conditioned(Eigen::Index n, double max_cond, Rng& rng);

/// 2-norm condition number via SVD; infinity for singular input.
double condition_number(const Matrix& a);

double uniform(double lo, double hi, Rng& rng);
int uniform_int(int lo, int hi, Rng& rng);

}  // namespace reallog
