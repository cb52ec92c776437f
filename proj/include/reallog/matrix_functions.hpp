#pragma once

#include "reallog/core_linalg.hpp"

namespace reallog {

enum class LogKind { Principal, PairedNegativeSemisimple };

std::string_view to_string(LogKind kind) noexcept;

struct LogResult {
  Matrix log_matrix;
  LogKind kind = LogKind::Principal;
  /// ||expm(log_matrix) - A||_F / ||A||_F, always computed.
  double roundtrip_residual = 0.0;
};

/// Scaling and squaring with diagonal Pade approximants of degree 3..13.
Matrix expm(const Matrix& x);

/// Principal square root of a quasi upper triangular matrix (real Schur
/// layout), computed block column by block column.
Matrix sqrtm_real(const Matrix& t, const Tolerances& tol = {});

/// Principal logarithm by inverse scaling and squaring on the real Schur
/// factor. Requires A in K.
LogResult logm_principal(const Matrix& a, const Tolerances& tol = {});

/// A real logarithm for A in K* whose negative eigenvalues are semisimple:
/// principal log on the K part, ln|mu| I_2 + pi J on each negative pair.
LogResult real_log_paired(const Matrix& a, const Tolerances& tol = {});

}  // namespace reallog
