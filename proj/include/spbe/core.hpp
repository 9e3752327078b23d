/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>

#include "spbe/error.hpp"

namespace spbe {

using Index = Eigen::Index;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Complex matrix held as separate real and imaginary parts.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(Index rows, Index cols);
  ComplexMatrix(RealMatrix re, RealMatrix im);
  static ComplexMatrix from_real(RealMatrix re);
  static ComplexMatrix from_complex(const CMatrix& z);

  const RealMatrix& re() const { return re_; }
  const RealMatrix& im() const { return im_; }
  Index rows() const { return re_.rows(); }
  Index cols() const { return re_.cols(); }

  CMatrix to_complex() const;
  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  bool is_real() const;
  /// Exact test: re symmetric and im skew-symmetric.
  bool is_hermitian() const;
  bool operator==(const ComplexMatrix& other) const;

 private:
  RealMatrix re_;
  RealMatrix im_;
};

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(Index size);
  ComplexVector(RealVector re, RealVector im);
  static ComplexVector from_real(RealVector re);
  static ComplexVector from_complex(const CVector& z);

  const RealVector& re() const { return re_; }
  const RealVector& im() const { return im_; }
  Index size() const { return re_.size(); }

  CVector to_complex() const;
  double norm() const;
  bool is_real() const;
  bool operator==(const ComplexVector& other) const;

 private:
  RealVector re_;
  RealVector im_;
};

enum class StructureCase { CaseI = 1, CaseII = 2, CaseIII = 3 };

/// E carries a Hermitian constraint.
bool hermitian_e(StructureCase c);
/// G carries a Hermitian constraint.
bool hermitian_g(StructureCase c);
/// H is tied to F (cases I and II).
bool shares_f(StructureCase c);
std::string_view case_name(StructureCase c);
/// Accepts "i", "ii", "iii" (any case) or "1", "2", "3".
StructureCase parse_case(std::string_view text);

/// Block system [[E, F*], [H, G]] [u; p] = [q; r]. Validated on construction
/// and immutable afterwards.
class GsppSystem {
 public:
  GsppSystem(ComplexMatrix e, ComplexMatrix f, ComplexMatrix h, ComplexMatrix g,
             ComplexVector q, ComplexVector r, StructureCase structure);
  /// Cases I and II: H is taken equal to F.
  static GsppSystem with_shared_f(ComplexMatrix e, ComplexMatrix f, ComplexMatrix g,
                                  ComplexVector q, ComplexVector r,
                                  StructureCase structure);

  const ComplexMatrix& E() const { return e_; }
  const ComplexMatrix& F() const { return f_; }
  const ComplexMatrix& H() const { return h_; }
  const ComplexMatrix& G() const { return g_; }
  const ComplexVector& q() const { return q_; }
  const ComplexVector& r() const { return r_; }
  StructureCase structure() const { return case_; }
  Index n() const { return e_.rows(); }
  Index m() const { return g_.rows(); }

  /// Same blocks under another structure case (revalidated).
  GsppSystem with_case(StructureCase structure) const;
  /// Same blocks with a different right-hand side.
  GsppSystem with_rhs(ComplexVector q, ComplexVector r) const;

  double frobenius_norm() const;
  CMatrix dense() const;
  CVector rhs() const;
  CVector apply(const CVector& x) const;
  bool is_real() const;

 private:
  ComplexMatrix e_, f_, h_, g_;
  ComplexVector q_, r_;
  StructureCase case_;
};

class CandidateSolution {
 public:
  CandidateSolution() = default;
  CandidateSolution(ComplexVector u, ComplexVector p);
  static CandidateSolution from_stacked(const CVector& x, Index n);

  const ComplexVector& u() const { return u_; }
  const ComplexVector& p() const { return p_; }
  CVector stacked() const;
  bool is_real() const;
  /// Throws DimensionMismatch unless the lengths fit `system`.
  void check_against(const GsppSystem& system) const;

 private:
  ComplexVector u_, p_;
};

/// 0/1 masks for E, F, H, G.
struct SparsityPattern {
  RealMatrix theta_e, theta_f, theta_h, theta_g;

  static SparsityPattern all_ones(Index n, Index m);
  void validate(const GsppSystem& system) const;
};

RealMatrix sign_pattern(const ComplexMatrix& x);
SparsityPattern derive_pattern(const GsppSystem& system);

/// A positive finite weight, or Excluded (block not perturbed).
class Weight {
 public:
  Weight() = default;
  static Weight of(double value);
  static Weight excluded() { return Weight(); }
  bool is_excluded() const { return !value_.has_value(); }
  double value() const;
  bool operator==(const Weight& other) const = default;

 private:
  explicit Weight(double v) : value_(v) {}
  std::optional<double> value_;
};

/// alpha1..alpha4 weight E, F, H/G depending on the case; beta1, beta2 weight q, r.
/// Cases I and II: alpha3 weights G and alpha4 stays Excluded.
/// Case III: alpha3 weights H and alpha4 weights G.
struct Weights {
  Weight alpha1, alpha2, alpha3, alpha4, beta1, beta2;

  static Weights uniform(StructureCase c, double value = 1.0);
  void validate(StructureCase c) const;
};

enum class Block { E, F, H, G, Q, R };
std::string_view block_name(Block b);
/// Weight that applies to block `b` under case `c`.
Weight weight_for(const Weights& w, Block b, StructureCase c);

enum class ZeroRhsPolicy { Error, Exclude };
Weights default_relative_weights(const GsppSystem& system,
                                 ZeroRhsPolicy policy = ZeroRhsPolicy::Error);

struct PerturbationSet {
  ComplexMatrix dE, dF, dH, dG;
  ComplexVector dq, dr;

  static PerturbationSet zeros(Index n, Index m);
};

/// Weighted Frobenius norm of a perturbation. Cases I and II ignore dH.
double weighted_norm(const PerturbationSet& p, const Weights& w, StructureCase c);

struct PerturbationDiagnostics {
  double perturbed_residual_norm = 0.0;
  double residual_scale = 0.0;  // ‖B‖_F‖x̂‖ + ‖f‖
  double hermitian_deviation_e = 0.0;
  double hermitian_deviation_g = 0.0;
  double shared_f_deviation = 0.0;  // ‖dH − dF‖_F in cases I, II
  Index mask_violations = 0;
  Index excluded_violations = 0;
  std::optional<double> weighted_norm;
};

struct BackwardErrorReport {
  double xi = 0.0;
  StructureCase structure = StructureCase::CaseI;
  bool sparsity_preserved = false;
  bool real_path = false;
  PerturbationSet perturbations;
  double perturbed_residual_norm = 0.0;
  double weighted_norm_of_perturbations = 0.0;
  PerturbationDiagnostics diagnostics;
  Index rows = 0;
  Index columns = 0;
};

}  // namespace spbe
