/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/core.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace spbe {

namespace {

std::string dims(Index r, Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

void require_shape(const ComplexMatrix& x, Index rows, Index cols, std::string_view name) {
  if (x.rows() != rows || x.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " must be " + dims(rows, cols) + ", got " +
                    dims(x.rows(), x.cols()));
  }
}

void require_length(const ComplexVector& v, Index n, std::string_view name) {
  if (v.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " must have length " +
                                                   std::to_string(n) + ", got " +
                                                   std::to_string(v.size()));
  }
}

double sq(double x) { return x * x; }

}  // namespace

// ComplexMatrix

ComplexMatrix::ComplexMatrix(Index rows, Index cols)
    : re_(RealMatrix::Zero(rows, cols)), im_(RealMatrix::Zero(rows, cols)) {}

ComplexMatrix::ComplexMatrix(RealMatrix re, RealMatrix im)
    : re_(std::move(re)), im_(std::move(im)) {
  if (re_.rows() != im_.rows() || re_.cols() != im_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "real and imaginary parts differ in shape");
  }
}

ComplexMatrix ComplexMatrix::from_real(RealMatrix re) {
  RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
  return ComplexMatrix(std::move(re), std::move(im));
}

ComplexMatrix ComplexMatrix::from_complex(const CMatrix& z) {
  return ComplexMatrix(z.real(), z.imag());
}

CMatrix ComplexMatrix::to_complex() const {
  CMatrix z(rows(), cols());
  z.real() = re_;
  z.imag() = im_;
  return z;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  return ComplexMatrix(re_.transpose(), -im_.transpose());
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(re_.squaredNorm() + im_.squaredNorm());
}

bool ComplexMatrix::is_real() const { return (im_.array() == 0.0).all(); }

bool ComplexMatrix::is_hermitian() const {
  if (rows() != cols()) return false;
  return re_ == re_.transpose() && im_ == -im_.transpose();
}

bool ComplexMatrix::operator==(const ComplexMatrix& other) const {
  return rows() == other.rows() && cols() == other.cols() && re_ == other.re_ &&
         im_ == other.im_;
}

// ComplexVector

ComplexVector::ComplexVector(Index size)
    : re_(RealVector::Zero(size)), im_(RealVector::Zero(size)) {}

ComplexVector::ComplexVector(RealVector re, RealVector im)
    : re_(std::move(re)), im_(std::move(im)) {
  if (re_.size() != im_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "real and imaginary parts differ in length");
  }
}

ComplexVector ComplexVector::from_real(RealVector re) {
  RealVector im = RealVector::Zero(re.size());
  return ComplexVector(std::move(re), std::move(im));
}

ComplexVector ComplexVector::from_complex(const CVector& z) {
  return ComplexVector(z.real(), z.imag());
}

CVector ComplexVector::to_complex() const {
  CVector z(size());
  z.real() = re_;
  z.imag() = im_;
  return z;
}

double ComplexVector::norm() const { return std::sqrt(re_.squaredNorm() + im_.squaredNorm()); }

bool ComplexVector::is_real() const { return (im_.array() == 0.0).all(); }

bool ComplexVector::operator==(const ComplexVector& other) const {
  return size() == other.size() && re_ == other.re_ && im_ == other.im_;
}

// StructureCase

bool hermitian_e(StructureCase c) { return c != StructureCase::CaseII; }
bool hermitian_g(StructureCase c) { return c != StructureCase::CaseI; }
bool shares_f(StructureCase c) { return c != StructureCase::CaseIII; }

std::string_view case_name(StructureCase c) {
  switch (c) {
    case StructureCase::CaseI: return "i";
    case StructureCase::CaseII: return "ii";
    case StructureCase::CaseIII: return "iii";
  }
  return "?";
}

StructureCase parse_case(std::string_view text) {
  std::string t;
  for (char ch : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (t == "i" || t == "1" || t == "casei") return StructureCase::CaseI;
  if (t == "ii" || t == "2" || t == "caseii") return StructureCase::CaseII;
  if (t == "iii" || t == "3" || t == "caseiii") return StructureCase::CaseIII;
  throw Error(ErrorCode::InvalidArgument, "unknown structure case '" + std::string(text) + "'");
}

// GsppSystem

GsppSystem::GsppSystem(ComplexMatrix e, ComplexMatrix f, ComplexMatrix h, ComplexMatrix g,
                       ComplexVector q, ComplexVector r, StructureCase structure)
    : e_(std::move(e)),
      f_(std::move(f)),
      h_(std::move(h)),
      g_(std::move(g)),
      q_(std::move(q)),
      r_(std::move(r)),
      case_(structure) {
  const Index n = e_.rows();
  const Index m = g_.rows();
  if (n < 1 || m < 1) throw Error(ErrorCode::DimensionMismatch, "n and m must be at least 1");
  require_shape(e_, n, n, "E");
  require_shape(f_, m, n, "F");
  require_shape(h_, m, n, "H");
  require_shape(g_, m, m, "G");
  require_length(q_, n, "q");
  require_length(r_, m, "r");
  if (hermitian_e(case_) && !e_.is_hermitian()) {
    throw Error(ErrorCode::StructureViolation,
                "E must be Hermitian in case " + std::string(case_name(case_)));
  }
  if (hermitian_g(case_) && !g_.is_hermitian()) {
    throw Error(ErrorCode::StructureViolation,
                "G must be Hermitian in case " + std::string(case_name(case_)));
  }
  if (shares_f(case_) && !(h_ == f_)) {
    throw Error(ErrorCode::StructureViolation,
                "H must equal F in case " + std::string(case_name(case_)));
  }
}

GsppSystem GsppSystem::with_shared_f(ComplexMatrix e, ComplexMatrix f, ComplexMatrix g,
                                     ComplexVector q, ComplexVector r,
                                     StructureCase structure) {
  ComplexMatrix h = f;
  return GsppSystem(std::move(e), std::move(f), std::move(h), std::move(g), std::move(q),
                    std::move(r), structure);
}

GsppSystem GsppSystem::with_case(StructureCase structure) const {
  return GsppSystem(e_, f_, h_, g_, q_, r_, structure);
}

GsppSystem GsppSystem::with_rhs(ComplexVector q, ComplexVector r) const {
  return GsppSystem(e_, f_, h_, g_, std::move(q), std::move(r), case_);
}

double GsppSystem::frobenius_norm() const {
  return std::sqrt(sq(e_.frobenius_norm()) + sq(f_.frobenius_norm()) +
                   sq(h_.frobenius_norm()) + sq(g_.frobenius_norm()));
}

CMatrix GsppSystem::dense() const {
  const Index n = this->n(), m = this->m();
  CMatrix b(n + m, n + m);
  b.topLeftCorner(n, n) = e_.to_complex();
  b.topRightCorner(n, m) = f_.to_complex().adjoint();
  b.bottomLeftCorner(m, n) = h_.to_complex();
  b.bottomRightCorner(m, m) = g_.to_complex();
  return b;
}

CVector GsppSystem::rhs() const {
  CVector f(n() + m());
  f << q_.to_complex(), r_.to_complex();
  return f;
}

CVector GsppSystem::apply(const CVector& x) const {
  const Index n = this->n(), m = this->m();
  if (x.size() != n + m) throw Error(ErrorCode::DimensionMismatch, "vector length must be n+m");
  const CVector u = x.head(n), p = x.tail(m);
  CVector y(n + m);
  y.head(n) = e_.to_complex() * u + f_.to_complex().adjoint() * p;
  y.tail(m) = h_.to_complex() * u + g_.to_complex() * p;
  return y;
}

bool GsppSystem::is_real() const {
  return e_.is_real() && f_.is_real() && h_.is_real() && g_.is_real() && q_.is_real() &&
         r_.is_real();
}

// CandidateSolution

CandidateSolution::CandidateSolution(ComplexVector u, ComplexVector p)
    : u_(std::move(u)), p_(std::move(p)) {}

CandidateSolution CandidateSolution::from_stacked(const CVector& x, Index n) {
  if (n < 0 || n > x.size()) throw Error(ErrorCode::DimensionMismatch, "split index out of range");
  return CandidateSolution(ComplexVector::from_complex(x.head(n)),
                           ComplexVector::from_complex(x.tail(x.size() - n)));
}

CVector CandidateSolution::stacked() const {
  CVector x(u_.size() + p_.size());
  x << u_.to_complex(), p_.to_complex();
  return x;
}

bool CandidateSolution::is_real() const { return u_.is_real() && p_.is_real(); }

void CandidateSolution::check_against(const GsppSystem& system) const {
  require_length(u_, system.n(), "u");
  require_length(p_, system.m(), "p");
}

// SparsityPattern

SparsityPattern SparsityPattern::all_ones(Index n, Index m) {
  return {RealMatrix::Ones(n, n), RealMatrix::Ones(m, n), RealMatrix::Ones(m, n),
          RealMatrix::Ones(m, m)};
}

void SparsityPattern::validate(const GsppSystem& system) const {
  const Index n = system.n(), m = system.m();
  auto check = [](const RealMatrix& t, Index r, Index c, std::string_view name) {
    if (t.rows() != r || t.cols() != c) {
      throw Error(ErrorCode::DimensionMismatch, "mask for " + std::string(name) + " must be " +
                                                     dims(r, c));
    }
    if (!(t.array() == 0.0 || t.array() == 1.0).all()) {
      throw Error(ErrorCode::InvalidArgument,
                  "mask for " + std::string(name) + " has entries outside {0,1}");
    }
  };
  check(theta_e, n, n, "E");
  check(theta_f, m, n, "F");
  check(theta_h, m, n, "H");
  check(theta_g, m, m, "G");
  if (hermitian_e(system.structure()) && theta_e != theta_e.transpose()) {
    throw Error(ErrorCode::StructureViolation, "mask for Hermitian E must be symmetric");
  }
  if (hermitian_g(system.structure()) && theta_g != theta_g.transpose()) {
    throw Error(ErrorCode::StructureViolation, "mask for Hermitian G must be symmetric");
  }
  if (shares_f(system.structure()) && theta_h != theta_f) {
    throw Error(ErrorCode::StructureViolation, "masks for F and H must agree when H = F");
  }
}

RealMatrix sign_pattern(const ComplexMatrix& x) {
  return (x.re().array() != 0.0 || x.im().array() != 0.0).cast<double>();
}

SparsityPattern derive_pattern(const GsppSystem& system) {
  return {sign_pattern(system.E()), sign_pattern(system.F()), sign_pattern(system.H()),
          sign_pattern(system.G())};
}

// Weights

Weight Weight::of(double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "weights must be finite and positive");
  }
  return Weight(value);
}

double Weight::value() const {
  if (!value_) throw Error(ErrorCode::InvalidArgument, "weight is Excluded");
  return *value_;
}

Weights Weights::uniform(StructureCase c, double value) {
  Weight w = Weight::of(value);
  Weights out{w, w, w, Weight::excluded(), w, w};
  if (c == StructureCase::CaseIII) out.alpha4 = w;
  return out;
}

void Weights::validate(StructureCase c) const {
  if (c != StructureCase::CaseIII && !alpha4.is_excluded()) {
    throw Error(ErrorCode::InvalidArgument, "alpha4 is only used in case iii");
  }
}

std::string_view block_name(Block b) {
  switch (b) {
    case Block::E: return "E";
    case Block::F: return "F";
    case Block::H: return "H";
    case Block::G: return "G";
    case Block::Q: return "q";
    case Block::R: return "r";
  }
  return "?";
}

Weight weight_for(const Weights& w, Block b, StructureCase c) {
  const bool three = c == StructureCase::CaseIII;
  switch (b) {
    case Block::E: return w.alpha1;
    case Block::F: return w.alpha2;
    case Block::H: return three ? w.alpha3 : w.alpha2;
    case Block::G: return three ? w.alpha4 : w.alpha3;
    case Block::Q: return w.beta1;
    case Block::R: return w.beta2;
  }
  return Weight::excluded();
}

Weights default_relative_weights(const GsppSystem& system, ZeroRhsPolicy policy) {
  auto recip = [](double norm) { return norm > 0.0 ? Weight::of(1.0 / norm) : Weight::excluded(); };
  const double nq = system.q().norm();
  const double nr = system.r().norm();
  if (policy == ZeroRhsPolicy::Error && (nq == 0.0 || nr == 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("relative weight for ") + (nq == 0.0 ? "q" : "r") +
                    " is undefined: zero norm (request exclusion of right-hand-side "
                    "perturbations to proceed)");
  }
  Weights w;
  w.alpha1 = recip(system.E().frobenius_norm());
  w.alpha2 = recip(system.F().frobenius_norm());
  if (system.structure() == StructureCase::CaseIII) {
    w.alpha3 = recip(system.H().frobenius_norm());
    w.alpha4 = recip(system.G().frobenius_norm());
  } else {
    w.alpha3 = recip(system.G().frobenius_norm());
    w.alpha4 = Weight::excluded();
  }
  w.beta1 = recip(nq);
  w.beta2 = recip(nr);
  return w;
}

// PerturbationSet

PerturbationSet PerturbationSet::zeros(Index n, Index m) {
  return {ComplexMatrix(n, n), ComplexMatrix(m, n), ComplexMatrix(m, n), ComplexMatrix(m, m),
          ComplexVector(n),    ComplexVector(m)};
}

double weighted_norm(const PerturbationSet& p, const Weights& w, StructureCase c) {
  double total = 0.0;
  auto add = [&](Block b, double norm) {
    Weight wt = weight_for(w, b, c);
    if (wt.is_excluded()) {
      if (norm != 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "perturbation of Excluded block " + std::string(block_name(b)) + " is nonzero");
      }
      return;
    }
    total += sq(wt.value() * norm);
  };
  add(Block::E, p.dE.frobenius_norm());
  add(Block::F, p.dF.frobenius_norm());
  if (c == StructureCase::CaseIII) add(Block::H, p.dH.frobenius_norm());
  add(Block::G, p.dG.frobenius_norm());
  add(Block::Q, p.dq.norm());
  add(Block::R, p.dr.norm());
  return std::sqrt(total);
}

}  // namespace spbe
