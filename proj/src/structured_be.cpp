/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/structured_be.hpp"

#include <Eigen/SparseQR>

#include <cmath>

#include "spbe/unstructured_be.hpp"

namespace spbe {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct UnitEntry {
  Index i, j;
  double c;
};

// Matrix entries touched by generator coordinate k.
std::vector<UnitEntry> unit_entries(GeneratorKind kind, Index rows, Index k) {
  const MatrixEntry e = generator_entry(kind, rows, k);
  switch (kind) {
    case GeneratorKind::Full: return {{e.row, e.col, 1.0}};
    case GeneratorKind::SymLower:
      if (e.row == e.col) return {{e.row, e.col, 1.0}};
      return {{e.row, e.col, 1.0}, {e.col, e.row, 1.0}};
    case GeneratorKind::SkewStrictLower: return {{e.row, e.col, 1.0}, {e.col, e.row, -1.0}};
  }
  return {};
}

const RealMatrix& mask_of(const SparsityPattern& s, Block b) {
  switch (b) {
    case Block::E: return s.theta_e;
    case Block::F: return s.theta_f;
    case Block::H: return s.theta_h;
    default: return s.theta_g;
  }
}

ColumnLayout build_layout(const GsppSystem& system, const SparsityPattern& pattern,
                          const Weights& w, Field field, bool sparse) {
  const StructureCase c = system.structure();
  const Index n = system.n(), m = system.m();
  ColumnLayout layout;
  layout.structure = c;
  layout.field = field;
  layout.sparsity_preserved = sparse;
  layout.n = n;
  layout.m = m;

  auto add = [&](Block b, Part part, GeneratorKind kind, Index rows, Index cols) {
    if (field == Field::Real && part == Part::Imag) return;
    ColumnSegment seg{b, part, kind, rows, cols, layout.nominal_columns,
                      generator_length(kind, rows, cols), weight_for(w, b, c), false, {}, 0};
    seg.deleted = seg.weight.is_excluded();
    const bool is_matrix = b != Block::Q && b != Block::R;
    RealVector keep = is_matrix ? build_mask_diagonals(mask_of(pattern, b), kind)
                                : RealVector::Ones(seg.nominal_length);
    if (!seg.deleted) {
      seg.offset = layout.columns;
      for (Index k = 0; k < seg.nominal_length; ++k) {
        if (keep(k) == 0.0) continue;
        seg.active.push_back(k);
        layout.nominal_index.push_back(seg.nominal_offset + k);
      }
      layout.columns += seg.length();
    }
    layout.nominal_columns += seg.nominal_length;
    layout.segments.push_back(std::move(seg));
  };

  auto add_square = [&](Block b, bool hermitian, Index order) {
    if (hermitian) {
      add(b, Part::Real, GeneratorKind::SymLower, order, order);
      add(b, Part::Imag, GeneratorKind::SkewStrictLower, order, order);
    } else {
      add(b, Part::Real, GeneratorKind::Full, order, order);
      add(b, Part::Imag, GeneratorKind::Full, order, order);
    }
  };
  auto add_full = [&](Block b, Index rows, Index cols) {
    add(b, Part::Real, GeneratorKind::Full, rows, cols);
    add(b, Part::Imag, GeneratorKind::Full, rows, cols);
  };

  add_square(Block::E, hermitian_e(c), n);
  add_full(Block::F, m, n);
  if (!shares_f(c)) add_full(Block::H, m, n);
  add_square(Block::G, hermitian_g(c), m);
  add_full(Block::Q, n, 1);
  add_full(Block::R, m, 1);
  return layout;
}

// Row offsets of Re/Im parts of the Q and R residual blocks.
struct RowMap {
  bool complex;
  Index re_q, im_q, re_r, im_r;
};

RowMap row_map(Field field, Index n, Index m) {
  if (field == Field::Complex) return {true, 0, n, 2 * n, 2 * n + m};
  return {false, 0, -1, n, -1};
}

void require_real(const GsppSystem& system, const CandidateSolution& sol) {
  if (!system.is_real()) {
    throw Error(ErrorCode::InvalidArgument, "real reduction needs real blocks and right-hand side");
  }
  if (!sol.is_real()) {
    throw Error(ErrorCode::InvalidArgument, "real reduction needs a real candidate solution");
  }
}

}  // namespace

double ColumnSegment::unscale(Index coordinate) const {
  double d = 1.0;
  if (kind == GeneratorKind::SkewStrictLower) {
    d = std::sqrt(2.0);
  } else if (kind == GeneratorKind::SymLower) {
    const MatrixEntry e = generator_entry(kind, rows, coordinate);
    d = e.row == e.col ? 1.0 : std::sqrt(2.0);
  }
  return 1.0 / (weight.value() * d);
}

Index ColumnLayout::nominal_matrix_columns() const {
  Index total = 0;
  for (const auto& s : segments)
    if (s.block != Block::Q && s.block != Block::R) total += s.nominal_length;
  return total;
}

AssembledSystem assemble(const GsppSystem& system, const CandidateSolution& sol,
                         const SparsityPattern& pattern, const Weights& w, Field field) {
  sol.check_against(system);
  pattern.validate(system);
  w.validate(system.structure());
  if (field == Field::Real) require_real(system, sol);

  const Index n = system.n(), m = system.m();
  const bool sparse = !(pattern.theta_e.array() == 1.0).all() ||
                      !(pattern.theta_f.array() == 1.0).all() ||
                      !(pattern.theta_h.array() == 1.0).all() ||
                      !(pattern.theta_g.array() == 1.0).all();
  AssembledSystem out;
  out.layout = build_layout(system, pattern, w, field, sparse);
  const ColumnLayout& layout = out.layout;
  const RowMap rm = row_map(field, n, m);
  const bool share = shares_f(system.structure());

  const RealVector& ur = sol.u().re();
  const RealVector& ui = sol.u().im();
  const RealVector& pr = sol.p().re();
  const RealVector& pi = sol.p().im();

  Triplets t;
  Index col = 0;
  // Contribution of a unit entry of the real or imaginary part of a block
  // multiplying vector (vr + i vi) into row a of the given residual block.
  auto put = [&](Part part, Index base_re, Index base_im, Index a, double vr, double vi,
                 double coeff) {
    if (vr == 0.0 && vi == 0.0) return;
    if (part == Part::Real) {
      t.emplace_back(base_re + a, col, coeff * vr);
      if (rm.complex) t.emplace_back(base_im + a, col, coeff * vi);
    } else {
      t.emplace_back(base_re + a, col, -coeff * vi);
      t.emplace_back(base_im + a, col, coeff * vr);
    }
  };

  for (const ColumnSegment& seg : layout.segments) {
    if (seg.deleted) continue;
    for (Index k : seg.active) {
      if (seg.block == Block::Q || seg.block == Block::R) {
        const double inv_beta = 1.0 / seg.weight.value();
        const bool q = seg.block == Block::Q;
        const Index base = seg.part == Part::Real ? (q ? rm.re_q : rm.re_r)
                                                  : (q ? rm.im_q : rm.im_r);
        t.emplace_back(base + k, col, -inv_beta);
        ++col;
        continue;
      }
      const double s = seg.unscale(k);
      for (const UnitEntry& e : unit_entries(seg.kind, seg.rows, k)) {
        const double c = e.c * s;
        switch (seg.block) {
          case Block::E: put(seg.part, rm.re_q, rm.im_q, e.i, ur(e.j), ui(e.j), c); break;
          case Block::F:
            // F* carries the conjugate: its imaginary part flips sign.
            put(seg.part, rm.re_q, rm.im_q, e.j, pr(e.i), pi(e.i),
                seg.part == Part::Real ? c : -c);
            if (share) put(seg.part, rm.re_r, rm.im_r, e.i, ur(e.j), ui(e.j), c);
            break;
          case Block::H: put(seg.part, rm.re_r, rm.im_r, e.i, ur(e.j), ui(e.j), c); break;
          case Block::G: put(seg.part, rm.re_r, rm.im_r, e.i, pr(e.j), pi(e.j), c); break;
          default: break;
        }
      }
      ++col;
    }
  }

  out.A.resize(layout.rows(), layout.columns);
  out.A.setFromTriplets(t.begin(), t.end());
  out.A.prune(0.0);
  out.A.makeCompressed();

  const ResidualPair res = residuals(system, sol);
  out.rhs.resize(layout.rows());
  if (rm.complex) {
    out.rhs << res.Q.re(), res.Q.im(), res.R.re(), res.R.im();
  } else {
    out.rhs << res.Q.re(), res.R.re();
  }

  // A residual row with no admissible column cannot be absorbed.
  RealVector row_nnz = RealVector::Zero(layout.rows());
  for (Index k = 0; k < out.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(out.A, k); it; ++it) row_nnz(it.row()) += 1.0;
  for (Index i = 0; i < layout.rows(); ++i) {
    if (row_nnz(i) == 0.0 && out.rhs(i) != 0.0) {
      const bool in_q = rm.complex ? (i < 2 * n) : (i < n);
      throw Error(ErrorCode::Infeasible,
                  std::string("no admissible perturbation can absorb the residual in the ") +
                      (in_q ? "q" : "r") + " rows (all perturbable blocks there are Excluded)");
    }
  }
  return out;
}

namespace {

void check_rank(const RealVector& diag, double tol) {
  if (diag.size() == 0) return;
  const double largest = diag.cwiseAbs().maxCoeff();
  const double smallest = diag.cwiseAbs().minCoeff();
  if (!(smallest > tol * largest)) {
    throw Error(ErrorCode::RankDeficient,
                "constraint matrix is rank deficient (check Excluded weights)");
  }
}

// Removes identically zero rows; their right-hand side must vanish.
std::pair<SparseMatrix, RealVector> drop_zero_rows(const SparseMatrix& A, const RealVector& rhs) {
  std::vector<Index> keep_of(A.rows(), -1);
  std::vector<char> nonzero(A.rows(), 0);
  for (Index k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (it.value() != 0.0) nonzero[it.row()] = 1;
  Index kept = 0;
  for (Index i = 0; i < A.rows(); ++i) {
    if (nonzero[i]) {
      keep_of[i] = kept++;
    } else if (rhs(i) != 0.0) {
      throw Error(ErrorCode::Infeasible, "zero row with nonzero right-hand side");
    }
  }
  if (kept == A.rows()) return {A, rhs};
  Triplets t;
  RealVector b(kept);
  for (Index i = 0; i < A.rows(); ++i)
    if (keep_of[i] >= 0) b(keep_of[i]) = rhs(i);
  for (Index k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (keep_of[it.row()] >= 0) t.emplace_back(keep_of[it.row()], it.col(), it.value());
  SparseMatrix out(kept, A.cols());
  out.setFromTriplets(t.begin(), t.end());
  return {out, b};
}

RealVector solve_dense(const RealMatrix& A, const RealVector& rhs, double tol) {
  const Index r = A.rows();
  const Index c = A.cols();
  if (c < r) throw Error(ErrorCode::RankDeficient, "more constraints than unknowns");
  Eigen::ColPivHouseholderQR<RealMatrix> qr(A.transpose());
  const auto R = qr.matrixQR().topLeftCorner(r, r);
  check_rank(R.diagonal(), tol);
  RealVector y = qr.colsPermutation().transpose() * rhs;
  R.transpose().triangularView<Eigen::Lower>().solveInPlace(y);
  RealVector full = RealVector::Zero(c);
  full.head(r) = y;
  return qr.householderQ() * full;
}

RealVector solve_sparse(const SparseMatrix& A, const RealVector& rhs, double tol) {
  const Index r = A.rows();
  const Index c = A.cols();
  if (c < r) throw Error(ErrorCode::RankDeficient, "more constraints than unknowns");
  SparseMatrix at = A.transpose();
  at.makeCompressed();
  Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
  qr.compute(at);
  if (qr.info() != Eigen::Success || qr.rank() < r) {
    throw Error(ErrorCode::RankDeficient, "constraint matrix is rank deficient (sparse QR)");
  }
  SparseMatrix R = qr.matrixR().topLeftCorner(r, r);
  check_rank(RealVector(R.diagonal()), tol);
  RealVector y = qr.colsPermutation().transpose() * rhs;
  SparseMatrix rt = R.transpose();
  rt.triangularView<Eigen::Lower>().solveInPlace(y);
  RealVector full = RealVector::Zero(c);
  full.head(r) = y;
  return qr.matrixQ() * full;
}

}  // namespace

RealVector min_norm_solve(const SparseMatrix& A, const RealVector& rhs,
                          const MinNormOptions& options) {
  if (rhs.size() != A.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs length != rows of A");
  auto [a, b] = drop_zero_rows(A, rhs);
  if (a.rows() == 0) return RealVector::Zero(A.cols());
  if (a.rows() * a.cols() <= options.dense_threshold) {
    return solve_dense(RealMatrix(a), b, options.rank_tolerance);
  }
  return solve_sparse(a, b, options.rank_tolerance);
}

RealVector min_norm_solve(const RealMatrix& A, const RealVector& rhs,
                          const MinNormOptions& options) {
  return min_norm_solve(SparseMatrix(A.sparseView()), rhs, options);
}

RealVector min_norm_solve(const AssembledSystem& sys, const MinNormOptions& options) {
  return min_norm_solve(sys.A, sys.rhs, options);
}

PerturbationSet reconstruct_perturbations(const RealVector& z, const ColumnLayout& layout) {
  if (z.size() != layout.columns) {
    throw Error(ErrorCode::DimensionMismatch, "z length does not match the column layout");
  }
  const Index n = layout.n, m = layout.m;
  struct Parts {
    RealMatrix re, im;
  };
  Parts e{RealMatrix::Zero(n, n), RealMatrix::Zero(n, n)};
  Parts f{RealMatrix::Zero(m, n), RealMatrix::Zero(m, n)};
  Parts h{RealMatrix::Zero(m, n), RealMatrix::Zero(m, n)};
  Parts g{RealMatrix::Zero(m, m), RealMatrix::Zero(m, m)};
  Parts q{RealMatrix::Zero(n, 1), RealMatrix::Zero(n, 1)};
  Parts r{RealMatrix::Zero(m, 1), RealMatrix::Zero(m, 1)};
  auto target = [&](Block b) -> Parts& {
    switch (b) {
      case Block::E: return e;
      case Block::F: return f;
      case Block::H: return h;
      case Block::G: return g;
      case Block::Q: return q;
      default: return r;
    }
  };

  for (const ColumnSegment& seg : layout.segments) {
    if (seg.deleted) continue;
    GeneratorVector gen{RealVector::Zero(seg.nominal_length), seg.kind, seg.rows, seg.cols};
    for (Index a = 0; a < seg.length(); ++a) {
      const Index k = seg.active[a];
      gen.data(k) = z(seg.offset + a) * seg.unscale(k);
    }
    Parts& dst = target(seg.block);
    (seg.part == Part::Real ? dst.re : dst.im) = unvec(gen);
  }

  PerturbationSet p;
  p.dE = ComplexMatrix(e.re, e.im);
  p.dF = ComplexMatrix(f.re, f.im);
  p.dH = shares_f(layout.structure) ? p.dF : ComplexMatrix(h.re, h.im);
  p.dG = ComplexMatrix(g.re, g.im);
  p.dq = ComplexVector(q.re.col(0), q.im.col(0));
  p.dr = ComplexVector(r.re.col(0), r.im.col(0));
  return p;
}

PerturbationDiagnostics verify_perturbation(const GsppSystem& system,
                                            const CandidateSolution& sol,
                                            const PerturbationSet& p,
                                            const SparsityPattern* pattern, const Weights* w) {
  sol.check_against(system);
  const Index n = system.n(), m = system.m();
  auto shape = [](const ComplexMatrix& x, Index r, Index c, const char* name) {
    if (x.rows() != r || x.cols() != c) {
      throw Error(ErrorCode::DimensionMismatch, std::string("perturbation ") + name + " has wrong shape");
    }
  };
  shape(p.dE, n, n, "dE");
  shape(p.dF, m, n, "dF");
  shape(p.dH, m, n, "dH");
  shape(p.dG, m, m, "dG");
  if (p.dq.size() != n || p.dr.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation dq/dr has wrong length");
  }

  const StructureCase c = system.structure();
  const ComplexMatrix& dh = shares_f(c) ? p.dF : p.dH;
  const CVector u = sol.u().to_complex();
  const CVector pv = sol.p().to_complex();
  const CVector top = (system.E().to_complex() + p.dE.to_complex()) * u +
                      (system.F().to_complex() + p.dF.to_complex()).adjoint() * pv -
                      system.q().to_complex() - p.dq.to_complex();
  const CVector bottom = (system.H().to_complex() + dh.to_complex()) * u +
                         (system.G().to_complex() + p.dG.to_complex()) * pv -
                         system.r().to_complex() - p.dr.to_complex();

  PerturbationDiagnostics d;
  d.perturbed_residual_norm = std::hypot(top.norm(), bottom.norm());
  d.residual_scale = system.frobenius_norm() * sol.stacked().norm() + system.rhs().norm();
  auto herm_dev = [](const ComplexMatrix& x) {
    return std::hypot((x.re() - x.re().transpose()).norm(), (x.im() + x.im().transpose()).norm());
  };
  if (hermitian_e(c)) d.hermitian_deviation_e = herm_dev(p.dE);
  if (hermitian_g(c)) d.hermitian_deviation_g = herm_dev(p.dG);
  if (shares_f(c)) {
    d.shared_f_deviation = std::hypot((p.dH.re() - p.dF.re()).norm(), (p.dH.im() - p.dF.im()).norm());
  }

  auto count_nonzero_outside = [](const ComplexMatrix& x, const RealMatrix& mask) {
    Index count = 0;
    for (Index j = 0; j < x.cols(); ++j)
      for (Index i = 0; i < x.rows(); ++i)
        if (mask(i, j) == 0.0 && (x.re()(i, j) != 0.0 || x.im()(i, j) != 0.0)) ++count;
    return count;
  };
  if (pattern) {
    pattern->validate(system);
    d.mask_violations = count_nonzero_outside(p.dE, pattern->theta_e) +
                        count_nonzero_outside(p.dF, pattern->theta_f) +
                        count_nonzero_outside(p.dG, pattern->theta_g);
    if (!shares_f(c)) d.mask_violations += count_nonzero_outside(p.dH, pattern->theta_h);
  }
  if (w) {
    w->validate(c);
    auto nonzeros = [](const ComplexMatrix& x) {
      return static_cast<Index>(((x.re().array() != 0.0) || (x.im().array() != 0.0)).count());
    };
    auto excluded = [&](Block b) { return weight_for(*w, b, c).is_excluded(); };
    if (excluded(Block::E)) d.excluded_violations += nonzeros(p.dE);
    if (excluded(Block::F)) d.excluded_violations += nonzeros(p.dF);
    if (!shares_f(c) && excluded(Block::H)) d.excluded_violations += nonzeros(p.dH);
    if (excluded(Block::G)) d.excluded_violations += nonzeros(p.dG);
    if (excluded(Block::Q)) {
      d.excluded_violations += nonzeros(ComplexMatrix(p.dq.re(), p.dq.im()));
    }
    if (excluded(Block::R)) {
      d.excluded_violations += nonzeros(ComplexMatrix(p.dr.re(), p.dr.im()));
    }
    if (d.excluded_violations == 0) d.weighted_norm = weighted_norm(p, *w, c);
  }
  return d;
}

namespace {

BackwardErrorReport run_structured(const GsppSystem& system, const CandidateSolution& sol,
                                   const Weights& w, bool preserve_sparsity, Field field,
                                   const StructuredOptions& options) {
  const SparsityPattern pattern = preserve_sparsity
                                      ? derive_pattern(system)
                                      : SparsityPattern::all_ones(system.n(), system.m());
  const AssembledSystem sys = assemble(system, sol, pattern, w, field);
  const RealVector z = min_norm_solve(sys, options.solve);

  BackwardErrorReport report;
  report.xi = z.norm();
  report.structure = system.structure();
  report.sparsity_preserved = preserve_sparsity;
  report.real_path = field == Field::Real;
  report.perturbations = reconstruct_perturbations(z, sys.layout);
  report.diagnostics = verify_perturbation(system, sol, report.perturbations, &pattern, &w);
  report.perturbed_residual_norm = report.diagnostics.perturbed_residual_norm;
  report.weighted_norm_of_perturbations = report.diagnostics.weighted_norm.value_or(0.0);
  report.rows = sys.A.rows();
  report.columns = sys.A.cols();
  return report;
}

}  // namespace

BackwardErrorReport compute_structured_be(const GsppSystem& system,
                                          const CandidateSolution& sol, const Weights& w,
                                          bool preserve_sparsity,
                                          const StructuredOptions& options) {
  return run_structured(system, sol, w, preserve_sparsity, Field::Complex, options);
}

BackwardErrorReport reduce_real(const GsppSystem& system, const CandidateSolution& sol,
                                const Weights& w, bool preserve_sparsity,
                                const StructuredOptions& options) {
  require_real(system, sol);
  return run_structured(system, sol, w, preserve_sparsity, Field::Real, options);
}

}  // namespace spbe
