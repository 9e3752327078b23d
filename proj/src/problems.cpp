/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/problems.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "spbe/vecops.hpp"

namespace spbe {

namespace {

using cd = std::complex<double>;
constexpr cd I(0.0, 1.0);

CMatrix rows_to_matrix(Index r, Index c, std::initializer_list<cd> values) {
  CMatrix m(r, c);
  auto it = values.begin();
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

CVector to_vector(std::initializer_list<cd> values) {
  CVector v(static_cast<Index>(values.size()));
  Index k = 0;
  for (cd x : values) v(k++) = x;
  return v;
}

ComplexMatrix cm(const CMatrix& z) { return ComplexMatrix::from_complex(z); }
ComplexVector cv(const CVector& z) { return ComplexVector::from_complex(z); }

Fixture example1() {
  const CMatrix E = rows_to_matrix(
      5, 5,
      {-0.7073, -0.2258 * I, -0.3326 + 0.4370 * I, -0.3111 - 0.1089 * I, -0.2558 * I,
       0.2258 * I, 1.6606, 1.0022, -0.0749, 0.2357 * I,
       -0.3326 - 0.4370 * I, 1.0022, 0.0, -1.5009, -0.1383 - 0.0928 * I,
       -0.3111 + 0.1089 * I, -0.0749, -1.5009, 0.0, -0.1 * I,
       0.2558 * I, -0.2357 * I, -0.1383 + 0.0928 * I, 0.1 * I, 0.0});
  const CMatrix F = rows_to_matrix(
      4, 5,
      {-0.0753 + 1.3412 * I, 0.0, 0.0, -1.3057, 0.0,
       -0.1974, 0.0, 2.9371, 0.3806 * I, 0.0,
       0.2232 + 1.4354 * I, 0.7996 * I, 0.3985, 0.0, 1.6102,
       0.3862, 0.0097, 0.0, 1.6286 * I, 0.1291 * I});
  const CMatrix G = rows_to_matrix(
      4, 4,
      {1.5246 - 0.1337 * I, 0.0, -0.6924, -0.0408 * I,
       0.0, -0.9025, 0.0, 0.0704,
       0.0, -0.6885 + 0.6028 * I, 0.7823 * I, 1.2309,
       0.2146 * I, 0.0, 0.0, -0.2746});
  const CVector q = to_vector({-0.8098 - 0.3969 * I, -1.3853 + 0.5947 * I, 0.0909 + 0.2202 * I,
                               -0.2140 - 0.7165 * I, 0.1509 + 0.0117 * I});
  const CVector r = to_vector(
      {-2.3554 - 0.9550 * I, 0.6201 - 0.7783 * I, 0.3106 + 1.5288 * I, -0.0908 - 1.8683 * I});
  const CVector u = to_vector({0.9249 + 1.6011 * I, -0.5210 + 0.2407 * I, 0.0189 + 0.2151 * I,
                               -1.5819 + 0.1480 * I, 0.5443 + 1.2113 * I});
  const CVector p = to_vector(
      {-1.2670 - 1.2768 * I, -0.7997 + 0.4628 * I, 0.4206 - 0.0082 * I, 1.1641 - 1.0531 * I});
  return {"example1",
          GsppSystem::with_shared_f(cm(E), cm(F), cm(G), cv(q), cv(r), StructureCase::CaseI),
          CandidateSolution(cv(u), cv(p)), std::nullopt};
}

Fixture example3() {
  const CMatrix E = rows_to_matrix(
      4, 4,
      {0.01 * I, 1e7 * (1.0 + I), 30.0 * (-1.0 + I), 0.0,
       100.0 * (1.0 + I), 0.0, 0.0, 1e5 * (-1.0 + I),
       50.0 * (1.0 + I), 100.0 * (1.0 + I), 0.0, 0.0,
       0.0, 200.0 * (1.0 - I), 1e5 * (1.0 + I), 0.01 * (1.0 + I)});
  const CMatrix F = rows_to_matrix(
      3, 4,
      {1e-5 * (1.0 + I), 1e7 * (1.0 + I), 0.0, 0.0,
       1e8 * (1.0 - I), 1e-5 * (1.0 + I), -1e-6 * (1.0 + I), 0.0,
       0.0, 1e5 * (1.0 + I), 1e-5 * (1.0 - I), 1e6 * (1.0 + I)});
  const CMatrix G = rows_to_matrix(
      3, 3, {1e5, 0.0, 100.0 + 0.01 * I, 0.0, 1e-6, 0.0, 100.0 - 0.01 * I, 0.0, -1.0});
  const CVector q = to_vector({1e4 * (1.0 + I), 10.0 * (1.0 + I), 0.0, 1e-6 * (1.0 + I)});
  const CVector r = to_vector({0.01 * (1.0 - I), 0.0, 0.0});
  const CVector u = to_vector({-0.0995 - 0.9904 * I, 0.0005 + 0.0003 * I,
                               -99.0353 + 9.9509 * I, 0.0});
  const CVector p = to_vector({-0.01 - 0.099 * I, 0.0, 0.9951 + 9.9035 * I});
  return {"example3",
          GsppSystem::with_shared_f(cm(E), cm(F), cm(G), cv(q), cv(r), StructureCase::CaseII),
          CandidateSolution(cv(u), cv(p)), std::nullopt};
}

RealMatrix tridiag(Index t, double sub, double diag, double super) {
  RealMatrix a = RealMatrix::Zero(t, t);
  for (Index i = 0; i < t; ++i) {
    a(i, i) = diag;
    if (i > 0) a(i, i - 1) = sub;
    if (i + 1 < t) a(i, i + 1) = super;
  }
  return a;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent streams per block so block sizes do not shift each other.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
}

ComplexMatrix random_general(CounterRng& rng, Index rows, Index cols, double density, bool real) {
  RealMatrix re = RealMatrix::Zero(rows, cols), im = RealMatrix::Zero(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const bool keep = rng.next_uniform() < density;
      const double a = rng.next_signed();
      const double b = rng.next_signed();
      if (!keep) continue;
      re(i, j) = a;
      if (!real) im(i, j) = b;
    }
  return ComplexMatrix(re, im);
}

ComplexMatrix random_hermitian(CounterRng& rng, Index order, double density, bool real) {
  // S lower triangular; S + S* doubles the real diagonal and mirrors the rest.
  RealMatrix re = RealMatrix::Zero(order, order), im = RealMatrix::Zero(order, order);
  for (Index j = 0; j < order; ++j)
    for (Index i = j; i < order; ++i) {
      const bool keep = rng.next_uniform() < density;
      const double a = rng.next_signed();
      const double b = rng.next_signed();
      if (!keep) continue;
      if (i == j) {
        re(i, i) = 2.0 * a;
      } else {
        re(i, j) = a;
        re(j, i) = a;
        if (!real) {
          im(i, j) = b;
          im(j, i) = -b;
        }
      }
    }
  return ComplexMatrix(re, im);
}

ComplexVector random_dense_vector(CounterRng& rng, Index size, bool real) {
  RealVector re(size), im = RealVector::Zero(size);
  for (Index i = 0; i < size; ++i) {
    re(i) = rng.next_signed();
    const double b = rng.next_signed();
    if (!real) im(i) = b;
  }
  return ComplexVector(re, im);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::InvalidArgument,
                "bad value '" + std::string(text) + "' for fixture parameter " + std::string(key));
  }
  return value;
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  return splitmix64(seed_ + (counter_++ + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::next_uniform() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

double CounterRng::next_signed() {
  const double k = static_cast<double>(next_u64() >> 11);
  return std::ldexp(k + 0.5, -52) - 1.0;
}

FixtureId FixtureId::example1() { return {FixtureKind::Example1}; }
FixtureId FixtureId::example3() { return {FixtureKind::Example3}; }
FixtureId FixtureId::example4(int t) {
  FixtureId id{FixtureKind::Example4};
  id.t = t;
  return id;
}
FixtureId FixtureId::random_sparse(std::uint64_t seed, Index n, Index m, double density,
                                   StructureCase structure, bool real) {
  FixtureId id{FixtureKind::RandomSparse};
  id.seed = seed;
  id.n = n;
  id.m = m;
  id.density = density;
  id.structure = structure;
  id.real = real;
  return id;
}

FixtureId FixtureId::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  FixtureId id;
  if (head == "example1") {
    id = example1();
  } else if (head == "example3") {
    id = example3();
  } else if (head == "example4") {
    id = example4(4);
  } else if (head == "random") {
    id = random_sparse(0, 3, 2, 1.0, StructureCase::CaseI);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + std::string(text) + "'");
  }
  std::string_view params = rest;
  while (!params.empty()) {
    const auto comma = params.find(',');
    const std::string_view item = params.substr(0, comma);
    params = comma == std::string_view::npos ? "" : params.substr(comma + 1);
    const auto eq = item.find('=');
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = eq == std::string_view::npos ? "" : item.substr(eq + 1);
    if (key == "t" && id.kind == FixtureKind::Example4) {
      id.t = parse_number<int>(key, val);
    } else if (id.kind == FixtureKind::RandomSparse && key == "seed") {
      id.seed = parse_number<std::uint64_t>(key, val);
    } else if (id.kind == FixtureKind::RandomSparse && key == "n") {
      id.n = parse_number<Index>(key, val);
    } else if (id.kind == FixtureKind::RandomSparse && key == "m") {
      id.m = parse_number<Index>(key, val);
    } else if (id.kind == FixtureKind::RandomSparse && key == "density") {
      id.density = parse_number<double>(key, val);
    } else if (id.kind == FixtureKind::RandomSparse && key == "case") {
      id.structure = parse_case(val);
    } else if (id.kind == FixtureKind::RandomSparse && key == "real" && val.empty()) {
      id.real = true;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown fixture parameter '" + std::string(item) + "'");
    }
  }
  id.validate();
  return id;
}

std::string FixtureId::name() const {
  std::ostringstream os;
  switch (kind) {
    case FixtureKind::Example1: return "example1";
    case FixtureKind::Example3: return "example3";
    case FixtureKind::Example4: os << "example4:t=" << t; break;
    case FixtureKind::RandomSparse:
      os << "random:seed=" << seed << ",n=" << n << ",m=" << m << ",density=" << density
         << ",case=" << case_name(structure) << (real ? ",real" : "");
      break;
  }
  return os.str();
}

void FixtureId::validate() const {
  if (kind == FixtureKind::Example4 && t < 2) {
    throw Error(ErrorCode::InvalidArgument, "example4 needs t >= 2");
  }
  if (kind == FixtureKind::RandomSparse) {
    if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "random fixture needs n, m >= 1");
    if (!(density > 0.0 && density <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
    }
  }
}

Fixture load_fixture(const FixtureId& id) {
  id.validate();
  switch (id.kind) {
    case FixtureKind::Example1: return example1();
    case FixtureKind::Example3: return example3();
    case FixtureKind::Example4: {
      GsppSystem sys = gen_stokes_like(id.t);
      const Index dim = sys.n() + sys.m();
      return {id.name(), std::move(sys), std::nullopt, CVector::Ones(dim)};
    }
    case FixtureKind::RandomSparse:
      return {id.name(),
              gen_random_sparse(id.seed, id.n, id.m, id.density, id.structure, id.real),
              gen_random_candidate(id.seed, id.n, id.m, id.real), std::nullopt};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fixture");
}

GsppSystem gen_stokes_like(int t) {
  if (t < 2) throw Error(ErrorCode::InvalidArgument, "t must be at least 2");
  const Index s = t;
  const double h = 1.0 / (t + 1.0);
  const RealMatrix eye = RealMatrix::Identity(s, s);
  const RealMatrix J = tridiag(s, -1.0, 2.0, -1.0) * (h * h);
  const RealMatrix X = tridiag(s, 0.0, 1.0, -1.0) * h;
  RealMatrix Y = RealMatrix::Zero(s, s);
  for (Index k = 0; k < s; ++k) Y(k, k) = 1.0 + static_cast<double>(k * s);

  const RealMatrix L = kron(eye, J) + kron(J, eye);
  const Index n = 2 * s * s, m = s * s;
  RealMatrix E = RealMatrix::Zero(n, n);
  E.topLeftCorner(m, m) = L;
  E.bottomRightCorner(m, m) = L;
  RealMatrix F(m, n), H(m, n);
  F << kron(eye, X), kron(X, eye);
  H << kron(Y, X), kron(X, Y);

  GsppSystem zero_rhs(ComplexMatrix::from_real(E), ComplexMatrix::from_real(F),
                      ComplexMatrix::from_real(H), ComplexMatrix(m, m), ComplexVector(n),
                      ComplexVector(m), StructureCase::CaseIII);
  const CVector f = zero_rhs.apply(CVector::Ones(n + m));
  return zero_rhs.with_rhs(ComplexVector::from_real(f.head(n).real()),
                           ComplexVector::from_real(f.tail(m).real()));
}

GsppSystem gen_random_sparse(std::uint64_t seed, Index n, Index m, double density,
                             StructureCase structure, bool real) {
  if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "n and m must be at least 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
  }
  CounterRng re(stream_seed(seed, 0)), rf(stream_seed(seed, 1)), rh(stream_seed(seed, 2)),
      rg(stream_seed(seed, 3)), rq(stream_seed(seed, 4)), rr(stream_seed(seed, 5));
  ComplexMatrix E = hermitian_e(structure) ? random_hermitian(re, n, density, real)
                                           : random_general(re, n, n, density, real);
  ComplexMatrix F = random_general(rf, m, n, density, real);
  ComplexMatrix H = shares_f(structure) ? F : random_general(rh, m, n, density, real);
  ComplexMatrix G = hermitian_g(structure) ? random_hermitian(rg, m, density, real)
                                           : random_general(rg, m, m, density, real);
  return GsppSystem(std::move(E), std::move(F), std::move(H), std::move(G),
                    random_dense_vector(rq, n, real), random_dense_vector(rr, m, real), structure);
}

CandidateSolution gen_random_candidate(std::uint64_t seed, Index n, Index m, bool real) {
  CounterRng ru(stream_seed(seed, 6)), rp(stream_seed(seed, 7));
  return CandidateSolution(random_dense_vector(ru, n, real), random_dense_vector(rp, m, real));
}

}  // namespace spbe
