#pragma once

// Spin-1/2 and spin-1 observables with their eigenprojectors, plus the
// closed-form lower/upper operators of the spin-1 x/z pairs used as the
// golden corpus. Constants are kept as surds (a + b sqrt(r)) / d and only
// turned into doubles when a matrix is built.

#include "iqprob/hermitian_core.hpp"
#include "iqprob/imprecise_probability.hpp"
#include "iqprob/measurement_models.hpp"
#include "iqprob/projector_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

namespace iqprob::spin {

struct Surd {
  long long a = 0;
  long long b = 0;
  long long r = 2;
  long long d = 1;

  double value() const {
    return (static_cast<double>(a) + static_cast<double>(b) * std::sqrt(static_cast<double>(r))) /
           static_cast<double>(d);
  }
};

constexpr Surd rational(long long a, long long d = 1) { return {a, 0, 2, d}; }
constexpr Surd root2(long long b, long long d = 1) { return {0, b, 2, d}; }

struct ComplexSurd {
  Surd re{};
  Surd im{};

  constexpr ComplexSurd() = default;
  constexpr ComplexSurd(Surd real) : re(real) {}
  constexpr ComplexSurd(Surd real, Surd imag) : re(real), im(imag) {}
  Complex value() const { return {re.value(), im.value()}; }
};

constexpr ComplexSurd imag(Surd s) { return {rational(0), s}; }

/// Row-major square matrix of surd entries.
inline Matrix realize(Index n, std::initializer_list<ComplexSurd> entries) {
  Matrix m(n, n);
  Index k = 0;
  for (const auto& e : entries) {
    m(k / n, k % n) = e.value();
    ++k;
  }
  if (k != n * n) throw Error(ErrorCode::InvalidArgument, "surd matrix needs n*n entries");
  return m;
}

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};

constexpr char axis_name(Axis a) { return a == Axis::X ? 'x' : a == Axis::Y ? 'y' : 'z'; }

/// Spin operators and their eigenprojectors P^a_j. For spin-1/2 the
/// operators are the Pauli matrices so that j = +1, -1 labels eigenvalues.
class SpinCatalog {
 public:
  SpinCatalog(std::vector<int> labels, std::array<Matrix, 3> ops, std::array<std::vector<Matrix>, 3> projs)
      : labels_(std::move(labels)), ops_(std::move(ops)) {
    for (std::size_t a = 0; a < 3; ++a)
      for (const auto& m : projs[a]) projs_[a].push_back(Projector::validate(m));
  }

  Index dim() const noexcept { return ops_[0].rows(); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const Matrix& op(Axis a) const { return ops_[static_cast<std::size_t>(a)]; }

  const Projector& projector(Axis a, int j) const {
    const auto it = std::find(labels_.begin(), labels_.end(), j);
    if (it == labels_.end()) throw Error(ErrorCode::InvalidArgument, "no eigenvalue label " + std::to_string(j));
    return projs_[static_cast<std::size_t>(a)][static_cast<std::size_t>(it - labels_.begin())];
  }

  /// Sum of P^a_j over the given labels.
  Projector sum(Axis a, std::initializer_list<int> js) const {
    Matrix m = zeros(dim());
    for (int j : js) m += projector(a, j).matrix();
    return Projector::validate(m);
  }

  ProjectiveResolution resolution(Axis a) const { return ProjectiveResolution(projs_[static_cast<std::size_t>(a)]); }

 private:
  std::vector<int> labels_;
  std::array<Matrix, 3> ops_;
  std::array<std::vector<Projector>, 3> projs_;
};

inline const SpinCatalog& spin1_catalog() {
  static const SpinCatalog catalog = [] {
    const auto z = rational(0);
    const Matrix lx = realize(3, {z, root2(1, 2), z, root2(1, 2), z, root2(1, 2), z, root2(1, 2), z});
    const Matrix ly = realize(3, {z, imag(root2(-1, 2)), z, imag(root2(1, 2)), z, imag(root2(-1, 2)), z,
                                  imag(root2(1, 2)), z});
    const Matrix lz = realize(3, {rational(1), z, z, z, z, z, z, z, rational(-1)});

    const auto q4 = rational(1, 4), h2 = rational(1, 2);
    const Matrix px1 = realize(3, {q4, root2(1, 4), q4, root2(1, 4), h2, root2(1, 4), q4, root2(1, 4), q4});
    const Matrix px0 = realize(3, {h2, z, rational(-1, 2), z, z, z, rational(-1, 2), z, h2});
    const Matrix pxm = realize(3, {q4, root2(-1, 4), q4, root2(-1, 4), h2, root2(-1, 4), q4, root2(-1, 4), q4});

    const Matrix py1 = realize(3, {q4, imag(root2(-1, 4)), rational(-1, 4), imag(root2(1, 4)), h2,
                                   imag(root2(-1, 4)), rational(-1, 4), imag(root2(1, 4)), q4});
    const Matrix py0 = realize(3, {h2, z, h2, z, z, z, h2, z, h2});
    const Matrix pym = realize(3, {q4, imag(root2(1, 4)), rational(-1, 4), imag(root2(-1, 4)), h2,
                                   imag(root2(1, 4)), rational(-1, 4), imag(root2(-1, 4)), q4});

    const auto one = rational(1);
    const Matrix pz1 = realize(3, {one, z, z, z, z, z, z, z, z});
    const Matrix pz0 = realize(3, {z, z, z, z, one, z, z, z, z});
    const Matrix pzm = realize(3, {z, z, z, z, z, z, z, z, one});

    return SpinCatalog({1, 0, -1}, {lx, ly, lz}, {{{px1, px0, pxm}, {py1, py0, pym}, {pz1, pz0, pzm}}});
  }();
  return catalog;
}

inline const SpinCatalog& spin_half_catalog() {
  static const SpinCatalog catalog = [] {
    const auto z = rational(0), one = rational(1), h = rational(1, 2);
    const Matrix sx = realize(2, {z, one, one, z});
    const Matrix sy = realize(2, {z, imag(rational(-1)), imag(one), z});
    const Matrix sz = realize(2, {one, z, z, rational(-1)});
    const Matrix px1 = realize(2, {h, h, h, h});
    const Matrix pxm = realize(2, {h, rational(-1, 2), rational(-1, 2), h});
    const Matrix py1 = realize(2, {h, imag(rational(-1, 2)), imag(h), h});
    const Matrix pym = realize(2, {h, imag(h), imag(rational(-1, 2)), h});
    const Matrix pz1 = realize(2, {one, z, z, z});
    const Matrix pzm = realize(2, {z, z, z, one});
    return SpinCatalog({1, -1}, {sx, sy, sz}, {{{px1, pxm}, {py1, pym}, {pz1, pzm}}});
  }();
  return catalog;
}

// ---------------------------------------------------------------------------
// Golden spin-1 operators

namespace golden {

/// Upper operator of (P^x_k, P^z_i); all lower operators of these rank-1 pairs vanish.
inline Matrix upper_xz(int k, int i) {
  const auto z = rational(0);
  if (k == 0 && i == 0) return zeros(3);
  if (k == 0) return realize(3, {rational(1, 2), z, z, z, z, z, z, z, rational(1, 2)});
  if (i == 0)
    return realize(3, {rational(1, 4), z, rational(1, 4), z, rational(1, 2), z, rational(1, 4), z, rational(1, 4)});
  const long long s = k;
  if (i == 1)
    return realize(3, {rational(1, 4), z, z, z, rational(1, 6), root2(s, 12), z, root2(s, 12), rational(1, 12)});
  return realize(3, {rational(1, 12), root2(s, 12), z, root2(s, 12), rational(1, 6), z, z, z, rational(1, 4)});
}

/// Sum of upper_xz over all nine pairs.
inline Matrix upper_xz_sum() {
  const auto z = rational(0);
  return realize(3, {rational(13, 6), z, rational(1, 2), z, rational(5, 3), z, rational(1, 2), z, rational(13, 6)});
}

/// tr(upper_xz(e, n) P^y_c).
inline double y_table(int e, int n, int c) {
  if (e != 0 && n != 0) return 1.0 / 6.0;
  if (e == 0 && n == 0) return 0.0;
  return c == 0 ? 0.5 : 0.25;
}

struct RankTwoCase {
  std::string id;
  std::array<int, 2> x;
  std::array<int, 2> z;
  Matrix lower;
  Matrix upper;
  std::array<Surd, 3> width_spectrum;  // ascending eigenvalues of upper - lower
};

inline std::vector<RankTwoCase> rank_two_cases() {
  const auto z = rational(0);
  const auto q4 = rational(1, 4), h2 = rational(1, 2);
  std::vector<RankTwoCase> out;
  for (long long s : {1LL, -1LL}) {
    const int si = static_cast<int>(s);
    const std::string tag = s > 0 ? "+1" : "-1";
    out.push_back({"x{0," + tag + "} z{+1,0}", {0, si}, {1, 0},
                   realize(3, {rational(2, 3), root2(s, 3), z, root2(s, 3), rational(1, 3), z, z, z, z}),
                   realize(3, {rational(3, 4), root2(s, 4), z, root2(s, 4), h2, z, z, z, q4}),
                   {z, q4, q4}});
    out.push_back({"x{0," + tag + "} z{-1,0}", {0, si}, {-1, 0},
                   realize(3, {z, z, z, z, rational(1, 3), root2(s, 3), z, root2(s, 3), rational(2, 3)}),
                   realize(3, {q4, z, z, z, h2, root2(s, 4), z, root2(s, 4), rational(3, 4)}),
                   {z, q4, q4}});
  }
  for (int s : {1, -1}) {
    const std::string tag = s > 0 ? "+1" : "-1";
    out.push_back({"x{+1,-1} z{" + tag + ",0}", {1, -1}, {s, 0},
                   realize(3, {z, z, z, z, rational(1), z, z, z, z}),
                   realize(3, {h2, z, z, z, rational(1), z, z, z, h2}),
                   {z, h2, h2}});
  }
  for (int s : {1, -1}) {
    const std::string tag = s > 0 ? "+1" : "-1";
    out.push_back({"x{0," + tag + "} z{+1,-1}", {0, s}, {1, -1},
                   realize(3, {h2, z, rational(-1, 2), z, z, z, rational(-1, 2), z, h2}),
                   realize(3, {rational(3, 4), z, rational(-1, 4), z, h2, z, rational(-1, 4), z, rational(3, 4)}),
                   {z, h2, h2}});
  }
  const Matrix commuting = realize(3, {h2, z, h2, z, z, z, h2, z, h2});
  out.push_back({"x{+1,-1} z{+1,-1}", {1, -1}, {1, -1}, commuting, commuting, {z, z, z}});
  return out;
}

struct DominanceCase {
  std::string id;
  std::array<int, 2> first_x;
  std::array<int, 2> first_z;
  std::array<int, 2> second_x;
  std::array<int, 2> second_z;
  std::array<Surd, 3> spectrum;  // ascending
};

/// Eigenvalues of lower(first) - upper(second).
inline std::vector<DominanceCase> dominance_cases() {
  return {
      {"lower x{0,-1} z{+1,0} - upper x{0,+1} z{+1,0}", {0, -1}, {1, 0}, {0, 1}, {1, 0},
       {Surd{-3, -1, 393, 24}, rational(-1, 4), Surd{-3, 1, 393, 24}}},
      {"lower x{0,+1} z{+1,0} - upper x{+1,-1} z{+1,0}", {0, 1}, {1, 0}, {1, -1}, {1, 0},
       {Surd{-3, -1, 57, 12}, rational(-1, 2), Surd{-3, 1, 57, 12}}},
  };
}

}  // namespace golden

// ---------------------------------------------------------------------------
// Reproduction report

struct TableRow {
  std::string id;
  std::string description;
  double max_deviation = 0.0;
  bool pass = true;
};

struct TableReport {
  std::vector<TableRow> rows;
  double tolerance = 1e-10;

  double max_deviation() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.max_deviation);
    return m;
  }

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.pass; });
  }
};

namespace detail {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline std::string label(int j) { return j > 0 ? "+" + std::to_string(j) : std::to_string(j); }

inline double spectrum_deviation(const Matrix& m, const std::array<Surd, 3>& expected) {
  const RealVector ev = eigh(HermitianOperator::hermitian_part(m)).values;
  double dev = 0.0;
  for (Index i = 0; i < 3; ++i) dev = std::max(dev, std::abs(ev(i) - expected[static_cast<std::size_t>(i)].value()));
  return dev;
}

}  // namespace detail

/// Recomputes every spin-1 table from the catalog and compares it with the
/// golden constants. A row fails when its deviation exceeds `tolerance`.
inline TableReport reproduce_tables(const Tolerances& tol = {}, double tolerance = 1e-10) {
  const auto& c = spin1_catalog();
  TableReport report;
  report.tolerance = tolerance;
  auto add = [&](std::string id, std::string description, double dev) {
    report.rows.push_back({std::move(id), std::move(description), dev, dev <= tolerance});
  };
  const std::array<int, 3> js{1, 0, -1};

  {
    const auto ops = bounds(c.projector(Axis::Z, 0), c.projector(Axis::X, 0), tol);
    add("upper z0 x0", "upper operator of orthogonal zero components vanishes",
        std::max(detail::max_abs(ops.upper.matrix()), detail::max_abs(ops.lower.matrix())));
  }

  Matrix total = zeros(3);
  for (int k : js)
    for (int i : js) {
      const auto ops = bounds(c.projector(Axis::X, k), c.projector(Axis::Z, i), tol);
      total += ops.upper.matrix();
      const std::string pair = "x" + detail::label(k) + " z" + detail::label(i);
      add("upper " + pair, "upper operator of P^x_" + detail::label(k) + ", P^z_" + detail::label(i),
          detail::max_abs(ops.upper.matrix() - golden::upper_xz(k, i)));
      add("lower " + pair, "lower operator of rank-one pair is zero", detail::max_abs(ops.lower.matrix()));
      const bool half = k == 0 || i == 0;
      const auto q = rational(1, 4), h = rational(1, 2), z = rational(0);
      if (k != 0 || i != 0)
        add("upper spectrum " + pair, half ? "eigenvalues (0, 1/2, 1/2)" : "eigenvalues (0, 1/4, 1/4)",
            detail::spectrum_deviation(ops.upper.matrix(), half ? std::array{z, h, h} : std::array{z, q, q}));
    }

  add("upper sum matrix", "sum of the nine upper operators", detail::max_abs(total - golden::upper_xz_sum()));
  add("upper sum spectrum", "eigenvalues (5/3, 5/3, 8/3) exceed one",
      detail::spectrum_deviation(total, {rational(5, 3), rational(5, 3), rational(8, 3)}));

  {
    double dev = 0.0;
    for (int e : js)
      for (int n : js) {
        const auto up = upper_operator(c.projector(Axis::X, e), c.projector(Axis::Z, n), tol);
        for (int y : js) {
          const double v = real_trace(up.matrix() * c.projector(Axis::Y, y).matrix());
          dev = std::max(dev, std::abs(v - golden::y_table(e, n, y)));
        }
      }
    add("y eigenstate table", "tr(upper(P^x_e, P^z_n) P^y_c) over all 27 labels", dev);
  }

  for (const auto& k : golden::rank_two_cases()) {
    const auto p = c.sum(Axis::X, {k.x[0], k.x[1]});
    const auto q = c.sum(Axis::Z, {k.z[0], k.z[1]});
    const auto ops = bounds(p, q, tol);
    add("lower " + k.id, "lower operator of rank-two pair", detail::max_abs(ops.lower.matrix() - k.lower));
    add("upper " + k.id, "upper operator of rank-two pair", detail::max_abs(ops.upper.matrix() - k.upper));
    add("width spectrum " + k.id, "eigenvalues of upper - lower",
        detail::spectrum_deviation(ops.upper.matrix() - ops.lower.matrix(), k.width_spectrum));
  }

  for (const auto& d : golden::dominance_cases()) {
    const ProjectorPair first{c.sum(Axis::X, {d.first_x[0], d.first_x[1]}), c.sum(Axis::Z, {d.first_z[0], d.first_z[1]})};
    const ProjectorPair second{c.sum(Axis::X, {d.second_x[0], d.second_x[1]}),
                               c.sum(Axis::Z, {d.second_z[0], d.second_z[1]})};
    const Matrix lo = lower_operator(first.p, first.q, tol).matrix();
    const Matrix up = upper_operator(second.p, second.q, tol).matrix();
    add("dominance " + d.id, "eigenvalues of the difference", detail::spectrum_deviation(lo - up, d.spectrum));
  }

  {
    const auto d = golden::dominance_cases().front();
    const Matrix lo = lower_operator(c.sum(Axis::X, {d.first_x[0], d.first_x[1]}),
                                     c.sum(Axis::Z, {d.first_z[0], d.first_z[1]}), tol)
                          .matrix();
    const Matrix up = upper_operator(c.sum(Axis::X, {d.second_x[0], d.second_x[1]}),
                                     c.sum(Axis::Z, {d.second_z[0], d.second_z[1]}), tol)
                          .matrix();
    const double norm = op_norm(commutator(lo, up));
    report.rows.push_back({"dominance commutator", "lower and upper operators of the first dominance case do not commute",
                           0.0, norm > tolerance});
  }

  {
    double dev = 0.0;
    for (Axis a : axes)
      for (Axis b : axes) {
        if (a == b) continue;
        for (int j : js)
          for (int k : js) {
            const double expected = (j != 0 && k != 0) ? 0.25 : (j == 0 && k == 0) ? 0.0 : 0.5;
            const double v = real_trace(c.projector(a, j).matrix() * c.projector(b, k).matrix());
            dev = std::max(dev, std::abs(v - expected));
          }
      }
    add("overlaps", "tr(P^a_j P^b_k) for distinct axes", dev);
  }

  {
    double dev = 0.0;
    for (Axis a : axes)
      for (Axis b : axes)
        if (a != b) dev = std::max(dev, detail::max_abs(c.projector(a, 0).matrix() * c.projector(b, 0).matrix()));
    add("zero components orthogonal", "P^a_0 P^b_0 = 0 for distinct axes", dev);
  }

  return report;
}

}  // namespace iqprob::spin
