#pragma once

// Dense complex linear algebra for the small (<= a few hundred) matrices used
// by the walk simulations. Row-major storage, value semantics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scswalk/errors.hpp"
#include "scswalk/tolerances.hpp"

namespace scswalk {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw ValidationError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ValidationError("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexVector column(std::size_t c) const {
    ComplexVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
    return t;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_)
      throw ValidationError("matrix product: inner dimensions " + std::to_string(a.cols_) +
                            " and " + std::to_string(b.rows_) + " differ");
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Complex* crow = &c.data_[i * c.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        const Complex* brow = &b.data_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  friend ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x) {
    if (a.cols_ != x.size())
      throw ValidationError("matrix-vector product: dimension mismatch (" +
                            std::to_string(a.cols_) + " vs " + std::to_string(x.size()) + ")");
    ComplexVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Complex acc{};
      const Complex* row = &a.data_[i * a.cols_];
      for (std::size_t j = 0; j < a.cols_; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw ValidationError(std::string(op) + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexVector data_;
};

/// Unit axis on the Bloch sphere.
struct BlochVector {
  double dx = 1.0;
  double dy = 0.0;
  double dz = 0.0;

  double norm() const { return std::sqrt(dx * dx + dy * dy + dz * dz); }
  double dot(const BlochVector& o) const { return dx * o.dx + dy * o.dy + dz * o.dz; }
  BlochVector operator-() const { return {-dx, -dy, -dz}; }

  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, -kI}, {kI, 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("max_abs_diff: shape mismatch");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ValidationError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// max-entry |U^dagger U - 1|
inline double unitarity_defect(const ComplexMatrix& u) {
  if (!u.square()) return std::numeric_limits<double>::infinity();
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
}

/// max-entry |H - H^dagger|
inline double hermiticity_defect(const ComplexMatrix& h) {
  if (!h.square()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = r; c < h.cols(); ++c)
      m = std::max(m, std::abs(h(r, c) - std::conj(h(c, r))));
  return m;
}

inline bool is_unitary(const ComplexMatrix& u, double tolerance = tol::kUnitary) {
  return unitarity_defect(u) <= tolerance;
}

inline bool is_hermitian(const ComplexMatrix& h, double tolerance = tol::kHermitian) {
  return hermiticity_defect(h) <= tolerance;
}

inline double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]
};

/// Cyclic complex Jacobi. Each rotation removes the phase of the pivot and
/// then applies the real symmetric Jacobi rotation on the (p, q) plane.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& h,
                                        double hermitian_tolerance = tol::kHermitian) {
  if (!h.square()) throw ValidationError("hermitian_eig: matrix is not square");
  const double defect = hermiticity_defect(h);
  const double scale = std::max(1.0, [&] {
    double m = 0.0;
    for (const auto& x : h.entries()) m = std::max(m, std::abs(x));
    return m;
  }());
  if (defect > hermitian_tolerance * scale)
    throw ToleranceError("hermitian_eig: input is not Hermitian", defect,
                         hermitian_tolerance * scale);

  const std::size_t n = h.rows();
  ComplexMatrix a = h;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };
  double frob = 0.0;
  for (const auto& x : a.entries()) frob += std::norm(x);
  frob = std::sqrt(frob);
  const double target = 1e-15 * std::max(frob, 1e-300);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip pivots already negligible relative to both diagonal entries.
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;  // e^{i phi}
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex cph = std::conj(phase);  // e^{-i phi}
        // Rotation V on the (p, q) plane:
        //   V_pp = c, V_pq = s, V_qp = -s e^{-i phi}, V_qq = c e^{-i phi}
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * cph * akq;
          a(k, q) = s * akp + c * cph * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * cph * vkq;
          v(k, q) = s * vkp + c * cph * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = a(order[i], order[i]).real();
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, i) = v(k, order[i]);
  }
  return out;
}

/// Sum of |eigenvalues| of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& h) {
  const auto eig = hermitian_eig(h);
  double s = 0.0;
  for (double l : eig.eigenvalues) s += std::abs(l);
  return s;
}

/// Builds V f(Lambda) V^dagger from an eigendecomposition.
template <typename F>
ComplexMatrix spectral_function(const EigenDecomposition& eig, F&& f) {
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex fk = f(eig.eigenvalues[k]);
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = eig.eigenvectors(r, k) * fk;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(eig.eigenvectors(c, k));
    }
  }
  return out;
}

/// exp(-i t H) for Hermitian H.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h, double t = 1.0) {
  return spectral_function(hermitian_eig(h), [t](double l) { return std::exp(-kI * (t * l)); });
}

/// Partial transpose on the walker factor of a walker-major (n, s) matrix.
inline ComplexMatrix partial_transpose_walker(const ComplexMatrix& rho, std::size_t d) {
  if (!rho.square() || rho.rows() != 2 * d)
    throw ValidationError("partial_transpose_walker: expected a " + std::to_string(2 * d) + "x" +
                          std::to_string(2 * d) + " matrix");
  ComplexMatrix out(2 * d, 2 * d);
  for (std::size_t n = 0; n < d; ++n)
    for (std::size_t np = 0; np < d; ++np)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t sp = 0; sp < 2; ++sp)
          out(2 * n + s, 2 * np + sp) = rho(2 * np + s, 2 * n + sp);
  return out;
}

/// exp(-i eps n.sigma) = cos(eps) 1 - i sin(eps) n.sigma
inline ComplexMatrix pauli_rotation(double epsilon, const BlochVector& n) {
  const double c = std::cos(epsilon);
  const double s = std::sin(epsilon);
  return {{Complex(c, -s * n.dz), Complex(-s * n.dy, -s * n.dx)},
          {Complex(s * n.dy, -s * n.dx), Complex(c, s * n.dz)}};
}

}  // namespace scswalk
