#include "cascade/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cascade/errors.hpp"

namespace cascade::numerics {

namespace {

constexpr double kClampTolerance = 1e-12;

void require_square(const Matrix& m, const char* what) {
  if (!m.square()) {
    throw Error(ErrorCode::LengthMismatch, std::string(what) + " must be square, got " +
                                               std::to_string(m.rows()) + "x" +
                                               std::to_string(m.cols()));
  }
}

void require_nonnegative(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0.0) {
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(i) + ", " +
                                                  std::to_string(j) + ") is negative");
      }
}

// Strongly connected components of the digraph i -> j for m(i, j) > 0 (Tarjan).
std::vector<std::vector<std::size_t>> strong_components(const Matrix& m) {
  const std::size_t n = m.rows();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < n) {
        const std::size_t w = f.next++;
        if (m(f.v, w) <= 0.0) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

struct BlockResult {
  double radius = 0.0;
  Vector vector;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration on an irreducible block, shifted by its max column sum so
// periodic blocks converge. Stops once the Collatz-Wielandt bracket
// [min (Mx)_i / x_i, max (Mx)_i / x_i], which contains the radius, is narrower than tol.
BlockResult block_power_iteration(const Matrix& b, double tol, std::size_t max_iter) {
  const std::size_t n = b.rows();
  const double shift = norm_1(b);
  BlockResult out;
  out.vector.assign(n, 1.0 / static_cast<double>(n));
  Vector& x = out.vector;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector y = multiply(b, x);
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      y[i] += shift * x[i];
      sum += y[i];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / sum;
    out.radius = std::max(0.5 * (lo + hi), 0.0);
    out.iterations = it;
    if (hi - lo < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// In-place LU with partial pivoting; row i of the factor came from row perm[i].
class LuFactor {
 public:
  explicit LuFactor(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double scale = std::max(norm_inf(lu_), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t pivot = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(pivot, k))) pivot = i;
      if (std::abs(lu_(pivot, k)) <= 1e-14 * scale) {
        throw Error(ErrorCode::Singular, "zero pivot in column " + std::to_string(k));
      }
      if (pivot != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
        std::swap(perm_[k], perm_[pivot]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu_(i, k) / lu_(k, k);
        lu_(i, k) = f;
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  Vector solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
      double acc = x[i];
      for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
      x[i] = acc / lu_(i, i);
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace

Vector solve(const Matrix& a, std::span<const double> b) {
  require_square(a, "system matrix");
  if (b.size() != a.rows()) {
    throw Error(ErrorCode::LengthMismatch, "right-hand side length " + std::to_string(b.size()));
  }
  return LuFactor(a).solve(b);
}

Matrix invert_i_minus_c(const Matrix& c) {
  require_square(c, "C");
  require_nonnegative(c);
  const Vector sums = c.column_sums();
  for (std::size_t j = 0; j < sums.size(); ++j) {
    if (sums[j] >= 1.0) {
      throw Error(ErrorCode::NotSchur,
                  "column " + std::to_string(j) + " sums to " + std::to_string(sums[j]));
    }
  }

  const std::size_t n = c.rows();
  const LuFactor lu(subtract(Matrix::identity(n), c));
  Matrix p(n, n, 0.0);
  Vector unit(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    const Vector col = lu.solve(unit);
    unit[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p(i, j) = (col[i] < 0.0 && col[i] > -kClampTolerance) ? 0.0 : col[i];
    }
  }
  return p;
}

SpectralResult frobenius_eigenvalue(const Matrix& m, double tol, std::size_t max_iter) {
  require_square(m, "M");
  const std::size_t n = m.rows();
  SpectralResult result;
  result.converged = true;
  result.eigenvector.assign(n, 0.0);

  // lambda_F(M) is the largest lambda_F over the irreducible diagonal blocks.
  std::size_t best_block = 0;
  double best = -1.0;
  const auto blocks = strong_components(m);
  std::vector<Vector> vectors(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    double radius = 0.0;
    if (idx.size() == 1) {
      radius = m(idx[0], idx[0]);
      vectors[b] = {1.0};
    } else {
      const BlockResult r = block_power_iteration(principal_submatrix(m, idx), tol, max_iter);
      radius = r.radius;
      vectors[b] = r.vector;
      result.iterations = std::max(result.iterations, r.iterations);
      result.converged = result.converged && r.converged;
    }
    if (radius > best) {
      best = radius;
      best_block = b;
    }
  }
  result.radius = std::max(best, 0.0);
  for (std::size_t k = 0; k < blocks[best_block].size(); ++k)
    result.eigenvector[blocks[best_block][k]] = vectors[best_block][k];
  return result;
}

bool is_schur_by_column_sums(const Matrix& c) {
  require_square(c, "C");
  require_nonnegative(c);
  const Vector sums = c.column_sums();
  return std::all_of(sums.begin(), sums.end(), [](double s) { return s < 1.0; });
}

Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> indices) {
  require_square(m, "M");
  if (indices.empty()) throw Error(ErrorCode::IndexOutOfRange, "empty index set");
  std::vector<bool> seen(m.rows(), false);
  for (std::size_t idx : indices) {
    if (idx >= m.rows()) {
      throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(idx) + " >= " +
                                                  std::to_string(m.rows()));
    }
    if (seen[idx]) throw Error(ErrorCode::IndexOutOfRange, "duplicate index " + std::to_string(idx));
    seen[idx] = true;
  }
  const std::size_t k = indices.size();
  Matrix sub(k, k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(indices[a], indices[b]);
  return sub;
}

}  // namespace cascade::numerics
