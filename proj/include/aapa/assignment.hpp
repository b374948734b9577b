#pragma once

// Minimum-cost one-to-one assignment (Kuhn-Munkres with potentials) on dense,
// possibly rectangular cost matrices.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace aapa {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      assert(row.size() == cols_);
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CostMatrix = Matrix<double>;

template <class T>
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), ascending row
  T total{};
};

namespace detail {

template <class T>
bool is_tight(T reduced, T scale) {
  if constexpr (std::is_floating_point_v<T>) {
    return reduced <= std::numeric_limits<T>::epsilon() * 64 * std::max(T(1), scale);
  } else {
    (void)scale;
    return reduced <= 0;
  }
}

// Among all perfect matchings using only tight edges, pick the one whose
// row->column vector is lexicographically smallest. `match` holds one such
// matching on entry and the lexicographic minimum on exit.
inline void lexicographic_tight_matching(const std::vector<std::vector<bool>>& tight,
                                         std::vector<std::size_t>& match) {
  const std::size_t n = match.size();
  std::vector<std::size_t> row_of(n);
  for (std::size_t r = 0; r < n; ++r) row_of[match[r]] = r;
  std::vector<bool> col_fixed(n, false);
  std::vector<bool> visited(n);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!tight[i][j] || col_fixed[j]) continue;
      if (match[i] == j) break;

      // Force i->j: row r loses j, column match[i] becomes free. Look for an
      // alternating path from r to that column through unfixed rows > i.
      const std::size_t r = row_of[j];
      const std::size_t freed = match[i];
      std::fill(visited.begin(), visited.end(), false);
      std::vector<std::pair<std::size_t, std::size_t>> path;  // (row, new col)

      auto dfs = [&](auto&& self, std::size_t row) -> bool {
        for (std::size_t k = 0; k < n; ++k) {
          if (!tight[row][k] || col_fixed[k] || k == j || visited[k]) continue;
          visited[k] = true;
          if (k == freed || self(self, row_of[k])) {
            path.emplace_back(row, k);
            return true;
          }
        }
        return false;
      };
      if (!dfs(dfs, r)) continue;

      for (auto [row, col] : path) {
        match[row] = col;
        row_of[col] = row;
      }
      match[i] = j;
      row_of[j] = i;
      break;
    }
    col_fixed[match[i]] = true;
  }
}

}  // namespace detail

/// Solves the assignment problem on a square matrix. Returns row -> column.
///
/// Ties between optimal matchings are broken deterministically: the result is
/// the optimal matching whose row->column vector is lexicographically
/// smallest, i.e. the lowest row gets the lowest column it can take without
/// losing optimality.
template <class T>
std::vector<std::size_t> solve_square_assignment(const Matrix<T>& cost) {
  const std::size_t n = cost.rows();
  assert(cost.cols() == n);
  if (n == 0) return {};

  // Shortest augmenting path formulation, 1-based with a virtual column 0.
  using Acc = std::conditional_t<std::is_floating_point_v<T>, T, long long>;
  const Acc inf = std::numeric_limits<Acc>::max() / 4;
  std::vector<Acc> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      Acc delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Acc cur = static_cast<Acc>(cost(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> match(n);
  for (std::size_t j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;

  Acc scale = 0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      scale = std::max<Acc>(scale, std::abs(static_cast<Acc>(cost(r, c))));

  std::vector<std::vector<bool>> tight(n, std::vector<bool>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      tight[r][c] = detail::is_tight<Acc>(static_cast<Acc>(cost(r, c)) - u[r + 1] - v[c + 1], scale);
  for (std::size_t r = 0; r < n; ++r) tight[r][match[r]] = true;

  detail::lexicographic_tight_matching(tight, match);
  return match;
}

/// Minimum-cost matching of min(rows, cols) pairs on a rectangular matrix.
/// The matrix is padded to square with `pad_cost` dummies; since every
/// feasible matching uses the same number of dummies, the pad value does not
/// affect which real pairs are chosen.
template <class T>
Assignment<T> solve_assignment(const Matrix<T>& cost, T pad_cost = T{}) {
  Assignment<T> result;
  if (cost.empty()) return result;
  const std::size_t n = std::max(cost.rows(), cost.cols());
  Matrix<T> square(n, n, pad_cost);
  for (std::size_t r = 0; r < cost.rows(); ++r)
    for (std::size_t c = 0; c < cost.cols(); ++c) square(r, c) = cost(r, c);

  const auto match = solve_square_assignment(square);
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    if (match[r] >= cost.cols()) continue;
    result.pairs.emplace_back(r, match[r]);
    result.total += cost(r, match[r]);
  }
  return result;
}

}  // namespace aapa
