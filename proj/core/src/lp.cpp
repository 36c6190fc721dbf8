#include "mvlim/lp.hpp"

#include <stdexcept>

namespace mvlim {

namespace {

// Slack-form dictionary: x_basic[i] = rhs[i] - sum_j a[i][j] * x_nonbasic[j],
// z = v + sum_j obj[j] * x_nonbasic[j].
struct Dictionary {
  std::vector<int> basic, nonbasic;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> rhs, obj;
  Rational v;

  void pivot(size_t row, size_t col) {
    const Rational p = a[row][col];
    rhs[row] /= p;
    for (size_t j = 0; j < nonbasic.size(); ++j)
      if (j != col) a[row][j] /= p;
    a[row][col] = 1 / p;
    for (size_t i = 0; i < basic.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      rhs[i] -= f * rhs[row];
      for (size_t j = 0; j < nonbasic.size(); ++j)
        if (j != col) a[i][j] -= f * a[row][j];
      a[i][col] = -f * a[row][col];
    }
    if (obj[col] != 0) {
      const Rational f = obj[col];
      v += f * rhs[row];
      for (size_t j = 0; j < nonbasic.size(); ++j)
        if (j != col) obj[j] -= f * a[row][j];
      obj[col] = -f * a[row][col];
    }
    std::swap(basic[row], nonbasic[col]);
  }

  /// Bland's rule. Returns false when the objective is unbounded.
  bool optimize() {
    for (;;) {
      int col = -1;
      for (size_t j = 0; j < nonbasic.size(); ++j)
        if (obj[j] > 0 && (col < 0 || nonbasic[j] < nonbasic[col])) col = static_cast<int>(j);
      if (col < 0) return true;
      int row = -1;
      Rational best;
      for (size_t i = 0; i < basic.size(); ++i) {
        if (a[i][col] <= 0) continue;
        Rational ratio = rhs[i] / a[i][col];
        if (row < 0 || ratio < best || (ratio == best && basic[i] < basic[row])) {
          row = static_cast<int>(i);
          best = ratio;
        }
      }
      if (row < 0) return false;
      pivot(static_cast<size_t>(row), static_cast<size_t>(col));
    }
  }
};

}  // namespace

LpResult maximize(const std::vector<Rational>& c, const std::vector<std::vector<Rational>>& A,
                  const std::vector<Rational>& b) {
  const size_t n = c.size(), m = A.size();
  if (b.size() != m) throw std::invalid_argument("constraint matrix and bound vector differ in length");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("constraint row has the wrong length");

  Dictionary d;
  for (size_t j = 0; j < n; ++j) d.nonbasic.push_back(static_cast<int>(j));
  for (size_t i = 0; i < m; ++i) d.basic.push_back(static_cast<int>(n + i));
  d.a = A;
  d.rhs = b;
  d.obj = c;

  size_t min_row = 0;
  for (size_t i = 1; i < m; ++i)
    if (b[i] < b[min_row]) min_row = i;

  if (m > 0 && b[min_row] < 0) {
    // Phase one: maximize -x0 with x0 relaxing every constraint.
    const int aux = static_cast<int>(n + m);
    d.nonbasic.push_back(aux);
    for (auto& row : d.a) row.push_back(Rational(-1));
    d.obj.assign(n + 1, Rational(0));
    d.obj[n] = -1;
    d.v = 0;
    d.pivot(min_row, n);
    d.optimize();
    if (d.v != 0) return {LpResult::Status::Infeasible, {}, Rational(0)};
    for (size_t i = 0; i < d.basic.size(); ++i) {
      if (d.basic[i] != aux) continue;
      for (size_t j = 0; j < d.nonbasic.size(); ++j) {
        if (d.a[i][j] != 0) {
          d.pivot(i, j);
          break;
        }
      }
      break;
    }
    size_t aux_col = 0;
    while (d.nonbasic[aux_col] != aux) ++aux_col;
    d.nonbasic.erase(d.nonbasic.begin() + static_cast<long>(aux_col));
    for (auto& row : d.a) row.erase(row.begin() + static_cast<long>(aux_col));
    // Restate the original objective over the current nonbasic variables.
    d.obj.assign(d.nonbasic.size(), Rational(0));
    d.v = 0;
    for (size_t j = 0; j < n; ++j) {
      if (c[j] == 0) continue;
      bool found = false;
      for (size_t k = 0; k < d.nonbasic.size(); ++k) {
        if (d.nonbasic[k] == static_cast<int>(j)) {
          d.obj[k] += c[j];
          found = true;
        }
      }
      if (found) continue;
      for (size_t i = 0; i < d.basic.size(); ++i) {
        if (d.basic[i] != static_cast<int>(j)) continue;
        d.v += c[j] * d.rhs[i];
        for (size_t k = 0; k < d.nonbasic.size(); ++k) d.obj[k] -= c[j] * d.a[i][k];
      }
    }
  }

  if (!d.optimize()) return {LpResult::Status::Unbounded, {}, Rational(0)};
  LpResult r;
  r.status = LpResult::Status::Optimal;
  r.x.assign(n, Rational(0));
  for (size_t i = 0; i < d.basic.size(); ++i)
    if (d.basic[i] < static_cast<int>(n)) r.x[static_cast<size_t>(d.basic[i])] = d.rhs[i];
  r.value = d.v;
  return r;
}

}  // namespace mvlim
