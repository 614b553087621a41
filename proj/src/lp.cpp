#include "twosided/lp.hpp"

#include "twosided/error.hpp"

namespace twosided {

void LinearProgram::add_row(std::vector<Rat> coeffs, Rat bound) {
  coeffs.resize(objective.size());
  rows.push_back(std::move(coeffs));
  rhs.push_back(std::move(bound));
}

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.rows.size();
  require(lp.rhs.size() == m, ErrorKind::kInvalidArgument, "constraint count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    require(lp.rows[i].size() == n, ErrorKind::kInvalidArgument, "constraint row has the wrong width");
    require(lp.rhs[i].sign() >= 0, ErrorKind::kInvalidArgument, "origin must be feasible");
  }

  // columns 0..n-1 structural, n..n+m-1 slack
  const std::size_t w = n + m;
  std::vector<std::vector<Rat>> t(m, std::vector<Rat>(w));
  std::vector<Rat> b = lp.rhs;
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = lp.rows[i][j];
    t[i][n + i] = Rat(1);
    basis[i] = n + i;
  }
  std::vector<Rat> reduced(w);  // negated reduced costs; optimal when all are >= 0
  for (std::size_t j = 0; j < n; ++j) reduced[j] = -lp.objective[j];
  Rat value;

  LpSolution sol;
  for (;;) {
    std::size_t enter = w;
    for (std::size_t j = 0; j < w; ++j) {
      if (reduced[j].sign() < 0) {
        enter = j;
        break;
      }
    }
    if (enter == w) break;

    std::size_t leave = m;
    Rat best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter].sign() <= 0) continue;
      Rat ratio = b[i] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    require(leave != m, ErrorKind::kInternal, "linear program is unbounded");

    Rat piv = t[leave][enter];
    for (auto& x : t[leave])
      if (!x.is_zero()) x /= piv;
    b[leave] /= piv;
    const auto& prow = t[leave];
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter].is_zero()) continue;
      Rat f = t[i][enter];
      for (std::size_t j = 0; j < w; ++j)
        if (!prow[j].is_zero()) t[i][j] -= f * prow[j];
      b[i] -= f * b[leave];
    }
    if (!reduced[enter].is_zero()) {
      Rat f = reduced[enter];
      for (std::size_t j = 0; j < w; ++j)
        if (!prow[j].is_zero()) reduced[j] -= f * prow[j];
      value -= f * b[leave];
    }
    basis[leave] = enter;
    ++sol.pivots;
  }

  sol.value = value;
  sol.x.assign(n, Rat{});
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = b[i];
  return sol;
}

}  // namespace twosided
