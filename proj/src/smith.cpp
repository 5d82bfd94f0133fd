#include "vectk/smith.hpp"

#include <stdexcept>

namespace vectk {

imat imat::identity(int n) {
  imat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

imat imul(const imat& x, const imat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("imul: shape mismatch");
  imat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const bigint& xv = x.at(i, k);
      if (xv == 0) continue;
      for (int j = 0; j < y.cols; ++j) {
        const bigint& yv = y.at(k, j);
        if (yv != 0) r.at(i, j) += xv * yv;
      }
    }
  return r;
}

std::vector<bigint> imul(const imat& x, const std::vector<bigint>& v) {
  if (x.cols != static_cast<int>(v.size())) throw std::invalid_argument("imul: shape mismatch");
  std::vector<bigint> r(x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      if (x.at(i, j) != 0 && v[j] != 0) r[i] += x.at(i, j) * v[j];
  return r;
}

namespace {

void swap_rows(imat& m, int i, int j) {
  for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}
void swap_cols(imat& m, int i, int j) {
  for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}
// row[i] += f * row[j]
void add_row(imat& m, int i, int j, const bigint& f) {
  for (int c = 0; c < m.cols; ++c) m.at(i, c) += f * m.at(j, c);
}
void add_col(imat& m, int i, int j, const bigint& f) {
  for (int r = 0; r < m.rows; ++r) m.at(r, i) += f * m.at(r, j);
}
void negate_row(imat& m, int i) {
  for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}
void negate_col(imat& m, int i) {
  for (int r = 0; r < m.rows; ++r) m.at(r, i) = -m.at(r, i);
}

bigint abs_big(const bigint& x) { return x < 0 ? bigint(-x) : x; }

// quotient with minimal-magnitude remainder: |a - q b| <= |b| / 2
bigint nearest_div(const bigint& a, const bigint& b) {
  bigint q = a / b;
  const bigint r = a - q * b;
  if (2 * abs_big(r) > abs_big(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
  return q;
}

}  // namespace

smith_form smith_normal_form(const imat& m) {
  smith_form s;
  s.d = m;
  s.u = imat::identity(m.rows);
  s.v = imat::identity(m.cols);
  s.u_inv = imat::identity(m.rows);
  s.v_inv = imat::identity(m.cols);
  imat& d = s.d;

  // Row op on U mirrors as the inverse column op on U^-1; same for V.
  auto u_swap = [&](int i, int j) { swap_rows(d, i, j); swap_rows(s.u, i, j); swap_cols(s.u_inv, i, j); };
  auto v_swap = [&](int i, int j) { swap_cols(d, i, j); swap_cols(s.v, i, j); swap_rows(s.v_inv, i, j); };
  auto u_add = [&](int i, int j, const bigint& f) {  // row_i += f * row_j
    add_row(d, i, j, f);
    add_row(s.u, i, j, f);
    add_col(s.u_inv, j, i, -f);
  };
  auto v_add = [&](int i, int j, const bigint& f) {  // col_i += f * col_j
    add_col(d, i, j, f);
    add_col(s.v, i, j, f);
    add_row(s.v_inv, j, i, -f);
  };

  const int n = std::min(m.rows, m.cols);

  // phase 1: diagonalize.  Every pass re-selects the globally smallest entry
  // of the remaining block as the pivot and reduces its row and column with
  // minimal-magnitude remainders; the pivot at least halves between passes,
  // which keeps both the pass count and the entry growth in check.
  int t = 0;
  for (; t < n; ++t) {
    for (;;) {
      int pr = -1, pc = -1;
      bigint best;
      for (int r = t; r < d.rows; ++r)
        for (int c = t; c < d.cols; ++c)
          if (d.at(r, c) != 0) {
            bigint v = abs_big(d.at(r, c));
            if (pr < 0 || v < best) {
              best = v;
              pr = r;
              pc = c;
            }
          }
      if (pr < 0) goto diagonal_done;  // remaining block is zero
      if (pr != t) u_swap(t, pr);
      if (pc != t) v_swap(t, pc);

      bool clear = true;
      for (int r = t + 1; r < d.rows; ++r) {
        if (d.at(r, t) == 0) continue;
        u_add(r, t, -nearest_div(d.at(r, t), d.at(t, t)));
        if (d.at(r, t) != 0) clear = false;
      }
      for (int c = t + 1; c < d.cols; ++c) {
        if (d.at(t, c) == 0) continue;
        v_add(c, t, -nearest_div(d.at(t, c), d.at(t, t)));
        if (d.at(t, c) != 0) clear = false;
      }
      if (clear) break;
    }
    if (d.at(t, t) < 0) {
      negate_row(d, t);
      negate_row(s.u, t);
      negate_col(s.u_inv, t);
    }
  }
diagonal_done:;

  // phase 2: enforce d_i | d_{i+1} on the diagonal with 2x2 gcd/lcm steps;
  // entries stay bounded by the products of the two values involved
  const int diag_len = t;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i + 1 < diag_len; ++i) {
      const int j = i + 1;
      if (d.at(j, j) % d.at(i, i) == 0) continue;
      changed = true;
      v_add(i, j, 1);  // col i += col j: puts d_j below the pivot
      while (d.at(j, i) != 0) {
        bigint q = d.at(i, i) / d.at(j, i);
        u_add(i, j, -q);
        u_swap(i, j);
      }
      // the pivot is now +-gcd and divides everything in row i
      {
        bigint q = d.at(i, j) / d.at(i, i);
        v_add(j, i, -q);
      }
      if (d.at(i, i) < 0) {
        negate_row(d, i);
        negate_row(s.u, i);
        negate_col(s.u_inv, i);
      }
      if (d.at(j, j) < 0) {
        negate_row(d, j);
        negate_row(s.u, j);
        negate_col(s.u_inv, j);
      }
    }
  }

  s.rank = 0;
  for (int i = 0; i < n; ++i)
    if (d.at(i, i) != 0) {
      s.diagonal.push_back(d.at(i, i));
      ++s.rank;
    }
  return s;
}

std::optional<std::vector<bigint>> solve_integer(const smith_form& s, const std::vector<bigint>& b) {
  if (static_cast<int>(b.size()) != s.u.cols) throw std::invalid_argument("solve_integer: size mismatch");
  std::vector<bigint> ub = imul(s.u, b);
  std::vector<bigint> y(s.d.cols);
  const int nd = std::min(s.d.rows, s.d.cols);
  for (int i = 0; i < s.d.rows; ++i) {
    const bigint di = i < nd ? s.d.at(i, i) : bigint(0);
    if (di == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % di != 0) return std::nullopt;
      y[i] = ub[i] / di;
    }
  }
  return imul(s.v, y);
}

std::vector<std::vector<bigint>> integer_kernel(const smith_form& s) {
  std::vector<std::vector<bigint>> basis;
  for (int j = s.rank; j < s.d.cols; ++j) {
    std::vector<bigint> col(s.v.rows);
    for (int i = 0; i < s.v.rows; ++i) col[i] = s.v.at(i, j);
    basis.push_back(std::move(col));
  }
  return basis;
}

bigint integer_det(const imat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("integer_det: not square");
  const int n = m.rows;
  if (n == 0) return 1;
  imat a = m;
  bigint prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int p = -1;
      for (int r = k + 1; r < n; ++r)
        if (a.at(r, k) != 0) {
          p = r;
          break;
        }
      if (p < 0) return 0;
      swap_rows(a, k, p);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n - 1, n - 1) : bigint(-a.at(n - 1, n - 1));
}

}  // namespace vectk
