#include "vectk/cochain.hpp"

#include <algorithm>

namespace vectk {

bigrat normalize_turn(const bigrat& q) {
  bigint num = boost::multiprecision::numerator(q);
  bigint den = boost::multiprecision::denominator(q);  // always positive
  bigint r = num % den;
  if (r < 0) r += den;
  return bigrat(r, den);
}

bigrat centered_turn(const bigrat& q) {
  bigrat n = normalize_turn(q);
  if (n > bigrat(1, 2)) n -= 1;
  return n;
}

std::string turn_to_string(const bigrat& q) {
  bigrat n = normalize_turn(q);
  bigint num = boost::multiprecision::numerator(n);
  bigint den = boost::multiprecision::denominator(n);
  if (num == 0) return "0";
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bigrat turn_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return normalize_turn(bigrat(bigint(s)));
    bigint num(s.substr(0, slash));
    bigint den(s.substr(slash + 1));
    if (den == 0) fail(errc::bad_input, "zero denominator in turn '" + s + "'");
    return normalize_turn(bigrat(num, den));
  } catch (const std::exception&) {
    fail(errc::bad_input, "malformed turn '" + s + "'");
  }
}

u1_cochain zero_u1_cochain(const simplicial_complex& k, int degree) {
  if (degree < 0) fail(errc::degree_out_of_range, "cochain degree must be nonnegative");
  return {degree, std::vector<bigrat>(k.count(degree))};
}

u1_cochain u1_scale(const u1_cochain& c, const bigint& r) {
  u1_cochain out{c.degree, c.turns};
  for (auto& t : out.turns) t = normalize_turn(t * bigrat(r));
  return out;
}

u1_cochain u1_add(const u1_cochain& a, const u1_cochain& b) {
  if (a.degree != b.degree || a.turns.size() != b.turns.size())
    fail(errc::shape_mismatch, "cochain shapes differ");
  u1_cochain out{a.degree, a.turns};
  for (size_t i = 0; i < out.turns.size(); ++i) out.turns[i] = normalize_turn(out.turns[i] + b.turns[i]);
  return out;
}

u1_cochain u1_delta(const simplicial_complex& k, const u1_cochain& c) {
  if (static_cast<int>(c.turns.size()) != k.count(c.degree))
    fail(errc::bad_input, "cochain has wrong length");
  u1_cochain out{c.degree + 1, std::vector<bigrat>(k.count(c.degree + 1))};
  if (c.degree >= k.dim()) return out;
  const auto& cofaces = k.simplices(c.degree + 1);
  for (size_t r = 0; r < cofaces.size(); ++r) {
    const simplex& s = cofaces[r];
    bigrat acc = 0;
    int sign = 1;
    for (size_t j = 0; j < s.size(); ++j) {
      simplex f;
      for (size_t i = 0; i < s.size(); ++i)
        if (i != j) f.push_back(s[i]);
      const int idx = k.index_of(f);
      acc += sign > 0 ? c.turns[idx] : -c.turns[idx];
      sign = -sign;
    }
    out.turns[r] = normalize_turn(acc);
  }
  return out;
}

bool u1_is_cocycle(const simplicial_complex& k, const u1_cochain& c) {
  auto d = u1_delta(k, c);
  return std::all_of(d.turns.begin(), d.turns.end(), [](const bigrat& t) { return t == 0; });
}

std::optional<u1_cochain> solve_u1_coboundary(cohomology_cache& cc, const u1_cochain& c) {
  const auto& k = cc.complex();
  if (!u1_is_cocycle(k, c)) fail(errc::not_a_cocycle, "not a U(1) cocycle");
  if (c.degree < 1) fail(errc::degree_out_of_range, "no coboundaries below degree 1");

  // delta b = c (mod 1) for rational b: with U delta V = D, set y = V^-1 b;
  // rows with d_i != 0 solve freely over Q, zero rows demand integrality.
  const auto& s = cc.coboundary_snf(c.degree - 1);
  std::vector<bigrat> u(s.u.rows);
  for (int i = 0; i < s.u.rows; ++i) {
    bigrat acc = 0;
    for (int j = 0; j < s.u.cols; ++j)
      if (s.u.at(i, j) != 0) acc += bigrat(s.u.at(i, j)) * c.turns[j];
    u[i] = acc;
  }
  const int n = std::min(s.d.rows, s.d.cols);
  std::vector<bigrat> y(s.d.cols);
  for (int i = 0; i < s.d.rows; ++i) {
    const bigint di = i < n ? s.d.at(i, i) : bigint(0);
    if (di == 0) {
      if (boost::multiprecision::denominator(u[i]) != 1) return std::nullopt;
    } else {
      y[i] = u[i] / bigrat(di);
    }
  }
  u1_cochain b{c.degree - 1, std::vector<bigrat>(k.count(c.degree - 1))};
  for (int r = 0; r < s.v.rows; ++r) {
    bigrat acc = 0;
    for (int j = 0; j < s.v.cols; ++j)
      if (s.v.at(r, j) != 0) acc += bigrat(s.v.at(r, j)) * y[j];
    b.turns[r] = normalize_turn(acc);
  }
  auto db = u1_delta(k, b);
  for (size_t i = 0; i < db.turns.size(); ++i)
    if (db.turns[i] != c.turns[i]) fail(errc::internal, "coboundary witness failed to verify");
  return b;
}

integer_cochain connecting_to_integer(cohomology_cache& cc, const u1_cochain& c) {
  const auto& k = cc.complex();
  if (!u1_is_cocycle(k, c)) fail(errc::not_a_cocycle, "not a U(1) cocycle");
  integer_cochain out{c.degree + 1, std::vector<bigint>(k.count(c.degree + 1))};
  if (c.degree >= k.dim()) return out;
  const auto& cofaces = k.simplices(c.degree + 1);
  for (size_t r = 0; r < cofaces.size(); ++r) {
    const simplex& s = cofaces[r];
    bigrat acc = 0;
    int sign = 1;
    for (size_t j = 0; j < s.size(); ++j) {
      simplex f;
      for (size_t i = 0; i < s.size(); ++i)
        if (i != j) f.push_back(s[i]);
      const bigrat t = normalize_turn(c.turns[k.index_of(f)]);
      acc += sign > 0 ? t : -t;
      sign = -sign;
    }
    if (boost::multiprecision::denominator(acc) != 1)
      fail(errc::internal, "connecting map produced a non-integer value");
    out.values[r] = boost::multiprecision::numerator(acc);
  }
  return out;
}

}  // namespace vectk
