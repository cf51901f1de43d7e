#include "heis/poly.hpp"

#include <cmath>

namespace heis {

Poly Poly::constant(int nvars, double c) {
  Poly p(nvars);
  p.add_term(Monomial(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw DimensionError("poly: variable index out of range");
  Poly p(nvars);
  Monomial m(static_cast<std::size_t>(nvars), 0);
  m[static_cast<std::size_t>(index)] = 1;
  p.add_term(m, 1.0);
  return p;
}

Poly& Poly::add_term(const Monomial& m, double c) {
  if (static_cast<int>(m.size()) != nvars_) throw DimensionError("poly: monomial arity mismatch");
  if (c == 0.0) return *this;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  if (nvars_ != o.nvars_) throw DimensionError("poly: arity mismatch");
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  if (nvars_ != o.nvars_) throw DimensionError("poly: arity mismatch");
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (nvars_ != o.nvars_) throw DimensionError("poly: arity mismatch");
  Poly r(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Poly Poly::operator*(double s) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) r.add_term(m, c * s);
  return r;
}

Poly Poly::partial(int var) const {
  if (var < 0 || var >= nvars_) throw DimensionError("poly: partial index out of range");
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    auto e = m[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial d = m;
    d[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e - 1);
    r.add_term(d, c * static_cast<double>(e));
  }
  return r;
}

double Poly::eval(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_) throw DimensionError("poly: evaluation point arity mismatch");
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) t *= x[static_cast<Eigen::Index>(i)];
    sum += t;
  }
  return sum;
}

bool PolyVectorField::is_zero() const {
  for (const auto& p : comp)
    if (!p.is_zero()) return false;
  return true;
}

Poly PolyVectorField::apply(const Poly& q) const {
  Poly r(q.nvars());
  for (int i = 0; i < nvars(); ++i) {
    if (comp[static_cast<std::size_t>(i)].is_zero()) continue;
    r = r + comp[static_cast<std::size_t>(i)] * q.partial(i);
  }
  return r;
}

PolyVectorField lie_bracket(const PolyVectorField& v, const PolyVectorField& w) {
  if (v.nvars() != w.nvars()) throw DimensionError("lie_bracket: arity mismatch");
  PolyVectorField r(v.nvars());
  for (int j = 0; j < v.nvars(); ++j)
    r.comp[static_cast<std::size_t>(j)] =
        v.apply(w.comp[static_cast<std::size_t>(j)]) - w.apply(v.comp[static_cast<std::size_t>(j)]);
  return r;
}

PolyVectorField standard_frame_field(int n, int j) {
  if (n < 1) throw DimensionError("standard_frame_field: n must be positive");
  const int nv = 2 * n + 1;
  if (j < 1 || j > nv) throw DimensionError("standard_frame_field: index out of range");
  PolyVectorField f(nv);
  if (j == nv) {
    f.comp[static_cast<std::size_t>(nv - 1)] = Poly::constant(nv, 1.0);  // Z~
    return f;
  }
  f.comp[static_cast<std::size_t>(j - 1)] = Poly::constant(nv, 1.0);
  if (j <= n) {
    // X~_k = d_k - x_{k+n} d_{2n+1}
    f.comp[static_cast<std::size_t>(nv - 1)] = Poly::variable(nv, j + n - 1) * (-1.0);
  } else {
    // X~_{k+n} = d_{k+n} + x_k d_{2n+1}
    f.comp[static_cast<std::size_t>(nv - 1)] = Poly::variable(nv, j - n - 1);
  }
  return f;
}

}  // namespace heis
