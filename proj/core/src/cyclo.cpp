#include "ringrep/cyclo.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ringrep {
namespace {

int euler_phi(int m) {
  int result = m, n = m;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

// Exact division of integer polynomials (monic divisor), used to build
// cyclotomic polynomials via x^m - 1 = prod_{d | m} Phi_d.
std::vector<mpz_class> zdiv(const std::vector<mpz_class>& num,
                            const std::vector<mpz_class>& den) {
  std::vector<mpz_class> rem = num;
  int dn = static_cast<int>(num.size()) - 1;
  int dd = static_cast<int>(den.size()) - 1;
  std::vector<mpz_class> quo(static_cast<size_t>(dn - dd + 1));
  for (int i = dn; i >= dd; --i) {
    mpz_class c = rem[static_cast<size_t>(i)];
    quo[static_cast<size_t>(i - dd)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dd; ++j)
      rem[static_cast<size_t>(i - dd + j)] -= c * den[static_cast<size_t>(j)];
  }
  for (const mpz_class& c : rem)
    if (c != 0) throw std::logic_error("cyclotomic division not exact");
  return quo;
}

struct ConductorData {
  int m = 1;
  int phi = 1;
  std::vector<mpz_class> poly;              // Phi_m, monic, degree phi
  std::vector<std::vector<mpq_class>> xpw;  // x^j mod Phi_m for j < 2m
};

const ConductorData& conductor_data(int m) {
  static std::map<int, ConductorData> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  // Phi_m by exact division; build recursively for divisors first.
  std::vector<mpz_class> num(static_cast<size_t>(m) + 1, mpz_class(0));
  num[0] = -1;
  num[static_cast<size_t>(m)] = 1;
  std::vector<mpz_class> phi_m = num;  // for m = 1: x - 1
  if (m > 1) {
    std::vector<mpz_class> acc = {mpz_class(1)};
    for (int d = 1; d < m; ++d) {
      if (m % d != 0) continue;
      const ConductorData& sub = conductor_data(d);
      std::vector<mpz_class> next(acc.size() + sub.poly.size() - 1, mpz_class(0));
      for (size_t i = 0; i < acc.size(); ++i)
        for (size_t j = 0; j < sub.poly.size(); ++j)
          next[i + j] += acc[i] * sub.poly[j];
      acc = std::move(next);
    }
    phi_m = zdiv(num, acc);
  }

  ConductorData data;
  data.m = m;
  data.phi = static_cast<int>(phi_m.size()) - 1;
  data.poly = phi_m;
  // Power table x^j mod Phi_m for j < 2m (covers products and promotions).
  data.xpw.resize(static_cast<size_t>(2 * m));
  std::vector<mpq_class> cur(static_cast<size_t>(data.phi), mpq_class(0));
  cur[0] = 1;
  for (int j = 0; j < 2 * m; ++j) {
    data.xpw[static_cast<size_t>(j)] = cur;
    // cur <- x * cur mod Phi_m
    mpq_class top = cur[static_cast<size_t>(data.phi - 1)];
    for (int i = data.phi - 1; i >= 1; --i) cur[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
    cur[0] = 0;
    if (top != 0)
      for (int i = 0; i < data.phi; ++i)
        cur[static_cast<size_t>(i)] -= top * mpq_class(data.poly[static_cast<size_t>(i)]);
  }
  return cache.emplace(m, std::move(data)).first->second;
}

}  // namespace

Cyclo Cyclo::root_of_unity(int m, long k) {
  if (m < 1) throw std::invalid_argument("Cyclo: conductor must be positive");
  const ConductorData& d = conductor_data(m);
  long kk = ((k % m) + m) % m;
  Cyclo out;
  out.m_ = m;
  out.c_ = d.xpw[static_cast<size_t>(kk)];
  return out;
}

Cyclo Cyclo::promoted(int M) const {
  if (M == m_) return *this;
  if (M % m_ != 0) throw std::invalid_argument("Cyclo::promoted: not a multiple");
  const ConductorData& d = conductor_data(M);
  Cyclo out;
  out.m_ = M;
  out.c_.assign(static_cast<size_t>(d.phi), mpq_class(0));
  long step = M / m_;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const std::vector<mpq_class>& pw = d.xpw[i * static_cast<size_t>(step)];
    for (int j = 0; j < d.phi; ++j) out.c_[static_cast<size_t>(j)] += c_[i] * pw[static_cast<size_t>(j)];
  }
  return out;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
  int M = static_cast<int>(std::lcm(m_, o.m_));
  Cyclo a = promoted(M), b = o.promoted(M);
  for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
  return a;
}

Cyclo Cyclo::operator-(const Cyclo& o) const {
  int M = static_cast<int>(std::lcm(m_, o.m_));
  Cyclo a = promoted(M), b = o.promoted(M);
  for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
  return a;
}

Cyclo Cyclo::operator-() const {
  Cyclo a = *this;
  for (auto& v : a.c_) v = -v;
  return a;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
  int M = static_cast<int>(std::lcm(m_, o.m_));
  Cyclo a = promoted(M), b = o.promoted(M);
  const ConductorData& d = conductor_data(M);
  std::vector<mpq_class> prod(2 * a.c_.size(), mpq_class(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
  }
  Cyclo out;
  out.m_ = M;
  out.c_.assign(static_cast<size_t>(d.phi), mpq_class(0));
  for (size_t k = 0; k < prod.size(); ++k) {
    if (prod[k] == 0) continue;
    const std::vector<mpq_class>& pw = d.xpw[k];
    for (int j = 0; j < d.phi; ++j) out.c_[static_cast<size_t>(j)] += prod[k] * pw[static_cast<size_t>(j)];
  }
  return out;
}

bool Cyclo::operator==(const Cyclo& o) const {
  int M = static_cast<int>(std::lcm(m_, o.m_));
  return promoted(M).c_ == o.promoted(M).c_;
}

Cyclo Cyclo::galois(long j) const {
  long jj = ((j % m_) + m_) % m_;
  if (std::gcd(jj, static_cast<long>(m_)) != 1)
    throw std::invalid_argument("Cyclo::galois: exponent not coprime to conductor");
  const ConductorData& d = conductor_data(m_);
  Cyclo out;
  out.m_ = m_;
  out.c_.assign(static_cast<size_t>(d.phi), mpq_class(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const std::vector<mpq_class>& pw = d.xpw[(i * static_cast<size_t>(jj)) % static_cast<size_t>(m_)];
    for (int k = 0; k < d.phi; ++k) out.c_[static_cast<size_t>(k)] += c_[i] * pw[static_cast<size_t>(k)];
  }
  return out;
}

bool Cyclo::is_zero() const {
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

mpq_class Cyclo::rational_value() const {
  if (!is_rational()) throw std::domain_error("Cyclo: not rational");
  return c_[0];
}

bool Cyclo::is_integer() const {
  return is_rational() && c_[0].get_den() == 1;
}

int Cyclo::compare(const Cyclo& a, const Cyclo& b) {
  int M = static_cast<int>(std::lcm(a.m_, b.m_));
  Cyclo pa = a.promoted(M), pb = b.promoted(M);
  for (size_t i = 0; i < pa.c_.size(); ++i) {
    int c = cmp(pa.c_[i], pb.c_[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::string Cyclo::str() const {
  if (is_rational()) return c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    mpq_class v = c_[i];
    if (!first) {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) v = -v;
    } else if (v < 0) {
      os << "-";
      v = -v;
    }
    first = false;
    bool unit_coeff = (v == 1 && i > 0);
    if (!unit_coeff) os << v.get_str();
    if (i > 0) {
      if (!unit_coeff) os << "*";
      os << "z" << m_;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::pair<double, double> Cyclo::to_complex() const {
  double re = 0, im = 0;
  const double tau = 6.283185307179586476925286766559;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    double v = c_[i].get_d();
    re += v * std::cos(tau * static_cast<double>(i) / m_);
    im += v * std::sin(tau * static_cast<double>(i) / m_);
  }
  return {re, im};
}

}  // namespace ringrep
