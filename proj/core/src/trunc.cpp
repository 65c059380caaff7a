#include "ringrep/trunc.hpp"

#include <stdexcept>

#include "ringrep/numth.hpp"

namespace ringrep {

TruncRing::TruncRing(const FieldTower& tower, int qdeg, int r)
    : F_(&tower), qdeg_(qdeg), r_(r) {
  if (r < 1 || r > kMaxTruncLen)
    throw std::invalid_argument("TruncRing: truncation length out of range");
  if (qdeg < 1 || tower.deg() % qdeg != 0)
    throw std::invalid_argument("TruncRing: qdeg must divide tower degree");
  q_ = ipow_u64(static_cast<std::uint64_t>(tower.p()),
                static_cast<unsigned>(qdeg));
  // encode() uses mixed radix |tower|^i; insist it fits.
  std::uint64_t radix = tower.size();
  std::uint64_t total = 1;
  for (int i = 0; i < r; ++i) {
    if (total > (1ull << 62) / radix)
      throw std::invalid_argument("TruncRing: ring too large to encode");
    total *= radix;
  }
}

Re TruncRing::eps() const {
  Re x{};
  if (r_ >= 2) x[1] = F_->one();
  return x;
}

Re TruncRing::constant(const Fe& a) const {
  Re x{};
  x[0] = a;
  return x;
}

Re TruncRing::monomial(const Fe& a, int i) const {
  Re x{};
  if (i >= 0 && i < r_) x[i] = a;
  return x;
}

bool TruncRing::is_zero(const Re& x) const {
  for (int i = 0; i < r_; ++i)
    if (!F_->is_zero(x[i])) return false;
  return true;
}

Re TruncRing::add(const Re& x, const Re& y) const {
  Re z{};
  for (int i = 0; i < r_; ++i) z[i] = F_->add(x[i], y[i]);
  return z;
}

Re TruncRing::sub(const Re& x, const Re& y) const {
  Re z{};
  for (int i = 0; i < r_; ++i) z[i] = F_->sub(x[i], y[i]);
  return z;
}

Re TruncRing::neg(const Re& x) const {
  Re z{};
  for (int i = 0; i < r_; ++i) z[i] = F_->neg(x[i]);
  return z;
}

Re TruncRing::mul(const Re& x, const Re& y) const {
  Re z{};
  for (int i = 0; i < r_; ++i)
    for (int j = 0; i + j < r_; ++j)
      z[i + j] = F_->add(z[i + j], F_->mul(x[i], y[j]));
  return z;
}

Re TruncRing::inv(const Re& x) const {
  if (!is_unit(x)) throw std::domain_error("TruncRing::inv: not a unit");
  Fe c0 = F_->inv(x[0]);
  Re b{};
  b[0] = c0;
  // b_k = -c0^{-1} * sum_{i=1..k} x_i b_{k-i}
  for (int k = 1; k < r_; ++k) {
    Fe s{};
    for (int i = 1; i <= k; ++i) s = F_->add(s, F_->mul(x[i], b[k - i]));
    b[k] = F_->neg(F_->mul(c0, s));
  }
  return b;
}

int TruncRing::valuation(const Re& x) const {
  for (int i = 0; i < r_; ++i)
    if (!F_->is_zero(x[i])) return i;
  return r_;
}

Re TruncRing::reduce(const Re& x, int rp) const {
  if (rp < 0 || rp > r_)
    throw std::invalid_argument("TruncRing::reduce: bad target length");
  Re z{};
  for (int i = 0; i < rp; ++i) z[i] = x[i];
  return z;
}

Re TruncRing::frobenius(const Re& x, int e) const {
  Re z{};
  for (int i = 0; i < r_; ++i) z[i] = F_->frob(x[i], qdeg_ * e);
  return z;
}

std::uint64_t TruncRing::encode(const Re& x) const {
  std::uint64_t v = 0;
  for (int i = r_ - 1; i >= 0; --i) v = v * F_->size() + F_->encode(x[i]);
  return v;
}

Re TruncRing::decode(std::uint64_t v) const {
  Re x{};
  for (int i = 0; i < r_; ++i) {
    x[i] = F_->decode(v % F_->size());
    v /= F_->size();
  }
  if (v != 0) throw std::invalid_argument("TruncRing::decode: out of range");
  return x;
}

std::vector<Re> TruncRing::elements(int d) const {
  std::vector<Fe> coeffs = F_->subfield(d);
  std::vector<Re> out;
  out.reserve(static_cast<size_t>(1) << 1);
  std::vector<size_t> idx(static_cast<size_t>(r_), 0);
  for (;;) {
    Re x{};
    for (int i = 0; i < r_; ++i) x[i] = coeffs[idx[i]];
    out.push_back(x);
    int i = 0;
    while (i < r_ && ++idx[i] == coeffs.size()) idx[i++] = 0;
    if (i == r_) break;
  }
  std::sort(out.begin(), out.end(), [this](const Re& a, const Re& b) {
    return encode(a) < encode(b);
  });
  return out;
}

std::vector<Re> TruncRing::units(int d) const {
  std::vector<Re> all = elements(d);
  std::vector<Re> out;
  out.reserve(all.size());
  for (const Re& x : all)
    if (is_unit(x)) out.push_back(x);
  return out;
}

}  // namespace ringrep
