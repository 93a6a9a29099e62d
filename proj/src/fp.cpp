#include "phasekit/fp.hpp"

#include <cctype>
#include <charconv>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasekit/error.hpp"

namespace phasekit {

bool is_prime(unsigned v) noexcept {
  if (v < 2) return false;
  for (unsigned d = 2; static_cast<std::uint64_t>(d) * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

Field::Field(unsigned p, unsigned max_depth) : p_(p), max_depth_(0) {
  if (!is_prime(p)) throw Error("modulus " + std::to_string(p) + " is not prime");
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  powers_.push_back(1);
  while (max_depth_ < max_depth && powers_.back() <= kLimit / p) {
    powers_.push_back(powers_.back() * p);
    ++max_depth_;
  }
}

std::uint64_t Field::modulus(unsigned depth) const {
  if (depth > max_depth_) {
    throw Error("phase depth " + std::to_string(depth) + " exceeds maximum " +
                std::to_string(max_depth_));
  }
  return powers_[depth];
}

Residue Field::reduce(std::int64_t v) const noexcept {
  auto r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Residue>(r);
}

Residue Field::pow(Residue a, std::uint64_t e) const noexcept {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue Field::inv(Residue a) const {
  if (a % p_ == 0) throw Error("zero has no inverse in F_p");
  return pow(a, p_ - 2);
}

Residue Field::factorial(unsigned k) const noexcept {
  Residue r = 1 % p_;
  for (unsigned i = 2; i <= k; ++i) r = mul(r, i % p_);
  return r;
}

PhaseValue Field::phase(std::uint64_t numerator, unsigned depth) const {
  std::uint64_t num = numerator % modulus(depth);
  if (num == 0) return {};
  while (depth > 0 && num % p_ == 0) {
    num /= p_;
    --depth;
  }
  return {num, depth};
}

PhaseValue Field::combine(PhaseValue a, PhaseValue b, int sign) const {
  const unsigned depth = std::max(a.depth, b.depth);
  const std::uint64_t m = modulus(depth);
  const std::uint64_t x = numerator_at(a, depth);
  const std::uint64_t y = numerator_at(b, depth);
  return phase(sign >= 0 ? (x + y) % m : (x + m - y) % m, depth);
}

PhaseValue Field::negate(PhaseValue a) const {
  if (a.numerator == 0) return {};
  return {modulus(a.depth) - a.numerator, a.depth};
}

std::uint64_t Field::numerator_at(PhaseValue a, unsigned depth) const {
  if (depth < a.depth) throw Error("cannot lower the depth of a phase");
  return (a.numerator % modulus(a.depth)) * modulus(depth - a.depth);
}

std::complex<double> root_of_unity(std::uint64_t numerator, std::uint64_t modulus) {
  numerator %= modulus;
  if (numerator == 0) return {1.0, 0.0};
  // Exact quarter turns; everything else is reduced to an angle in (-pi, pi].
  const long double frac = static_cast<long double>(numerator) / static_cast<long double>(modulus);
  if (2 * numerator == modulus) return {-1.0, 0.0};
  if (4 * numerator == modulus) return {0.0, 1.0};
  if (4 * numerator == 3 * modulus) return {0.0, -1.0};
  const long double angle = 2.0L * std::numbers::pi_v<long double> *
                            (frac > 0.5L ? frac - 1.0L : frac);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::complex<double> Field::to_complex(PhaseValue a) const {
  return root_of_unity(a.numerator, modulus(a.depth));
}

std::complex<double> Field::e_p(Residue x) const { return to_complex(embed(x)); }

Residue Field::to_residue(PhaseValue a) const {
  const PhaseValue n = normalize(a);
  if (n.depth > 1) {
    throw Error("phase " + std::to_string(n.numerator) + "/p^" + std::to_string(n.depth) +
                " does not lie in U_1");
  }
  return static_cast<Residue>(n.depth == 0 ? 0 : n.numerator);
}

RootTable::RootTable(const Field& field, unsigned depth) {
  const std::uint64_t m = field.modulus(depth);
  if (m > (std::uint64_t{1} << 24)) throw Error("root table too large");
  roots_.resize(m);
  for (std::uint64_t k = 0; k < m; ++k) roots_[k] = root_of_unity(k, m);
}

VectorSpace::VectorSpace(unsigned p, unsigned n) : p_(p), n_(n), size_(1) {
  strides_.reserve(n);
  for (unsigned i = 0; i < n; ++i) {
    strides_.push_back(size_);
    if (size_ > kMaxSize / p) throw Error("F_p^n too large for a dense table");
    size_ *= p;
  }
}

FpVector VectorSpace::point(std::size_t index) const {
  FpVector x(n_);
  for (unsigned i = 0; i < n_; ++i) {
    x[i] = static_cast<Residue>(index % p_);
    index /= p_;
  }
  return x;
}

std::size_t VectorSpace::index(std::span<const Residue> x) const {
  if (x.size() != n_) throw Error("dimension mismatch: expected " + std::to_string(n_));
  std::size_t idx = 0;
  for (unsigned i = 0; i < n_; ++i) {
    if (x[i] >= p_) throw Error("coordinate out of range");
    idx += x[i] * strides_[i];
  }
  return idx;
}

std::size_t VectorSpace::add(std::size_t a, std::size_t b) const {
  std::size_t result = 0;
  for (unsigned i = 0; i < n_; ++i) {
    result += ((a % p_ + b % p_) % p_) * strides_[i];
    a /= p_;
    b /= p_;
  }
  return result;
}

std::vector<std::size_t> VectorSpace::translation(std::span<const Residue> h) const {
  const std::size_t hidx = index(h);
  std::vector<std::size_t> perm(size_);
  if (p_ == 2) {
    for (std::size_t x = 0; x < size_; ++x) perm[x] = x ^ hidx;
    return perm;
  }
  for (std::size_t x = 0; x < size_; ++x) perm[x] = add(x, hidx);
  return perm;
}

FpMatrix::FpMatrix(unsigned n, std::vector<Residue> row_major) : n_(n), data_(std::move(row_major)) {
  if (data_.size() != static_cast<std::size_t>(n) * n) throw Error("matrix shape mismatch");
}

FpMatrix FpMatrix::identity(unsigned n) {
  FpMatrix m(n);
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FpVector FpMatrix::apply(const Field& field, std::span<const Residue> x) const {
  if (x.size() != n_) throw Error("dimension mismatch in matrix-vector product");
  FpVector y(n_, 0);
  for (unsigned r = 0; r < n_; ++r) {
    std::uint64_t acc = 0;
    for (unsigned c = 0; c < n_; ++c) acc += static_cast<std::uint64_t>(at(r, c)) * x[c];
    y[r] = static_cast<Residue>(acc % field.p());
  }
  return y;
}

FpMatrix FpMatrix::multiply(const Field& field, const FpMatrix& rhs) const {
  if (rhs.n_ != n_) throw Error("dimension mismatch in matrix product");
  FpMatrix out(n_);
  for (unsigned r = 0; r < n_; ++r) {
    for (unsigned c = 0; c < n_; ++c) {
      std::uint64_t acc = 0;
      for (unsigned k = 0; k < n_; ++k) acc += static_cast<std::uint64_t>(at(r, k)) * rhs.at(k, c);
      out.at(r, c) = static_cast<Residue>(acc % field.p());
    }
  }
  return out;
}

std::optional<FpMatrix> FpMatrix::inverse(const Field& field) const {
  FpMatrix a = *this;
  FpMatrix inv = identity(n_);
  for (unsigned col = 0; col < n_; ++col) {
    unsigned pivot = col;
    while (pivot < n_ && a.at(pivot, col) == 0) ++pivot;
    if (pivot == n_) return std::nullopt;
    if (pivot != col) {
      for (unsigned c = 0; c < n_; ++c) {
        std::swap(a.at(pivot, c), a.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    }
    const Residue scale = field.inv(a.at(col, col));
    for (unsigned c = 0; c < n_; ++c) {
      a.at(col, c) = field.mul(a.at(col, c), scale);
      inv.at(col, c) = field.mul(inv.at(col, c), scale);
    }
    for (unsigned r = 0; r < n_; ++r) {
      if (r == col || a.at(r, col) == 0) continue;
      const Residue factor = a.at(r, col);
      for (unsigned c = 0; c < n_; ++c) {
        a.at(r, c) = field.sub(a.at(r, c), field.mul(factor, a.at(col, c)));
        inv.at(r, c) = field.sub(inv.at(r, c), field.mul(factor, inv.at(col, c)));
      }
    }
  }
  return inv;
}

Residue dot(const Field& field, std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) throw Error("dimension mismatch in dot product");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<std::uint64_t>(a[i]) * b[i];
  return static_cast<Residue>(acc % field.p());
}

FpVector add(const Field& field, std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) throw Error("dimension mismatch in vector sum");
  FpVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = field.add(a[i], b[i]);
  return out;
}

std::string format_phase(const Field& field, PhaseValue a) {
  const PhaseValue n = field.normalize(a);
  return std::to_string(n.numerator) + "/" + std::to_string(field.p()) + "^" +
         std::to_string(n.depth);
}

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

PhaseValue parse_phase(const Field& field, std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  const auto caret = text.find('^');
  if (slash == std::string_view::npos || caret == std::string_view::npos || caret < slash) {
    throw Error("phase must have the form num/p^D: '" + std::string(text) + "'");
  }
  const auto num = parse_uint(text.substr(0, slash), "phase numerator");
  const auto base = parse_uint(text.substr(slash + 1, caret - slash - 1), "phase base");
  const auto depth = parse_uint(text.substr(caret + 1), "phase depth");
  if (base != field.p()) {
    throw Error("phase base " + std::to_string(base) + " does not match p=" +
                std::to_string(field.p()));
  }
  if (depth > field.max_depth()) throw Error("phase depth exceeds maximum");
  const auto d = static_cast<unsigned>(depth);
  if (num >= field.modulus(d)) throw Error("phase numerator out of range");
  return field.phase(num, d);
}

std::string format_vector(std::span<const Residue> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

FpVector parse_vector(const Field& field, std::string_view text) {
  FpVector v;
  text = trim(text);
  if (text.empty()) return v;
  while (true) {
    const auto comma = text.find(',');
    const auto digit = parse_uint(trim(text.substr(0, comma)), "vector coordinate");
    if (digit >= field.p()) throw Error("vector coordinate out of range for p");
    v.push_back(static_cast<Residue>(digit));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return v;
}

}  // namespace phasekit
