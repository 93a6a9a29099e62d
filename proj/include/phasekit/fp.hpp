#pragma once

// Exact arithmetic over F_p and over the phase groups U_D = (1/p^D)Z/Z.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phasekit {

using Residue = std::uint32_t;
using FpVector = std::vector<Residue>;

/// An element numerator/p^depth of R/Z. Values produced by Field are
/// normalized: either numerator == 0 and depth == 0, or p does not divide
/// numerator.
struct PhaseValue {
  std::uint64_t numerator = 0;
  unsigned depth = 0;

  friend bool operator==(const PhaseValue&, const PhaseValue&) = default;
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// Context object for a prime p. Every table, polynomial and phase operation
/// takes its modulus from a Field rather than storing p per element.
class Field {
 public:
  static constexpr unsigned kDefaultMaxDepth = 16;

  /// Throws Error if p is not prime. The depth bound is clipped so that p^D
  /// stays below 2^62.
  explicit Field(unsigned p, unsigned max_depth = kDefaultMaxDepth);

  unsigned p() const noexcept { return p_; }
  unsigned max_depth() const noexcept { return max_depth_; }
  /// p^depth; throws Error when depth exceeds max_depth().
  std::uint64_t modulus(unsigned depth) const;

  Residue reduce(std::int64_t v) const noexcept;
  Residue add(Residue a, Residue b) const noexcept { return (a + b) % p_; }
  Residue sub(Residue a, Residue b) const noexcept { return (a + p_ - b) % p_; }
  Residue neg(Residue a) const noexcept { return (p_ - a) % p_; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }
  /// a^e with the convention 0^0 = 1.
  Residue pow(Residue a, std::uint64_t e) const noexcept;
  /// Multiplicative inverse; throws Error on zero.
  Residue inv(Residue a) const;
  Residue factorial(unsigned k) const noexcept;

  /// numerator/p^depth mod 1, reduced to minimal depth.
  PhaseValue phase(std::uint64_t numerator, unsigned depth) const;
  PhaseValue normalize(PhaseValue a) const { return phase(a.numerator, a.depth); }
  /// a + sign*b, sign in {+1,-1}.
  PhaseValue combine(PhaseValue a, PhaseValue b, int sign) const;
  PhaseValue negate(PhaseValue a) const;
  /// Numerator of a when written over p^depth (depth >= a.depth).
  std::uint64_t numerator_at(PhaseValue a, unsigned depth) const;

  std::complex<double> to_complex(PhaseValue a) const;
  /// e_p(x) = e(|x|/p).
  std::complex<double> e_p(Residue x) const;

  /// The embedding F_p -> U_1, x -> |x|/p.
  PhaseValue embed(Residue x) const { return phase(x % p_, 1); }
  /// Inverse of embed. Throws Error if the phase does not lie in U_1.
  Residue to_residue(PhaseValue a) const;

  friend bool operator==(const Field& a, const Field& b) noexcept { return a.p_ == b.p_; }

 private:
  unsigned p_;
  unsigned max_depth_;
  std::vector<std::uint64_t> powers_;
};

bool is_prime(unsigned v) noexcept;

/// e(numerator/modulus) with symmetric range reduction, so that quarter turns
/// and half turns come out exact.
std::complex<double> root_of_unity(std::uint64_t numerator, std::uint64_t modulus);

/// Precomputed e(k/p^D) for k in [0, p^D).
class RootTable {
 public:
  RootTable(const Field& field, unsigned depth);

  const std::complex<double>& operator[](std::uint64_t numerator) const {
    return roots_[numerator];
  }
  std::uint64_t modulus() const noexcept { return roots_.size(); }

 private:
  std::vector<std::complex<double>> roots_;
};

/// Dense index layout of F_p^n: a point x maps to sum_i x_i p^i, so x_1 is the
/// least significant digit.
class VectorSpace {
 public:
  static constexpr std::size_t kMaxSize = std::size_t{1} << 28;

  VectorSpace(unsigned p, unsigned n);

  unsigned p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(unsigned axis) const noexcept { return strides_[axis]; }

  FpVector point(std::size_t index) const;
  std::size_t index(std::span<const Residue> x) const;
  std::size_t add(std::size_t a, std::size_t b) const;
  /// The permutation idx(x) -> idx(x + h).
  std::vector<std::size_t> translation(std::span<const Residue> h) const;

 private:
  unsigned p_;
  unsigned n_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

/// Square matrix over F_p, row-major.
class FpMatrix {
 public:
  explicit FpMatrix(unsigned n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0) {}
  FpMatrix(unsigned n, std::vector<Residue> row_major);

  static FpMatrix identity(unsigned n);

  unsigned n() const noexcept { return n_; }
  Residue& at(unsigned row, unsigned col) { return data_[row * n_ + col]; }
  Residue at(unsigned row, unsigned col) const { return data_[row * n_ + col]; }
  const std::vector<Residue>& data() const noexcept { return data_; }

  FpVector apply(const Field& field, std::span<const Residue> x) const;
  FpMatrix multiply(const Field& field, const FpMatrix& rhs) const;
  /// Gauss-Jordan inverse; nullopt if singular.
  std::optional<FpMatrix> inverse(const Field& field) const;

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  unsigned n_;
  std::vector<Residue> data_;
};

Residue dot(const Field& field, std::span<const Residue> a, std::span<const Residue> b);
FpVector add(const Field& field, std::span<const Residue> a, std::span<const Residue> b);

// Text forms: a phase is "num/p^D" (e.g. "3/2^3"), a vector is "1,0,2".
std::string format_phase(const Field& field, PhaseValue a);
PhaseValue parse_phase(const Field& field, std::string_view text);
std::string format_vector(std::span<const Residue> v);
FpVector parse_vector(const Field& field, std::string_view text);

}  // namespace phasekit
