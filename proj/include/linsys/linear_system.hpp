#pragma once

// Linear systems L(d, m0, m1, ..., mn) of plane curves with general
// multiple base points, and their divisor classes dH - sum mi Ei on the
// blown-up plane.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace linsys {

using Int = std::int64_t;

/// Thrown when a system string does not match the grammar
/// `L(` d (`,` mult (`^` count)?)* `)`.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string input, std::size_t position);

  std::size_t position() const noexcept { return position_; }
  const std::string& input() const noexcept { return input_; }
  /// Input followed by a caret line pointing at the offending character.
  std::string caret() const;

 private:
  std::string input_;
  std::size_t position_;
};

namespace checked {
Int add(Int a, Int b);
Int sub(Int a, Int b);
Int mul(Int a, Int b);
}  // namespace checked

class DivisorClass;

/// The system of degree-d curves with multiplicity at least mi at pi.
///
/// Slot 0 is the distinguished point p0; slots 1.. are the tail. The
/// tail keeps the order it was built with so that slot-addressed moves
/// (Cremona, line splitting) can be replayed; `normalized()` gives the
/// canonical form with a sorted tail and no zero entries.
class LinearSystem {
 public:
  LinearSystem() = default;
  /// `mults` holds m0 first (may be empty, meaning no assigned points).
  LinearSystem(Int degree, std::vector<Int> mults);

  static LinearSystem quasi_homogeneous(Int degree, Int m0, Int m, std::size_t n);

  Int degree() const noexcept { return degree_; }
  Int m0() const noexcept { return mults_.empty() ? 0 : mults_[0]; }
  /// All slots, m0 first.
  std::span<const Int> mults() const noexcept { return mults_; }
  std::span<const Int> tail() const noexcept;
  std::size_t slot_count() const noexcept { return mults_.size(); }
  /// Multiplicity at `slot`, zero past the end.
  Int mult(std::size_t slot) const noexcept {
    return slot < mults_.size() ? mults_[slot] : 0;
  }

  /// Number of tail slots with nonzero multiplicity.
  std::size_t tail_points() const noexcept;
  Int max_tail_multiplicity() const noexcept;

  /// All nonzero tail multiplicities are equal.
  bool is_quasi_homogeneous() const noexcept;

  /// Sorted-descending tail with zeros removed; slot 0 always present.
  LinearSystem normalized() const;

  LinearSystem with_point(Int m) const;
  LinearSystem with_slot(std::size_t slot, Int m) const;

  DivisorClass as_class() const;

  /// Canonical text form, e.g. `L(22,7,6^12)`.
  std::string to_string() const;
  static LinearSystem parse(std::string_view text);

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;

 private:
  Int degree_ = 0;
  std::vector<Int> mults_;
};

/// dH - sum mi Ei with arbitrary integer coefficients.
class DivisorClass {
 public:
  DivisorClass() = default;
  DivisorClass(Int degree, std::vector<Int> mults);
  explicit DivisorClass(const LinearSystem& system);

  Int degree() const noexcept { return degree_; }
  std::span<const Int> mults() const noexcept { return mults_; }
  std::size_t slot_count() const noexcept { return mults_.size(); }
  Int mult(std::size_t slot) const noexcept {
    return slot < mults_.size() ? mults_[slot] : 0;
  }

  /// Pads with zero slots up to `slots`.
  DivisorClass padded(std::size_t slots) const;
  /// Throws std::domain_error if any coefficient is negative.
  LinearSystem as_system() const;
  bool is_effective_shape() const noexcept;

  DivisorClass& operator+=(const DivisorClass& other);
  DivisorClass& operator-=(const DivisorClass& other);
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator*(Int k, const DivisorClass& a);

  std::string to_string() const;
  static DivisorClass parse(std::string_view text);

  /// Equality up to trailing zero slots.
  friend bool operator==(const DivisorClass& a, const DivisorClass& b);

 private:
  Int degree_ = 0;
  std::vector<Int> mults_;
};

/// d(d+3)/2 - sum mi(mi+1)/2.
Int virtual_dim(const LinearSystem& system);
Int virtual_dim(const DivisorClass& cls);
/// max(-1, virtual_dim).
Int expected_dim(const LinearSystem& system);

/// d d' - sum mi mi'.
Int intersect(const DivisorClass& a, const DivisorClass& b);
/// D.K with K = -3H + sum Ei.
Int canonical_intersect(const DivisorClass& cls);
/// (D^2 + D.K)/2 + 1.
Int arithmetic_genus(const DivisorClass& cls);

/// Number of degree-d monomials, (d+1)(d+2)/2.
Int monomial_count(Int degree);
/// Number of linear conditions, sum mi(mi+1)/2.
Int condition_count(const LinearSystem& system);

}  // namespace linsys
