#pragma once

// Quadratic Cremona transformations and fixed-line splitting acting on
// multiplicity vectors. Slots index LinearSystem::mults(), so slot 0 is p0.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "linsys/linear_system.hpp"

namespace linsys {

class CremonaError : public std::domain_error {
 public:
  enum class Kind { NegativeEntry, NotFixed };

  CremonaError(Kind kind, std::size_t slot, const std::string& message)
      : std::domain_error(message), kind_(kind), slot_(slot) {}

  Kind kind() const noexcept { return kind_; }
  /// Offending slot for NegativeEntry (slot_count() stands for the degree).
  std::size_t slot() const noexcept { return slot_; }

 private:
  Kind kind_;
  std::size_t slot_;
};

/// L(2d-mi-mj-mk, ..., d-mj-mk, ..., d-mi-mk, ..., d-mi-mj, ...).
LinearSystem cremona(const LinearSystem& system, std::size_t i, std::size_t j, std::size_t k);
/// Same transform on an arbitrary class; no sign checks.
DivisorClass cremona(const DivisorClass& cls, std::size_t i, std::size_t j, std::size_t k);

/// Removes the line through pi and pj once; requires d - mi - mj < 0.
LinearSystem split_fixed_line(const LinearSystem& system, std::size_t i, std::size_t j);

struct Move {
  enum class Type { Cremona, Line };
  Type type = Type::Cremona;
  std::vector<std::size_t> slots;
  LinearSystem before;
  LinearSystem after;
};

struct Reduction {
  LinearSystem result;
  std::vector<Move> transcript;
  /// Stopped because a multiplicity exceeds the degree.
  bool empty = false;
};

/// Splits fixed lines and applies Cremona on the three largest
/// multiplicities until neither applies.
Reduction standard_reduce(const LinearSystem& system);

/// No fixed line and the three largest multiplicities sum to at most d.
bool is_standard_form(const LinearSystem& system);

/// Re-applies a recorded move to `system`, validating every precondition.
LinearSystem apply_move(const LinearSystem& system, const Move& move);

nlohmann::json to_json(const Move& move);
Move move_from_json(const nlohmann::json& j);
/// One JSON object per line.
std::string transcript_jsonl(const std::vector<Move>& transcript);

}  // namespace linsys
