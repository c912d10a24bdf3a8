#include "linsys/cremona.hpp"

#include <algorithm>
#include <numeric>

namespace linsys {

namespace {

void check_slots(std::size_t slot_count, std::initializer_list<std::size_t> slots) {
  for (auto a = slots.begin(); a != slots.end(); ++a) {
    if (*a >= slot_count) throw std::out_of_range("slot " + std::to_string(*a) + " out of range");
    for (auto b = std::next(a); b != slots.end(); ++b) {
      if (*a == *b) throw std::invalid_argument("slots must be distinct");
    }
  }
}

std::string slot_name(std::size_t slot) { return "slot " + std::to_string(slot); }

}  // namespace

DivisorClass cremona(const DivisorClass& cls, std::size_t i, std::size_t j, std::size_t k) {
  check_slots(cls.slot_count(), {i, j, k});
  Int d = cls.degree();
  Int mi = cls.mult(i), mj = cls.mult(j), mk = cls.mult(k);
  std::vector<Int> mults(cls.mults().begin(), cls.mults().end());
  mults[i] = d - mj - mk;
  mults[j] = d - mi - mk;
  mults[k] = d - mi - mj;
  return DivisorClass(2 * d - mi - mj - mk, std::move(mults));
}

LinearSystem cremona(const LinearSystem& system, std::size_t i, std::size_t j, std::size_t k) {
  DivisorClass out = cremona(system.as_class(), i, j, k);
  if (out.degree() < 0) {
    throw CremonaError(CremonaError::Kind::NegativeEntry, system.slot_count(),
                       "Cremona on " + system.to_string() + " gives negative degree");
  }
  for (std::size_t s : {i, j, k}) {
    if (out.mult(s) < 0) {
      throw CremonaError(CremonaError::Kind::NegativeEntry, s,
                         "Cremona on " + system.to_string() + " gives a negative entry at " + slot_name(s));
    }
  }
  return out.as_system();
}

LinearSystem split_fixed_line(const LinearSystem& system, std::size_t i, std::size_t j) {
  check_slots(system.slot_count(), {i, j});
  Int excess = system.degree() - system.mult(i) - system.mult(j);
  if (excess >= 0) {
    throw CremonaError(CremonaError::Kind::NotFixed, i,
                       "line through " + slot_name(i) + " and " + slot_name(j) + " is not fixed in " +
                           system.to_string());
  }
  if (system.degree() == 0) {
    throw CremonaError(CremonaError::Kind::NegativeEntry, system.slot_count(),
                       "splitting a line from " + system.to_string() + " gives negative degree");
  }
  for (std::size_t s : {i, j}) {
    if (system.mult(s) == 0) {
      throw CremonaError(CremonaError::Kind::NegativeEntry, s,
                         "splitting the line through " + slot_name(i) + " and " + slot_name(j) +
                             " leaves a negative entry at " + slot_name(s));
    }
  }
  std::vector<Int> mults(system.mults().begin(), system.mults().end());
  --mults[i];
  --mults[j];
  return LinearSystem(system.degree() - 1, std::move(mults));
}

bool is_standard_form(const LinearSystem& system) {
  std::vector<Int> m(system.mults().begin(), system.mults().end());
  std::sort(m.begin(), m.end(), std::greater<>());
  Int d = system.degree();
  if (m.size() >= 2 && m[0] + m[1] > d) return false;
  if (m.size() >= 3 && m[0] + m[1] + m[2] > d) return false;
  return true;
}

Reduction standard_reduce(const LinearSystem& system) {
  Reduction red;
  LinearSystem cur = system;
  const std::size_t slots = cur.slot_count();
  for (;;) {
    Int d = cur.degree();
    if (std::any_of(cur.mults().begin(), cur.mults().end(), [d](Int m) { return m > d; })) {
      red.empty = true;
      break;
    }
    // Fixed line with the largest mi + mj; first pair in slot order on ties.
    std::size_t bi = slots, bj = slots;
    Int best = d;
    for (std::size_t i = 0; i < slots; ++i) {
      for (std::size_t j = i + 1; j < slots; ++j) {
        Int s = cur.mult(i) + cur.mult(j);
        if (s > best) {
          best = s;
          bi = i;
          bj = j;
        }
      }
    }
    Move move;
    move.before = cur;
    if (bi < slots) {
      move.type = Move::Type::Line;
      move.slots = {bi, bj};
      cur = split_fixed_line(cur, bi, bj);
    } else {
      if (slots < 3) break;
      std::vector<std::size_t> order(slots);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return cur.mult(a) > cur.mult(b); });
      std::array<std::size_t, 3> top{order[0], order[1], order[2]};
      if (cur.mult(top[0]) + cur.mult(top[1]) + cur.mult(top[2]) <= d) break;
      std::sort(top.begin(), top.end());
      move.type = Move::Type::Cremona;
      move.slots = {top[0], top[1], top[2]};
      cur = cremona(cur, top[0], top[1], top[2]);
      if (cur.degree() >= d) throw std::logic_error("Cremona step did not lower the degree");
    }
    move.after = cur;
    red.transcript.push_back(std::move(move));
  }
  red.result = cur;
  return red;
}

LinearSystem apply_move(const LinearSystem& system, const Move& move) {
  if (!(system == move.before)) {
    throw std::invalid_argument("move recorded on " + move.before.to_string() + " replayed on " +
                                system.to_string());
  }
  LinearSystem out;
  if (move.type == Move::Type::Line) {
    if (move.slots.size() != 2) throw std::invalid_argument("line move needs two slots");
    out = split_fixed_line(system, move.slots[0], move.slots[1]);
  } else {
    if (move.slots.size() != 3) throw std::invalid_argument("Cremona move needs three slots");
    out = cremona(system, move.slots[0], move.slots[1], move.slots[2]);
  }
  if (!(out == move.after)) {
    throw std::invalid_argument("move result " + out.to_string() + " differs from recorded " +
                                move.after.to_string());
  }
  return out;
}

nlohmann::json to_json(const Move& move) {
  return {{"move", move.type == Move::Type::Line ? "line" : "cremona"},
          {"slots", move.slots},
          {"before", move.before.to_string()},
          {"after", move.after.to_string()}};
}

Move move_from_json(const nlohmann::json& j) {
  Move m;
  auto kind = j.at("move").get<std::string>();
  if (kind == "line") m.type = Move::Type::Line;
  else if (kind == "cremona") m.type = Move::Type::Cremona;
  else throw std::invalid_argument("unknown move '" + kind + "'");
  m.slots = j.at("slots").get<std::vector<std::size_t>>();
  m.before = LinearSystem::parse(j.at("before").get<std::string>());
  m.after = LinearSystem::parse(j.at("after").get<std::string>());
  return m;
}

std::string transcript_jsonl(const std::vector<Move>& transcript) {
  std::string out;
  for (const auto& m : transcript) {
    out += to_json(m).dump();
    out += '\n';
  }
  return out;
}

}  // namespace linsys
