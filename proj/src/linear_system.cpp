#include "linsys/linear_system.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace linsys {

ParseError::ParseError(const std::string& message, std::string input, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      input_(std::move(input)),
      position_(position) {}

std::string ParseError::caret() const {
  return input_ + "\n" + std::string(position_, ' ') + "^";
}

namespace checked {

Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
  return r;
}

Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

}  // namespace checked

namespace {

struct ParsedClass {
  Int degree = 0;
  std::vector<Int> mults;
};

class Parser {
 public:
  Parser(std::string_view text, bool allow_negative)
      : text_(text), allow_negative_(allow_negative) {}

  ParsedClass run() {
    ParsedClass out;
    skip_space();
    expect('L');
    skip_space();
    expect('(');
    out.degree = number();
    skip_space();
    while (peek() == ',') {
      ++pos_;
      Int mult = number();
      skip_space();
      Int count = 1;
      if (peek() == '^') {
        ++pos_;
        skip_space();
        bool braced = false;
        if (peek() == '{') {
          braced = true;
          ++pos_;
        }
        std::size_t at = pos_;
        count = number();
        if (count < 1) fail("repeat count must be positive", at);
        skip_space();
        if (braced) expect('}');
        skip_space();
      }
      if (count > 1'000'000) fail("repeat count too large", pos_);
      out.mults.insert(out.mults.end(), static_cast<std::size_t>(count), mult);
    }
    expect(')');
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters", pos_);
    if (!allow_negative_ && out.degree < 0) fail("degree must be nonnegative", degree_pos_);
    return out;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  Int number() {
    skip_space();
    std::size_t start = pos_;
    if (degree_pos_ == npos) degree_pos_ = start;
    bool negative = false;
    if (peek() == '-') {
      if (!allow_negative_) fail("negative values are not allowed", pos_);
      negative = true;
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number", pos_);
    Int value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = checked::add(checked::mul(value, 10), text_[pos_] - '0');
      ++pos_;
    }
    return negative ? -value : value;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError(what, std::string(text_), at);
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::string_view text_;
  bool allow_negative_;
  std::size_t pos_ = 0;
  std::size_t degree_pos_ = npos;
};

std::string format_class(Int degree, std::span<const Int> mults) {
  std::ostringstream out;
  out << "L(" << degree;
  if (!mults.empty()) {
    out << ',' << mults[0];
    std::size_t i = 1;
    while (i < mults.size()) {
      std::size_t j = i;
      while (j < mults.size() && mults[j] == mults[i]) ++j;
      out << ',' << mults[i];
      if (j - i > 1) out << '^' << (j - i);
      i = j;
    }
  }
  out << ')';
  return out.str();
}

Int triangular(Int m) { return checked::mul(m, checked::add(m, 1)) / 2; }

}  // namespace

// --- LinearSystem -----------------------------------------------------------

LinearSystem::LinearSystem(Int degree, std::vector<Int> mults)
    : degree_(degree), mults_(std::move(mults)) {
  if (degree_ < 0) throw std::invalid_argument("degree must be nonnegative");
  for (Int m : mults_) {
    if (m < 0) throw std::invalid_argument("multiplicities must be nonnegative");
  }
}

LinearSystem LinearSystem::quasi_homogeneous(Int degree, Int m0, Int m, std::size_t n) {
  std::vector<Int> mults(n + 1, m);
  mults[0] = m0;
  return LinearSystem(degree, std::move(mults));
}

std::span<const Int> LinearSystem::tail() const noexcept {
  if (mults_.size() <= 1) return {};
  return std::span<const Int>(mults_).subspan(1);
}

std::size_t LinearSystem::tail_points() const noexcept {
  auto t = tail();
  return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](Int m) { return m != 0; }));
}

Int LinearSystem::max_tail_multiplicity() const noexcept {
  auto t = tail();
  return t.empty() ? 0 : *std::max_element(t.begin(), t.end());
}

bool LinearSystem::is_quasi_homogeneous() const noexcept {
  Int seen = 0;
  for (Int m : tail()) {
    if (m == 0) continue;
    if (seen == 0) seen = m;
    else if (m != seen) return false;
  }
  return true;
}

LinearSystem LinearSystem::normalized() const {
  std::vector<Int> mults;
  mults.reserve(mults_.size() + 1);
  mults.push_back(m0());
  for (Int m : tail()) {
    if (m != 0) mults.push_back(m);
  }
  std::sort(mults.begin() + 1, mults.end(), std::greater<>());
  return LinearSystem(degree_, std::move(mults));
}

LinearSystem LinearSystem::with_point(Int m) const {
  std::vector<Int> mults = mults_;
  if (mults.empty()) mults.push_back(0);
  mults.push_back(m);
  return LinearSystem(degree_, std::move(mults));
}

LinearSystem LinearSystem::with_slot(std::size_t slot, Int m) const {
  std::vector<Int> mults = mults_;
  if (mults.size() <= slot) mults.resize(slot + 1, 0);
  mults[slot] = m;
  return LinearSystem(degree_, std::move(mults));
}

DivisorClass LinearSystem::as_class() const { return DivisorClass(*this); }

std::string LinearSystem::to_string() const { return format_class(degree_, mults_); }

LinearSystem LinearSystem::parse(std::string_view text) {
  ParsedClass parsed = Parser(text, false).run();
  return LinearSystem(parsed.degree, std::move(parsed.mults));
}

// --- DivisorClass -----------------------------------------------------------

DivisorClass::DivisorClass(Int degree, std::vector<Int> mults)
    : degree_(degree), mults_(std::move(mults)) {}

DivisorClass::DivisorClass(const LinearSystem& system)
    : degree_(system.degree()), mults_(system.mults().begin(), system.mults().end()) {}

DivisorClass DivisorClass::padded(std::size_t slots) const {
  DivisorClass out = *this;
  if (out.mults_.size() < slots) out.mults_.resize(slots, 0);
  return out;
}

bool DivisorClass::is_effective_shape() const noexcept {
  if (degree_ < 0) return false;
  return std::all_of(mults_.begin(), mults_.end(), [](Int m) { return m >= 0; });
}

LinearSystem DivisorClass::as_system() const {
  if (!is_effective_shape()) {
    throw std::domain_error("class " + to_string() + " has a negative coefficient");
  }
  return LinearSystem(degree_, mults_);
}

DivisorClass& DivisorClass::operator+=(const DivisorClass& other) {
  if (mults_.size() < other.mults_.size()) mults_.resize(other.mults_.size(), 0);
  degree_ = checked::add(degree_, other.degree_);
  for (std::size_t i = 0; i < other.mults_.size(); ++i) {
    mults_[i] = checked::add(mults_[i], other.mults_[i]);
  }
  return *this;
}

DivisorClass& DivisorClass::operator-=(const DivisorClass& other) {
  if (mults_.size() < other.mults_.size()) mults_.resize(other.mults_.size(), 0);
  degree_ = checked::sub(degree_, other.degree_);
  for (std::size_t i = 0; i < other.mults_.size(); ++i) {
    mults_[i] = checked::sub(mults_[i], other.mults_[i]);
  }
  return *this;
}

DivisorClass operator*(Int k, const DivisorClass& a) {
  DivisorClass out = a;
  out.degree_ = checked::mul(k, a.degree_);
  for (Int& m : out.mults_) m = checked::mul(k, m);
  return out;
}

bool operator==(const DivisorClass& a, const DivisorClass& b) {
  if (a.degree_ != b.degree_) return false;
  std::size_t n = std::max(a.mults_.size(), b.mults_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.mult(i) != b.mult(i)) return false;
  }
  return true;
}

std::string DivisorClass::to_string() const { return format_class(degree_, mults_); }

DivisorClass DivisorClass::parse(std::string_view text) {
  ParsedClass parsed = Parser(text, true).run();
  return DivisorClass(parsed.degree, std::move(parsed.mults));
}

// --- formulas ---------------------------------------------------------------

Int virtual_dim(const DivisorClass& cls) {
  Int d = cls.degree();
  Int v = checked::mul(d, checked::add(d, 3)) / 2;
  for (Int m : cls.mults()) v = checked::sub(v, triangular(m));
  return v;
}

Int virtual_dim(const LinearSystem& system) { return virtual_dim(system.as_class()); }

Int expected_dim(const LinearSystem& system) { return std::max<Int>(-1, virtual_dim(system)); }

Int intersect(const DivisorClass& a, const DivisorClass& b) {
  Int r = checked::mul(a.degree(), b.degree());
  std::size_t n = std::min(a.slot_count(), b.slot_count());
  for (std::size_t i = 0; i < n; ++i) r = checked::sub(r, checked::mul(a.mults()[i], b.mults()[i]));
  return r;
}

Int canonical_intersect(const DivisorClass& cls) {
  Int r = checked::mul(-3, cls.degree());
  for (Int m : cls.mults()) r = checked::add(r, m);
  return r;
}

Int arithmetic_genus(const DivisorClass& cls) {
  Int twice = checked::add(intersect(cls, cls), canonical_intersect(cls));
  if (twice % 2 != 0) {
    throw std::logic_error("D^2 + D.K is odd for " + cls.to_string());
  }
  return twice / 2 + 1;
}

Int monomial_count(Int degree) {
  return checked::mul(checked::add(degree, 1), checked::add(degree, 2)) / 2;
}

Int condition_count(const LinearSystem& system) {
  Int r = 0;
  for (Int m : system.mults()) r = checked::add(r, triangular(m));
  return r;
}

}  // namespace linsys
