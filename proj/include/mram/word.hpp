#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mram {

/// Thrown when an operation's precondition on its arguments is violated.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arbitrary-precision non-negative integer; the value held by one MRAM cell.
///
/// Every operation keeps the value non-negative: subtraction saturates at zero
/// and there is no complement.
class Word {
 public:
  Word() = default;
  Word(std::uint64_t v) : v_(static_cast<unsigned long>(v)) {}  // NOLINT
  explicit Word(mpz_class v);

  /// Parses a decimal (or 0x-prefixed hex) literal. Throws PreconditionError.
  static Word parse(std::string_view text);
  static Word power_of_two(std::uint64_t k);

  /// Binary digit count; bitlen of zero is 1.
  std::uint64_t bitlen() const;
  std::uint64_t popcount() const;
  bool is_zero() const { return sgn(v_) == 0; }
  bool test_bit(std::uint64_t i) const;
  std::optional<std::uint64_t> to_u64() const;
  std::string to_string(int base = 10) const;

  const mpz_class& raw() const { return v_; }

  friend Word operator+(const Word& a, const Word& b) { return Word(mpz_class(a.v_ + b.v_)); }
  friend Word operator*(const Word& a, const Word& b) { return Word(mpz_class(a.v_ * b.v_)); }
  friend Word operator&(const Word& a, const Word& b) { return Word(mpz_class(a.v_ & b.v_)); }
  friend Word operator|(const Word& a, const Word& b) { return Word(mpz_class(a.v_ | b.v_)); }
  friend Word operator^(const Word& a, const Word& b) { return Word(mpz_class(a.v_ ^ b.v_)); }
  Word& operator|=(const Word& o) {
    v_ |= o.v_;
    return *this;
  }
  Word& operator&=(const Word& o) {
    v_ &= o.v_;
    return *this;
  }

  friend bool operator==(const Word& a, const Word& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpz_class v_;
};

/// Natural subtraction saturating at zero.
Word monus(const Word& a, const Word& b);
/// floor(a / b); b must be non-zero.
Word floor_div(const Word& a, const Word& b);
Word shl(const Word& a, std::uint64_t k);
Word shr(const Word& a, std::uint64_t k);

/// Checked integer power; throws PreconditionError on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp);

/// Sum of pattern * 2^(i*width) for i in [0, count), built by doubling so that
/// only O(log count) shift/add steps are needed. Requires pattern < 2^width.
Word replicate(const Word& pattern, std::uint64_t width, std::uint64_t count);

/// Ones at bit positions [base, base + length).
Word blockmask(std::uint64_t base, std::uint64_t length);

/// Ones at every index i < g^digits whose base-g digit number `position`
/// equals `digit`.
Word digitmask(std::uint64_t g, std::uint64_t position, std::uint64_t digit,
               std::uint64_t digits);

}  // namespace mram
