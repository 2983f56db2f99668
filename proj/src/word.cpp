#include "mram/word.hpp"

#include <bit>
#include <limits>

namespace mram {

Word::Word(mpz_class v) : v_(std::move(v)) {
  if (sgn(v_) < 0) throw PreconditionError("Word cannot hold a negative value");
}

Word Word::parse(std::string_view text) {
  std::string s(text);
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s = s.substr(2);
  }
  if (s.empty()) throw PreconditionError("empty numeric literal");
  for (char c : s) {
    bool ok = base == 10 ? (c >= '0' && c <= '9')
                         : ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
                            (c >= 'A' && c <= 'F'));
    if (!ok) throw PreconditionError("malformed numeric literal '" + std::string(text) + "'");
  }
  mpz_class v;
  if (v.set_str(s, base) != 0) throw PreconditionError("malformed numeric literal");
  return Word(std::move(v));
}

Word Word::power_of_two(std::uint64_t k) {
  mpz_class v;
  mpz_setbit(v.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return Word(std::move(v));
}

std::uint64_t Word::bitlen() const {
  if (is_zero()) return 1;
  return mpz_sizeinbase(v_.get_mpz_t(), 2);
}

std::uint64_t Word::popcount() const { return mpz_popcount(v_.get_mpz_t()); }

bool Word::test_bit(std::uint64_t i) const {
  return mpz_tstbit(v_.get_mpz_t(), static_cast<mp_bitcnt_t>(i)) != 0;
}

std::optional<std::uint64_t> Word::to_u64() const {
  if (!v_.fits_ulong_p()) return std::nullopt;
  return v_.get_ui();
}

std::string Word::to_string(int base) const { return v_.get_str(base); }

Word monus(const Word& a, const Word& b) {
  if (a <= b) return Word();
  return Word(mpz_class(a.raw() - b.raw()));
}

Word floor_div(const Word& a, const Word& b) {
  if (b.is_zero()) throw PreconditionError("division by zero");
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
  return Word(std::move(q));
}

Word shl(const Word& a, std::uint64_t k) {
  mpz_class r;
  mpz_mul_2exp(r.get_mpz_t(), a.raw().get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return Word(std::move(r));
}

Word shr(const Word& a, std::uint64_t k) {
  mpz_class r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), a.raw().get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return Word(std::move(r));
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw PreconditionError("integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

Word replicate(const Word& pattern, std::uint64_t width, std::uint64_t count) {
  if (!pattern.is_zero() && pattern.bitlen() > width)
    throw PreconditionError("replicate: pattern must be < 2^width");
  if (count == 0 || pattern.is_zero()) return Word();

  // Walk count's bits from the most significant one: rep(2k) = rep(k) * (1 + 2^(k*width)),
  // rep(2k+1) = rep(2k) * 2^width + pattern.
  Word acc = pattern;
  std::uint64_t k = 1;
  int top = std::bit_width(count) - 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    acc = acc | shl(acc, k * width);
    k *= 2;
    if ((count >> bit) & 1U) {
      acc = shl(acc, width) | pattern;
      k += 1;
    }
  }
  return acc;
}

Word blockmask(std::uint64_t base, std::uint64_t length) {
  if (length == 0) return Word();
  return shl(Word(mpz_class(Word::power_of_two(length).raw() - 1)), base);
}

Word digitmask(std::uint64_t g, std::uint64_t position, std::uint64_t digit,
               std::uint64_t digits) {
  if (g < 2) throw PreconditionError("digitmask: base must be at least 2");
  if (digit >= g) throw PreconditionError("digitmask: digit must be < base");
  if (position >= digits) throw PreconditionError("digitmask: position must be < digit count");
  const std::uint64_t run = checked_pow(g, position);
  return replicate(blockmask(digit * run, run), run * g, checked_pow(g, digits - position - 1));
}

}  // namespace mram
