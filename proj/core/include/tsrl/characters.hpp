#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "tsrl/arith.hpp"

namespace tsrl {

// Exact root of unity exp(2 pi i num/den), kept reduced with 0 <= num < den.
struct Angle {
  u64 num = 0;
  u64 den = 1;
  friend bool operator==(const Angle&, const Angle&) = default;
};

Angle make_angle(i64 num, u64 den);
Angle operator+(const Angle& x, const Angle& y);
std::complex<double> to_complex(const Angle& a);

namespace detail {
struct CharacterGroup;
}

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const detail::CharacterGroup> group, std::vector<u64> exponents);

  u64 modulus() const;
  // nullopt when gcd(n, q) > 1.
  std::optional<Angle> angle(i64 n) const;
  std::complex<double> operator()(i64 n) const;
  bool is_principal() const;
  const std::vector<u64>& exponents() const { return exponents_; }
  const detail::CharacterGroup& group() const { return *group_; }

 private:
  std::shared_ptr<const detail::CharacterGroup> group_;
  std::vector<u64> exponents_;
};

constexpr u64 kMaxCharacterModulus = 100'000;

std::vector<DirichletCharacter> enumerate_characters(u64 q);

// Character mod q whose value at each unit is given by `values`; throws BadShape if
// `values` is not a character mod q.
DirichletCharacter character_from_function(u64 q, const std::function<std::optional<Angle>(u64)>& values);

DirichletCharacter chi4_character();

u64 conductor(const DirichletCharacter& chi);
bool is_primitive(const DirichletCharacter& chi);
DirichletCharacter primitive_inducer(const DirichletCharacter& chi);

// chi * chi4 as a character mod lcm(d, 4), with the conductor of its primitive inducer.
// Throws NotPrimitive.
std::pair<DirichletCharacter, u64> times_chi4(const DirichletCharacter& chi);

// The closed-form conductor of chi*chi4 for primitive chi of modulus d >= 3.
u64 times_chi4_conductor_formula(u64 d);

// Sum of chi(n)/h(n) over n <= N with h(n) != 0.
std::complex<double> char_h_sum(const DirichletCharacter& chi, u64 N);

}  // namespace tsrl
