#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "aurcap/ontology/iri.hpp"

namespace aurcap {

// Arbitrary-precision finite decimal; comparison is exact.
class Decimal {
 public:
  Decimal() = default;

  static std::optional<Decimal> parse(std::string_view text);
  static Decimal from_integer(std::int64_t value);
  // Shortest fixed-point representation that round-trips the double.
  static Decimal from_double(double value);

  std::string to_string() const;
  double to_double() const;

  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);
  friend bool operator==(const Decimal& a, const Decimal& b) { return (a <=> b) == 0; }

 private:
  bool negative_ = false;
  std::string integer_ = "0";  // no leading zeros
  std::string fraction_;       // no trailing zeros
};

enum class Datatype { String, Integer, Decimal, Boolean, IriRef };

std::string_view to_string(Datatype type) noexcept;
std::optional<Datatype> datatype_from_string(std::string_view tag) noexcept;

// Typed literal. The lexical form is validated against the datatype and kept
// verbatim; value comparison goes through value_compare().
class Literal {
 public:
  Literal() = default;
  Literal(Datatype type, std::string lexical);

  static Literal string(std::string value) { return Literal(Datatype::String, std::move(value)); }
  static Literal integer(std::int64_t value) { return Literal(Datatype::Integer, std::to_string(value)); }
  static Literal decimal(const Decimal& value) { return Literal(Datatype::Decimal, value.to_string()); }
  static Literal decimal(double value) { return decimal(Decimal::from_double(value)); }
  static Literal boolean(bool value) { return Literal(Datatype::Boolean, value ? "true" : "false"); }
  static Literal iri(const Iri& value) { return Literal(Datatype::IriRef, value.str()); }

  static bool is_valid_lexical(Datatype type, std::string_view lexical) noexcept;

  Datatype datatype() const noexcept { return type_; }
  const std::string& lexical() const noexcept { return lexical_; }

  bool is_numeric() const noexcept { return type_ == Datatype::Integer || type_ == Datatype::Decimal; }
  std::optional<Decimal> as_decimal() const;
  std::optional<bool> as_bool() const;
  double as_double() const;

  // Integer and decimal compare numerically with each other; other types only
  // compare with their own type. Unordered otherwise.
  std::partial_ordering value_compare(const Literal& other) const;

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;

 private:
  Datatype type_ = Datatype::String;
  std::string lexical_;
};

}  // namespace aurcap
