#include "aurcap/ontology/literal.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "aurcap/error.hpp"

namespace aurcap {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  Decimal d;
  if (text.front() == '+' || text.front() == '-') {
    d.negative_ = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (dot != std::string_view::npos && frac_part.empty() && int_part.empty()) return std::nullopt;
  if (!all_digits(int_part) || !all_digits(frac_part)) return std::nullopt;
  while (!int_part.empty() && int_part.front() == '0') int_part.remove_prefix(1);
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
  d.integer_ = int_part.empty() ? "0" : std::string(int_part);
  d.fraction_ = std::string(frac_part);
  if (d.integer_ == "0" && d.fraction_.empty()) d.negative_ = false;
  return d;
}

Decimal Decimal::from_integer(std::int64_t value) { return *parse(std::to_string(value)); }

Decimal Decimal::from_double(double value) {
  if (!std::isfinite(value)) throw Error(Errc::InvalidLiteral, "non-finite decimal");
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  if (ec != std::errc{}) throw Error(Errc::InvalidLiteral, "decimal out of range");
  return *parse(std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())));
}

std::string Decimal::to_string() const {
  std::string out;
  if (negative_) out += '-';
  out += integer_;
  if (!fraction_.empty()) {
    out += '.';
    out += fraction_;
  }
  return out;
}

double Decimal::to_double() const { return std::strtod(to_string().c_str(), nullptr); }

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  if (a.negative_ != b.negative_) return a.negative_ ? std::strong_ordering::less : std::strong_ordering::greater;
  auto magnitude = [](const Decimal& x, const Decimal& y) {
    if (x.integer_.size() != y.integer_.size()) return x.integer_.size() <=> y.integer_.size();
    if (auto c = x.integer_.compare(y.integer_); c != 0) return c <=> 0;
    const std::size_t n = std::max(x.fraction_.size(), y.fraction_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const char cx = i < x.fraction_.size() ? x.fraction_[i] : '0';
      const char cy = i < y.fraction_.size() ? y.fraction_[i] : '0';
      if (cx != cy) return cx <=> cy;
    }
    return std::strong_ordering::equal;
  };
  const auto m = magnitude(a, b);
  if (!a.negative_) return m;
  return 0 <=> m;
}

std::string_view to_string(Datatype type) noexcept {
  switch (type) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Decimal: return "decimal";
    case Datatype::Boolean: return "boolean";
    case Datatype::IriRef: return "iri";
  }
  return "string";
}

std::optional<Datatype> datatype_from_string(std::string_view tag) noexcept {
  if (tag == "string") return Datatype::String;
  if (tag == "integer") return Datatype::Integer;
  if (tag == "decimal") return Datatype::Decimal;
  if (tag == "boolean") return Datatype::Boolean;
  if (tag == "iri") return Datatype::IriRef;
  return std::nullopt;
}

bool Literal::is_valid_lexical(Datatype type, std::string_view lexical) noexcept {
  switch (type) {
    case Datatype::String: return true;
    case Datatype::Integer: {
      std::string_view digits = lexical;
      if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) digits.remove_prefix(1);
      return !digits.empty() && all_digits(digits);
    }
    case Datatype::Decimal: return Decimal::parse(lexical).has_value();
    case Datatype::Boolean: return lexical == "true" || lexical == "false";
    case Datatype::IriRef: return Iri::is_valid(lexical);
  }
  return false;
}

Literal::Literal(Datatype type, std::string lexical) : type_(type), lexical_(std::move(lexical)) {
  if (!is_valid_lexical(type_, lexical_))
    throw Error(Errc::InvalidLiteral, "'" + lexical_ + "' is not a valid " + std::string(to_string(type_)));
}

std::optional<Decimal> Literal::as_decimal() const {
  if (!is_numeric()) return std::nullopt;
  return Decimal::parse(lexical_);
}

std::optional<bool> Literal::as_bool() const {
  if (type_ != Datatype::Boolean) return std::nullopt;
  return lexical_ == "true";
}

double Literal::as_double() const {
  auto d = as_decimal();
  if (!d) throw Error(Errc::DatatypeMismatch, "literal '" + lexical_ + "' is not numeric");
  return d->to_double();
}

std::partial_ordering Literal::value_compare(const Literal& other) const {
  if (is_numeric() && other.is_numeric()) return *as_decimal() <=> *other.as_decimal();
  if (type_ != other.type_) return std::partial_ordering::unordered;
  if (type_ == Datatype::Boolean) {
    // false < true
    return *as_bool() <=> *other.as_bool();
  }
  return lexical_ <=> other.lexical_;
}

}  // namespace aurcap
