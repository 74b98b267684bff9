#include "aurcap/ontology/iri.hpp"

#include <cctype>

#include "aurcap/error.hpp"

namespace aurcap {

namespace {

bool is_scheme_char(char c, bool first) {
  const auto u = static_cast<unsigned char>(c);
  if (std::isalpha(u)) return true;
  if (first) return false;
  return std::isdigit(u) || c == '+' || c == '-' || c == '.';
}

}  // namespace

bool Iri::is_valid(std::string_view value) noexcept {
  const auto colon = value.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == value.size()) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    if (!is_scheme_char(value[i], i == 0)) return false;
  }
  for (char c : value) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '\\' ||
        c == '^' || c == '`')
      return false;
  }
  return true;
}

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) throw Error(Errc::InvalidIri, "not an absolute IRI: '" + value_ + "'");
}

std::string_view Iri::local_name() const noexcept {
  std::string_view v = value_;
  const auto pos = v.find_last_of("#/");
  if (pos != std::string_view::npos) return v.substr(pos + 1);
  const auto colon = v.find(':');
  return colon == std::string_view::npos ? v : v.substr(colon + 1);
}

std::string_view Iri::namespace_part() const noexcept {
  std::string_view v = value_;
  return v.substr(0, v.size() - local_name().size());
}

Iri Iri::with_suffix(std::string_view suffix) const { return Iri(value_ + std::string(suffix)); }

}  // namespace aurcap
