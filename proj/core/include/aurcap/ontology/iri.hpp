#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace aurcap {

// Absolute IRI. Prefix expansion happens before construction, so equality is
// plain string equality.
class Iri {
 public:
  Iri() = default;
  explicit Iri(std::string value);

  static bool is_valid(std::string_view value) noexcept;

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  // Text after the last '#' or '/', or after the scheme for opaque IRIs.
  std::string_view local_name() const noexcept;
  std::string_view namespace_part() const noexcept;

  // Appends a suffix to the local name ("x#robot" + "_pose" -> "x#robot_pose").
  Iri with_suffix(std::string_view suffix) const;

  friend auto operator<=>(const Iri&, const Iri&) = default;
  friend bool operator==(const Iri&, const Iri&) = default;

 private:
  std::string value_;
};

}  // namespace aurcap

template <>
struct std::hash<aurcap::Iri> {
  std::size_t operator()(const aurcap::Iri& iri) const noexcept { return std::hash<std::string>{}(iri.str()); }
};
