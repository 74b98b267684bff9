#include "aurcap/ontology/turtle.hpp"

#include <cctype>
#include <iterator>
#include <sstream>

#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"

namespace aurcap {

namespace {

bool is_name_start(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return is_name_start(c) || c == '-' || c == '.'; }

enum class Tok {
  End,
  IriRef,
  PName,
  A,
  String,
  DatatypeMark,
  Integer,
  Decimal,
  Boolean,
  Dot,
  Semicolon,
  Comma,
  LBracket,
  RBracket,
  AtPrefix,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // IRI, string value, number lexical, or prefixed name
  std::size_t line = 1;
  std::size_t column = 1;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    switch (c) {
      case '<': t.kind = Tok::IriRef; t.text = read_iri(); return t;
      case '"':
      case '\'': t.kind = Tok::String; t.text = read_string(); return t;
      case ';': advance(); t.kind = Tok::Semicolon; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']': advance(); t.kind = Tok::RBracket; return t;
      case '(': throw UnsupportedConstruct("collection", line_, column_);
      case '{': throw UnsupportedConstruct("graph block", line_, column_);
      case '^':
        if (peek(1) == '^') {
          advance();
          advance();
          t.kind = Tok::DatatypeMark;
          return t;
        }
        throw SyntaxError(line_, column_, "stray '^'");
      case '@': return read_directive(t);
      case '_':
        if (peek(1) == ':') throw UnsupportedConstruct("blank node label", line_, column_);
        break;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return read_number(t);
    if (c == '.') {
      advance();
      t.kind = Tok::Dot;
      return t;
    }
    if (is_name_start(static_cast<unsigned char>(c)) || c == ':') return read_name(t);
    throw SyntaxError(line_, column_, std::string("unexpected character '") + c + "'");
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    // column counts bytes
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string read_iri() {
    const auto line = line_;
    const auto col = column_;
    advance();
    std::string out;
    while (true) {
      if (pos_ >= text_.size() || peek() == '\n') throw SyntaxError(line, col, "unterminated IRI");
      const char c = peek();
      advance();
      if (c == '>') break;
      out += c;
    }
    if (!Iri::is_valid(out)) {
      if (out.find(':') == std::string::npos) throw UnsupportedConstruct("relative IRI <" + out + ">", line, col);
      throw SyntaxError(line, col, "invalid IRI <" + out + ">");
    }
    return out;
  }

  std::uint32_t read_hex(std::size_t digits) {
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char h = peek();
      if (!std::isxdigit(static_cast<unsigned char>(h))) throw SyntaxError(line_, column_, "bad \\u escape");
      cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                    ? h - '0'
                                                    : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
      advance();
    }
    return cp;
  }

  std::string read_string() {
    const auto line = line_;
    const auto col = column_;
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    advance();
    if (long_form) {
      advance();
      advance();
    }
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) throw SyntaxError(line, col, "unterminated string");
      const char c = peek();
      if (c == quote) {
        if (!long_form) {
          advance();
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      }
      if (c == '\n' && !long_form) throw SyntaxError(line, col, "newline in string");
      if (c == '\\') {
        advance();
        const char e = peek();
        if (pos_ >= text_.size()) throw SyntaxError(line, col, "unterminated string");
        advance();
        switch (e) {
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': append_utf8(out, read_hex(4)); break;
          case 'U': append_utf8(out, read_hex(8)); break;
          default: throw SyntaxError(line_, column_, std::string("unknown escape \\") + e);
        }
        continue;
      }
      out += c;
      advance();
    }
    return out;
  }

  Token read_directive(Token t) {
    advance();
    std::string word;
    while (std::isalpha(static_cast<unsigned char>(peek()))) {
      word += peek();
      advance();
    }
    if (word == "prefix") {
      t.kind = Tok::AtPrefix;
      return t;
    }
    if (word == "base") throw UnsupportedConstruct("@base", t.line, t.column);
    throw UnsupportedConstruct("language tag @" + word, t.line, t.column);
  }

  Token read_number(Token t) {
    std::string out;
    if (peek() == '+' || peek() == '-') {
      out += peek();
      advance();
    }
    bool seen_dot = false;
    while (true) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out += c;
        advance();
      } else if (c == '.' && !seen_dot && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        seen_dot = true;
        out += c;
        advance();
      } else {
        break;
      }
    }
    if (peek() == 'e' || peek() == 'E') throw UnsupportedConstruct("double literal", t.line, t.column);
    const std::string_view digits = std::string_view(out).substr(out[0] == '+' || out[0] == '-' ? 1 : 0);
    if (digits.empty() || digits == ".") throw SyntaxError(t.line, t.column, "malformed number");
    t.kind = seen_dot ? Tok::Decimal : Tok::Integer;
    t.text = out;
    return t;
  }

  Token read_name(Token t) {
    std::string out;
    while (pos_ < text_.size()) {
      const auto c = static_cast<unsigned char>(peek());
      if (is_name_char(c) || c == ':') {
        out += static_cast<char>(c);
        advance();
      } else {
        break;
      }
    }
    // a trailing '.' terminates the statement
    while (!out.empty() && out.back() == '.') {
      out.pop_back();
      --pos_;
      --column_;
    }
    if (out.find(':') == std::string::npos) {
      if (out == "a") {
        t.kind = Tok::A;
      } else if (out == "true" || out == "false") {
        t.kind = Tok::Boolean;
        t.text = out;
      } else if (out == "PREFIX" || out == "BASE" || out == "prefix" || out == "base") {
        throw UnsupportedConstruct("SPARQL-style " + out, t.line, t.column);
      } else {
        throw SyntaxError(t.line, t.column, "unexpected bare word '" + out + "'");
      }
      return t;
    }
    t.kind = Tok::PName;
    t.text = out;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct Object {
  bool is_literal = false;
  Iri iri;
  Literal literal;
};

bool in_reserved_namespace(const Iri& iri) {
  const auto& s = iri.str();
  for (const auto* ns : {&ns::rdf, &ns::rdfs, &ns::owl, &ns::xsd})
    if (s.rfind(*ns, 0) == 0) return true;
  return false;
}

class Parser {
 public:
  Parser(KnowledgeBase& kb, std::string_view text) : kb_(kb), lexer_(text) { advance(); }

  void run() {
    while (current_.kind != Tok::End) statement();
  }

 private:
  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(current_.line, current_.column, message);
  }

  void expect(Tok kind, const char* what) {
    if (current_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  Iri resolve_pname(const Token& t) const {
    const auto colon = t.text.find(':');
    const std::string prefix = t.text.substr(0, colon);
    const std::string local = t.text.substr(colon + 1);
    auto it = kb_.prefixes().find(prefix);
    if (it == kb_.prefixes().end()) throw SyntaxError(t.line, t.column, "undeclared prefix '" + prefix + ":'");
    std::string full = it->second + local;
    if (!Iri::is_valid(full)) throw SyntaxError(t.line, t.column, "invalid IRI from '" + t.text + "'");
    return Iri(std::move(full));
  }

  bool at_iri() const { return current_.kind == Tok::IriRef || current_.kind == Tok::PName; }

  Iri iri() {
    Iri out;
    if (current_.kind == Tok::IriRef) {
      out = Iri(current_.text);
    } else if (current_.kind == Tok::PName) {
      out = resolve_pname(current_);
    } else {
      fail("expected IRI");
    }
    advance();
    return out;
  }

  Iri predicate() {
    if (current_.kind == Tok::A) {
      advance();
      return Iri(ns::rdf + "type");
    }
    if (current_.kind == Tok::LBracket) throw UnsupportedConstruct("blank node predicate", current_.line, current_.column);
    return iri();
  }

  Literal literal() {
    const Token t = current_;
    advance();
    auto make = [&](Datatype type, std::string lexical) {
      if (!Literal::is_valid_lexical(type, lexical))
        throw SyntaxError(t.line, t.column, "invalid " + std::string(to_string(type)) + " literal '" + lexical + "'");
      return Literal(type, std::move(lexical));
    };
    switch (t.kind) {
      case Tok::Integer: return make(Datatype::Integer, t.text);
      case Tok::Decimal: return make(Datatype::Decimal, t.text);
      case Tok::Boolean: return make(Datatype::Boolean, t.text);
      case Tok::String: break;
      default: throw SyntaxError(t.line, t.column, "expected literal");
    }
    if (current_.kind != Tok::DatatypeMark) return make(Datatype::String, t.text);
    advance();
    const Token dt_token = current_;
    const Iri dt = iri();
    const std::string& s = dt.str();
    if (s == ns::xsd + "string") return make(Datatype::String, t.text);
    if (s == ns::xsd + "integer") return make(Datatype::Integer, t.text);
    if (s == ns::xsd + "decimal") return make(Datatype::Decimal, t.text);
    if (s == ns::xsd + "boolean") return make(Datatype::Boolean, t.text);
    if (s == ns::xsd + "anyURI") return make(Datatype::IriRef, t.text);
    throw UnsupportedConstruct("datatype " + kb_.compact(dt), dt_token.line, dt_token.column);
  }

  Object object(const Iri& pred) {
    Object o;
    if (at_iri()) {
      o.iri = iri();
      return o;
    }
    if (current_.kind == Tok::LBracket) {
      if (pred.str() == ns::rdfs + "subClassOf")
        throw UnsupportedConstruct("existential restriction as superclass", current_.line, current_.column);
      throw UnsupportedConstruct("blank node", current_.line, current_.column);
    }
    o.is_literal = true;
    o.literal = literal();
    return o;
  }

  void statement() {
    if (current_.kind == Tok::AtPrefix) {
      advance();
      if (current_.kind != Tok::PName || current_.text.back() != ':' ||
          current_.text.find(':') != current_.text.size() - 1)
        fail("expected prefix name");
      const std::string name = current_.text.substr(0, current_.text.size() - 1);
      advance();
      if (current_.kind != Tok::IriRef) fail("expected namespace IRI");
      kb_.set_prefix(name, current_.text);
      advance();
      expect(Tok::Dot, "'.'");
      return;
    }
    if (current_.kind == Tok::LBracket) {
      restriction_statement();
      return;
    }
    if (!at_iri()) fail("expected subject");
    const Iri subject = iri();
    predicate_object_list(subject);
    expect(Tok::Dot, "'.'");
  }

  void predicate_object_list(const Iri& subject) {
    while (true) {
      const Iri pred = predicate();
      while (true) {
        const Token at = current_;
        Object o = object(pred);
        apply(subject, pred, o, at);
        if (current_.kind != Tok::Comma) break;
        advance();
      }
      if (current_.kind != Tok::Semicolon) break;
      while (current_.kind == Tok::Semicolon) advance();
      if (current_.kind == Tok::Dot || current_.kind == Tok::RBracket) break;
    }
  }

  void restriction_statement() {
    const Token open = current_;
    advance();
    std::optional<Iri> on_property;
    std::optional<Iri> filler;
    while (current_.kind != Tok::RBracket) {
      const Token at = current_;
      const Iri pred = predicate();
      const Iri value = at_iri() ? iri() : (fail("expected IRI in restriction"), Iri{});
      if (pred.str() == ns::rdf + "type" && value.str() == ns::owl + "Restriction") {
        // optional typing
      } else if (pred.str() == ns::owl + "onProperty") {
        on_property = value;
      } else if (pred.str() == ns::owl + "someValuesFrom") {
        filler = value;
      } else {
        throw UnsupportedConstruct("restriction predicate " + kb_.compact(pred), at.line, at.column);
      }
      if (current_.kind == Tok::Semicolon) {
        advance();
      } else if (current_.kind != Tok::RBracket) {
        fail("expected ';' or ']'");
      }
    }
    advance();
    if (!on_property || !filler)
      throw UnsupportedConstruct("blank node other than an existential restriction", open.line, open.column);
    bool any = false;
    while (current_.kind != Tok::Dot) {
      const Token at = current_;
      const Iri pred = predicate();
      if (pred.str() != ns::rdfs + "subClassOf")
        throw UnsupportedConstruct("restriction used with " + kb_.compact(pred), at.line, at.column);
      while (true) {
        if (!at_iri()) fail("expected superclass IRI");
        kb_.add(Axiom::existential(*on_property, *filler, iri()));
        any = true;
        if (current_.kind != Tok::Comma) break;
        advance();
      }
      if (current_.kind == Tok::Semicolon) {
        advance();
      } else {
        break;
      }
    }
    if (!any) throw UnsupportedConstruct("standalone blank node", open.line, open.column);
    expect(Tok::Dot, "'.'");
  }

  void apply(const Iri& s, const Iri& p, const Object& o, const Token& at) {
    const std::string& pred = p.str();
    auto need_iri = [&]() -> const Iri& {
      if (o.is_literal) throw SyntaxError(at.line, at.column, "literal not allowed as object of " + kb_.compact(p));
      return o.iri;
    };
    if (pred == ns::rdf + "type") {
      const Iri& cls = need_iri();
      const std::string& c = cls.str();
      if (c == ns::owl + "Class" || c == ns::rdfs + "Class") {
        kb_.declare(s, TermKind::Class);
      } else if (c == ns::owl + "ObjectProperty") {
        kb_.declare(s, TermKind::ObjectProperty);
      } else if (c == ns::owl + "DatatypeProperty") {
        kb_.declare(s, TermKind::DataProperty);
      } else if (c == ns::owl + "NamedIndividual") {
        kb_.declare(s, TermKind::Individual);
      } else if (in_reserved_namespace(cls)) {
        throw UnsupportedConstruct("rdf:type " + kb_.compact(cls), at.line, at.column);
      } else {
        kb_.add(ClassAssertion{s, cls});
      }
    } else if (pred == ns::rdfs + "subClassOf") {
      kb_.add(Axiom::sub_class(s, need_iri()));
    } else if (pred == ns::owl + "equivalentClass") {
      kb_.add(Axiom::equivalent(s, need_iri()));
    } else if (pred == ns::rdfs + "subPropertyOf") {
      kb_.add(Axiom::sub_property(s, need_iri()));
    } else if (in_reserved_namespace(p)) {
      throw UnsupportedConstruct("predicate " + kb_.compact(p), at.line, at.column);
    } else if (o.is_literal) {
      kb_.add(DataLink{s, p, o.literal});
    } else {
      kb_.add(ObjectLink{s, p, o.iri});
    }
  }

  KnowledgeBase& kb_;
  Lexer lexer_;
  Token current_;
};

std::string escape_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static constexpr char hex[] = "0123456789ABCDEF";
          out += "\\u00";
          out += hex[(c >> 4) & 0xF];
          out += hex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string_view xsd_local(Datatype type) {
  switch (type) {
    case Datatype::String: return "string";
    case Datatype::Integer: return "integer";
    case Datatype::Decimal: return "decimal";
    case Datatype::Boolean: return "boolean";
    case Datatype::IriRef: return "anyURI";
  }
  return "string";
}

}  // namespace

bool is_turtle_local_name(std::string_view local) noexcept {
  if (local.empty()) return false;
  if (!is_name_start(static_cast<unsigned char>(local.front()))) return false;
  if (local.back() == '.') return false;
  for (char c : local)
    if (!is_name_char(static_cast<unsigned char>(c))) return false;
  return true;
}

void parse_turtle_into(KnowledgeBase& kb, std::string_view text) { Parser(kb, text).run(); }

KnowledgeBase parse_turtle(std::string_view text) {
  KnowledgeBase kb;
  parse_turtle_into(kb, text);
  return kb;
}

KnowledgeBase parse_turtle(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_turtle(text);
}

std::string serialize_turtle(const KnowledgeBase& kb) {
  std::ostringstream out;
  for (const auto& [name, ns] : kb.prefixes()) out << "@prefix " << name << ": <" << ns << "> .\n";

  auto term = [&](const Iri& iri) { return kb.compact(iri); };
  const std::string rdf_type = "a";
  const std::string owl_class = term(Iri(ns::owl + "Class"));

  bool first_section = true;
  auto section = [&] {
    if (first_section) {
      out << '\n';
      first_section = false;
    }
  };

  static constexpr std::pair<TermKind, const char*> kinds[] = {
      {TermKind::Class, "Class"},
      {TermKind::ObjectProperty, "ObjectProperty"},
      {TermKind::DataProperty, "DatatypeProperty"},
      {TermKind::Individual, "NamedIndividual"},
  };
  for (const auto& [iri, flags] : kb.vocabulary()) {
    for (const auto& [kind, owl_name] : kinds) {
      if (flags & static_cast<std::uint8_t>(kind)) {
        section();
        out << term(iri) << ' ' << rdf_type << ' ' << term(Iri(ns::owl + owl_name)) << " .\n";
      }
    }
  }
  (void)owl_class;

  for (const auto& ax : kb.axioms()) {
    section();
    switch (ax.kind) {
      case AxiomKind::SubClassOf:
        out << term(ax.subject) << ' ' << term(Iri(ns::rdfs + "subClassOf")) << ' ' << term(ax.object) << " .\n";
        break;
      case AxiomKind::EquivalentClass:
        out << term(ax.subject) << ' ' << term(Iri(ns::owl + "equivalentClass")) << ' ' << term(ax.object) << " .\n";
        break;
      case AxiomKind::SubPropertyOf:
        out << term(ax.subject) << ' ' << term(Iri(ns::rdfs + "subPropertyOf")) << ' ' << term(ax.object) << " .\n";
        break;
      case AxiomKind::ExistentialRestrictionSubClass:
        out << "[ a " << term(Iri(ns::owl + "Restriction")) << " ; " << term(Iri(ns::owl + "onProperty")) << ' '
            << term(*ax.on_property) << " ; " << term(Iri(ns::owl + "someValuesFrom")) << ' ' << term(ax.subject)
            << " ] " << term(Iri(ns::rdfs + "subClassOf")) << ' ' << term(ax.object) << " .\n";
        break;
    }
  }

  for (const auto& a : kb.assertions()) {
    section();
    if (const auto* ca = std::get_if<ClassAssertion>(&a)) {
      out << term(ca->individual) << " a " << term(ca->cls) << " .\n";
    } else if (const auto* ol = std::get_if<ObjectLink>(&a)) {
      out << term(ol->subject) << ' ' << term(ol->property) << ' ' << term(ol->object) << " .\n";
    } else if (const auto* dl = std::get_if<DataLink>(&a)) {
      out << term(dl->subject) << ' ' << term(dl->property) << ' ' << escape_string(dl->value.lexical()) << "^^"
          << term(Iri(ns::xsd + std::string(xsd_local(dl->value.datatype())))) << " .\n";
    }
  }
  return out.str();
}

}  // namespace aurcap
