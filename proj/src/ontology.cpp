#include "elball/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "elball/error.hpp"

namespace elball {

Concept Concept::top() { return Concept(std::make_shared<const Node>(Node{Kind::kTop})); }
Concept Concept::bot() { return Concept(std::make_shared<const Node>(Node{Kind::kBot})); }

Concept Concept::atomic(ClassId c) {
  if (c == ClassVocabulary::kTop) return top();
  if (c == ClassVocabulary::kBot) return bot();
  return Concept(std::make_shared<const Node>(Node{Kind::kAtomic, c.value}));
}

Concept Concept::nominal(IndividualId a) {
  return Concept(std::make_shared<const Node>(Node{Kind::kNominal, a.value}));
}

Concept Concept::conjunction(Concept lhs, Concept rhs) {
  return Concept(std::make_shared<const Node>(
      Node{Kind::kConjunction, 0, std::make_shared<const Concept>(std::move(lhs)),
           std::make_shared<const Concept>(std::move(rhs))}));
}

Concept Concept::existential(RelationId r, Concept filler) {
  return Concept(std::make_shared<const Node>(Node{
      Kind::kExistential, r.value, nullptr, std::make_shared<const Concept>(std::move(filler))}));
}

std::size_t Concept::depth() const noexcept {
  switch (kind()) {
    case Kind::kConjunction:
      return 1 + std::max(lhs().depth(), rhs().depth());
    case Kind::kExistential:
      return 1 + filler().depth();
    default:
      return 1;
  }
}

bool operator==(const Concept& a, const Concept& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Concept::Kind::kTop:
    case Concept::Kind::kBot:
      return true;
    case Concept::Kind::kAtomic:
    case Concept::Kind::kNominal:
      return a.node_->symbol == b.node_->symbol;
    case Concept::Kind::kConjunction:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Concept::Kind::kExistential:
      return a.node_->symbol == b.node_->symbol && a.filler() == b.filler();
  }
  return false;
}

namespace {

enum class Tok { kIdent, kLess, kAnd, kSome, kTop, kBot, kLBrace, kRBrace, kLParen, kRParen, kComma, kColon, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

bool ident_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_continue(char c) {
  return ident_start(c) || c == '.' || c == ':' || c == '-' || c == '#' || c == '\'';
}

std::vector<Token> lex_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t col = i + 1;
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), col});
      ++i;
    };
    switch (c) {
      case '<': single(Tok::kLess); continue;
      case '{': single(Tok::kLBrace); continue;
      case '}': single(Tok::kRBrace); continue;
      case '(': single(Tok::kLParen); continue;
      case ')': single(Tok::kRParen); continue;
      case ',': single(Tok::kComma); continue;
      case ':': single(Tok::kColon); continue;
      default: break;
    }
    if (!ident_start(c)) {
      throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
    }
    std::size_t j = i + 1;
    while (j < line.size() && ident_continue(line[j])) ++j;
    std::string word(line.substr(i, j - i));
    Tok kind = Tok::kIdent;
    if (word == "and") kind = Tok::kAnd;
    else if (word == "some") kind = Tok::kSome;
    else if (word == "Top") kind = Tok::kTop;
    else if (word == "Bot") kind = Tok::kBot;
    out.push_back({kind, std::move(word), col});
    i = j;
  }
  out.push_back({Tok::kEnd, "", line.size() + 1});
  return out;
}

class LineParser {
 public:
  LineParser(Ontology& o, std::vector<Token> tokens, std::size_t line_no)
      : o_(o), toks_(std::move(tokens)), line_(line_no) {}

  Axiom axiom() {
    const SourcePos pos{line_, peek().column};
    // r(a, b)
    if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kLParen) {
      const auto rel = o_.relations.intern(next().text);
      expect(Tok::kLParen, "'('");
      const auto a = o_.individuals.intern(expect(Tok::kIdent, "individual name").text);
      expect(Tok::kComma, "','");
      const auto b = o_.individuals.intern(expect(Tok::kIdent, "individual name").text);
      expect(Tok::kRParen, "')'");
      finish();
      return Axiom{RoleAssertion{rel, a, b}, pos};
    }
    // {a} : C
    if (peek().kind == Tok::kLBrace && peek(1).kind == Tok::kIdent &&
        peek(2).kind == Tok::kRBrace && peek(3).kind == Tok::kColon) {
      next();
      const auto a = o_.individuals.intern(next().text);
      next();
      next();
      Concept c = expression();
      finish();
      return Axiom{ClassAssertion{std::move(c), a}, pos};
    }
    Concept sub = expression();
    expect(Tok::kLess, "'<'");
    Concept super = expression();
    finish();
    return Axiom{GeneralInclusion{std::move(sub), std::move(super)}, pos};
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(msg + (t.kind == Tok::kEnd ? " at end of line" : ", found '" + t.text + "'"),
                     line_, t.column);
  }

  void finish() {
    if (peek().kind != Tok::kEnd) fail("trailing input");
  }

  Concept expression() {
    Concept c = primary();
    while (peek().kind == Tok::kAnd) {
      next();
      c = Concept::conjunction(std::move(c), primary());
    }
    return c;
  }

  Concept primary() {
    switch (peek().kind) {
      case Tok::kTop:
        next();
        return Concept::top();
      case Tok::kBot:
        next();
        return Concept::bot();
      case Tok::kLBrace: {
        next();
        const auto a = o_.individuals.intern(expect(Tok::kIdent, "individual name").text);
        expect(Tok::kRBrace, "'}'");
        return Concept::nominal(a);
      }
      case Tok::kLParen: {
        next();
        Concept c = expression();
        expect(Tok::kRParen, "')'");
        return c;
      }
      case Tok::kIdent: {
        if (peek(1).kind == Tok::kSome) {
          const auto r = o_.relations.intern(next().text);
          next();
          return Concept::existential(r, primary());
        }
        return Concept::atomic(o_.classes.intern(next().text));
      }
      default:
        fail("expected a concept");
    }
  }

  Ontology& o_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

bool blank(const std::vector<Token>& toks) { return toks.size() == 1; }

}  // namespace

void parse_into(Ontology& ontology, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto tokens = lex_line(text.substr(start, end - start), line_no);
    if (!blank(tokens)) {
      LineParser p(ontology, std::move(tokens), line_no);
      ontology.axioms.push_back(p.axiom());
    }
    if (end == text.size()) break;
    start = end + 1;
  }
}

Ontology parse_ontology(std::string_view text) {
  Ontology o;
  parse_into(o, text);
  return o;
}

namespace {

void format_into(std::ostringstream& os, const Concept& c, const Ontology& o, bool as_primary) {
  using K = Concept::Kind;
  switch (c.kind()) {
    case K::kTop: os << "Top"; return;
    case K::kBot: os << "Bot"; return;
    case K::kAtomic: os << o.classes.name(c.class_id()); return;
    case K::kNominal: os << '{' << o.individuals.name(c.individual()) << '}'; return;
    case K::kExistential:
      os << o.relations.name(c.relation()) << " some ";
      format_into(os, c.filler(), o, true);
      return;
    case K::kConjunction:
      if (as_primary) os << '(';
      format_into(os, c.lhs(), o, false);
      os << " and ";
      format_into(os, c.rhs(), o, true);
      if (as_primary) os << ')';
      return;
  }
}

}  // namespace

std::string format_concept(const Concept& c, const Ontology& o) {
  std::ostringstream os;
  format_into(os, c, o, false);
  return os.str();
}

std::string format_axiom(const Axiom& a, const Ontology& o) {
  struct Visitor {
    const Ontology& o;
    std::string operator()(const GeneralInclusion& g) const {
      return format_concept(g.sub, o) + " < " + format_concept(g.super, o);
    }
    std::string operator()(const ClassAssertion& c) const {
      return "{" + o.individuals.name(c.individual) + "} : " + format_concept(c.type, o);
    }
    std::string operator()(const RoleAssertion& r) const {
      return o.relations.name(r.relation) + "(" + o.individuals.name(r.subject) + ", " +
             o.individuals.name(r.object) + ")";
    }
  };
  return std::visit(Visitor{o}, a.body);
}

std::string format_ontology(const Ontology& o) {
  std::string out;
  for (const auto& a : o.axioms) {
    out += format_axiom(a, o);
    out += '\n';
  }
  return out;
}

}  // namespace elball
