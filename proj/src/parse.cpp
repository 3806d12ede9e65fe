#include "linstab/parse.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "linstab/constructions.hpp"

namespace linstab {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, std::min(pos_, text_.size()));
  }

  std::size_t pos() const { return pos_; }

  bool sign() {
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) return text_[pos_++] == '-';
    return false;
  }

  Int digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_)
      throw SemanticError("integer out of range at position " + std::to_string(start));
    return v;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Int integer() {
    const bool negative = sign();
    const Int v = digits();
    return negative ? -v : v;
  }

  // int ['/' int] | decimal; `allow_fraction` is off inside surd expressions, where '/' is division.
  Rational number(bool allow_fraction) {
    const bool negative = sign();
    Int num = digits();
    Int den = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        den = checked_mul(den, 10);
        num = checked_add(checked_mul(num, 10), text_[pos_] - '0');
        ++pos_;
      }
      if (pos_ == start) fail("expected digits after '.'");
    } else if (allow_fraction && accept('/')) {
      const std::size_t at = pos_;
      den = integer();
      if (den == 0) throw SemanticError("zero denominator at position " + std::to_string(at));
    }
    return Rational(negative ? -num : num, den);
  }

  // expr := term {('+'|'-') term}
  Surd surd_expr() {
    Surd v = surd_term();
    for (;;) {
      if (accept('+')) {
        v = v + surd_term();
      } else if (accept('-')) {
        v = v - surd_term();
      } else {
        return v;
      }
    }
  }

  Surd surd_term() {
    Surd v = surd_factor();
    for (;;) {
      if (accept('*')) {
        v = v * surd_factor();
      } else if (accept('/')) {
        v = v / surd_factor();
      } else {
        return v;
      }
    }
  }

  Surd surd_factor() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -surd_factor();
    }
    if (c == '(') {
      ++pos_;
      Surd v = surd_expr();
      expect(')');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t at = pos_;
      if (identifier() != "sqrt") {
        pos_ = at;
        fail("expected sqrt");
      }
      expect('(');
      const Int n = integer();
      expect(')');
      return Surd::sqrt(n);
    }
    const Rational q = number(false);
    return Surd(BigRational(q.numerator(), q.denominator()));
  }

  SetValue set(const Limits& limits, bool top) {
    const char c = peek();
    if (c == '{') return EPSet::finite(int_list('{', '}'));
    const std::size_t at = pos_;
    const std::string name = identifier();
    if (name.empty()) fail("expected a set expression");
    if (name == "Z") return EPSet::integers();
    if (name == "N") return EPSet::naturals();
    if (name == "AP") {
      const char variant = peek();
      if (variant == '+' || variant == '-') ++pos_;
      expect('(');
      const Int r = integer();
      expect(',');
      const std::size_t gpos = pos_;
      const Int g = integer();
      Int bound = 0;
      if (variant == '+' || variant == '-') {
        expect(',');
        bound = integer();
      }
      expect(')');
      if (g <= 0) throw SemanticError("modulus must be positive at position " + std::to_string(gpos));
      if (variant == '+') return EPSet::up_progression(r, g, bound);
      if (variant == '-') return EPSet::down_progression(r, g, bound);
      return EPSet::progression(r, g);
    }
    if (name == "U") {
      expect('(');
      EPSet out;
      do {
        out = set_union(out, epset(limits), limits);
      } while (accept(','));
      expect(')');
      return out;
    }
    if (name == "bohr" || name == "sparse" || name == "sparse_ii") {
      if (!top) {
        pos_ = at;
        throw SemanticError("truncated construction '" + name + "' cannot be combined, at position " +
                            std::to_string(at));
      }
      expect('(');
      try {
        if (name == "bohr") {
          const Surd alpha = surd_expr();
          expect(',');
          const Rational delta = number(true);
          expect(',');
          const Int n = integer();
          expect(')');
          return bohr_truncation(alpha, delta, n);
        }
        const Rational delta = number(true);
        expect(',');
        if (name == "sparse_ii") {
          const Int k = integer();
          expect(')');
          if (k < 1 || k > 15) throw SemanticError("sparse_ii needs 1 <= k <= 15");
          return sparse_interval_union(self_power_sequence(k), delta);
        }
        std::vector<Rational> xs;
        do {
          xs.push_back(number(true));
        } while (accept(','));
        expect(')');
        return sparse_interval_union(xs, delta);
      } catch (const PreconditionError& e) {
        throw SemanticError(e.what());
      }
    }
    pos_ = at;
    fail("unknown set expression '" + name + "'");
  }

  EPSet epset(const Limits& limits) { return std::get<EPSet>(set(limits, false)); }

  std::vector<Int> int_list(char open, char close) {
    expect(open);
    std::vector<Int> xs;
    if (accept(close)) return xs;
    do {
      xs.push_back(integer());
    } while (accept(','));
    expect(close);
    return xs;
  }

  void op_items(std::vector<LinearOp>& ops) {
    do {
      expect('(');
      const std::size_t at = pos_;
      const Int a = integer();
      expect(',');
      const Int b = integer();
      expect(')');
      if (a < 1 || b < 1) throw SemanticError("operation entries must be positive at position " + std::to_string(at));
      Int reps = 1;
      if (accept('^')) {
        const std::size_t rp = pos_;
        reps = integer();
        if (reps < 1) throw SemanticError("repetition count must be positive at position " + std::to_string(rp));
        if (reps > (Int{1} << 24)) throw SemanticError("repetition count too large");
      }
      ops.insert(ops.end(), static_cast<std::size_t>(reps), LinearOp(a, b));
    } while (peek() == '(');
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SetValue parse_set_expression(std::string_view text, const Limits& limits) {
  Parser p(text);
  SetValue v = p.set(limits, true);
  p.finish();
  return v;
}

EPSet parse_epset(std::string_view text, const Limits& limits) {
  Parser p(text);
  EPSet v = p.epset(limits);
  p.finish();
  return v;
}

OpSequence parse_ops(std::string_view text) {
  Parser p(text);
  std::vector<LinearOp> ops;
  bool cyclic = false;
  if (p.peek() == 'c') {
    const std::size_t at = p.pos();
    if (p.identifier() != "cyc") throw SyntaxError("expected 'cyc['", at);
    p.expect('[');
    p.op_items(ops);
    p.expect(']');
    cyclic = true;
  } else {
    p.op_items(ops);
  }
  p.finish();
  return OpSequence(std::move(ops), cyclic);
}

ResidueSet parse_residue_set(std::string_view text) {
  Parser p(text);
  const std::size_t at = p.pos();
  if (p.identifier() != "mod") throw SyntaxError("expected 'mod'", at);
  const std::size_t gpos = p.pos();
  const Int g = p.integer();
  if (g <= 0) throw SemanticError("modulus must be positive at position " + std::to_string(gpos));
  const auto xs = p.int_list('{', '}');
  p.finish();
  return ResidueSet(g, xs);
}

Rational parse_rational(std::string_view text) {
  Parser p(text);
  const Rational q = p.number(true);
  p.finish();
  return q;
}

Surd parse_surd(std::string_view text) {
  Parser p(text);
  const Surd s = p.surd_expr();
  p.finish();
  return s;
}

std::string to_string(const SetValue& v) {
  return std::visit([](const auto& x) { return x.to_string(); }, v);
}

}  // namespace linstab
