#pragma once

#include <string>
#include <vector>

#include "jonq/scalar.hpp"

namespace jonq {

/* Token of the shared expression grammar for maps and group elements. */
struct ExprToken {
  enum Kind {
    Int, Var, Sqrt, Plus, Minus, Star, Slash, Caret,
    LParen, RParen, LBracket, RBracket, Comma, Colon, End
  };
  Kind kind;
  mpz_class ival;
  char var = 0;
};

std::vector<ExprToken> lex_expr(const std::string& s);

/* Recursive descent over
     expr   := ('-')? term (('+' | '-') term)*
     term   := factor (('*' | '/') factor)*
     factor := base ('^' ('-')? integer)?
     base   := integer | variable | '(' expr ')' | 'sqrt' '(' integer ')'
   The ops policy supplies constants, variables and square roots; the
   value type carries the arithmetic, including pow with long exponents. */
template <typename V, typename Ops>
class ExprParser {
  const std::vector<ExprToken>& ts_;
  const Ops& ops_;
  size_t i_ = 0;

public:
  ExprParser(const std::vector<ExprToken>& ts, const Ops& ops) : ts_(ts), ops_(ops) {}

  const ExprToken& peek() const { return ts_[i_]; }

  bool accept(ExprToken::Kind k) {
    if (ts_[i_].kind != k) return false;
    ++i_;
    return true;
  }

  void expect(ExprToken::Kind k, const char* what) {
    if (!accept(k)) throw parse_error(std::string("expected ") + what);
  }

  V expr() {
    bool neg = accept(ExprToken::Minus);
    V v = term();
    if (neg) v = -v;
    for (;;) {
      if (accept(ExprToken::Plus))
        v = v + term();
      else if (accept(ExprToken::Minus))
        v = v - term();
      else
        return v;
    }
  }

  V term() {
    V v = factor();
    for (;;) {
      if (accept(ExprToken::Star))
        v = v * factor();
      else if (accept(ExprToken::Slash))
        v = v / factor();
      else
        return v;
    }
  }

  V factor() {
    V v = base();
    if (!accept(ExprToken::Caret)) return v;
    bool neg = accept(ExprToken::Minus);
    if (peek().kind != ExprToken::Int) throw parse_error("expected an integer exponent");
    const mpz_class& e = peek().ival;
    if (!e.fits_slong_p()) throw parse_error("exponent does not fit a machine word");
    ++i_;
    long n = e.get_si();
    return v.pow(neg ? -n : n);
  }

  V base() {
    if (peek().kind == ExprToken::Int) {
      V v = ops_.from_int(peek().ival);
      ++i_;
      return v;
    }
    if (peek().kind == ExprToken::Var) {
      V v = ops_.var(peek().var);
      ++i_;
      return v;
    }
    if (accept(ExprToken::Sqrt)) {
      expect(ExprToken::LParen, "'(' after sqrt");
      bool neg = accept(ExprToken::Minus);
      if (peek().kind != ExprToken::Int) throw parse_error("expected an integer under sqrt");
      mpz_class d = peek().ival;
      ++i_;
      if (neg) d = -d;
      expect(ExprToken::RParen, "')' after sqrt");
      return ops_.sqrt_int(d);
    }
    if (accept(ExprToken::LParen)) {
      V v = expr();
      expect(ExprToken::RParen, "')'");
      return v;
    }
    throw parse_error("expected a constant, a variable or a parenthesis");
  }
};

template <typename V, typename Ops>
V parse_full_expr(const std::string& s, const Ops& ops) {
  auto ts = lex_expr(s);
  ExprParser<V, Ops> p(ts, ops);
  V v = p.expr();
  p.expect(ExprToken::End, "end of expression");
  return v;
}

}  // namespace jonq
