#include "jonq/expr.hpp"

#include <cctype>

namespace jonq {

std::vector<ExprToken> lex_expr(const std::string& s) {
  std::vector<ExprToken> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
      ExprToken t{ExprToken::Int, mpz_class(s.substr(i, j - i)), 0};
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isalpha((unsigned char)c)) {
      size_t j = i;
      while (j < s.size() && std::isalpha((unsigned char)s[j])) ++j;
      std::string w = s.substr(i, j - i);
      if (w == "sqrt") {
        out.push_back({ExprToken::Sqrt, 0, 0});
      } else if (w.size() == 1 && (w[0] == 'x' || w[0] == 'y' || w[0] == 'z')) {
        out.push_back({ExprToken::Var, 0, w[0]});
      } else {
        throw parse_error("unknown name '" + w + "' in expression");
      }
      i = j;
      continue;
    }
    ExprToken::Kind k;
    switch (c) {
      case '+': k = ExprToken::Plus; break;
      case '-': k = ExprToken::Minus; break;
      case '*': k = ExprToken::Star; break;
      case '/': k = ExprToken::Slash; break;
      case '^': k = ExprToken::Caret; break;
      case '(': k = ExprToken::LParen; break;
      case ')': k = ExprToken::RParen; break;
      case '[': k = ExprToken::LBracket; break;
      case ']': k = ExprToken::RBracket; break;
      case ',': k = ExprToken::Comma; break;
      case ':': k = ExprToken::Colon; break;
      default:
        throw parse_error(std::string("unexpected character '") + c + "' in expression");
    }
    out.push_back({k, 0, 0});
    ++i;
  }
  out.push_back({ExprToken::End, 0, 0});
  return out;
}

}  // namespace jonq
