#include "mvlim/parser.hpp"

#include <cctype>

namespace mvlim {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(Expr::neg(term()));
      else
        break;
    }
    return terms.size() == 1 ? terms.front() : Expr::add(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*'))
        factors.push_back(unary());
      else if (accept('/'))
        factors.push_back(Expr::pow(unary(), Rational(-1)));
      else
        break;
    }
    return factors.size() == 1 ? factors.front() : Expr::mul(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return Expr::neg(unary());
    return factor();
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) return Expr::pow(b, exponent());
    return b;
  }

  mpz_class integer() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail(pos_ >= text_.size() ? "expected integer but input ended" : "expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  Rational exponent() {
    skip_ws();
    if (accept('(')) {
      bool negative = accept('-');
      mpz_class num = integer();
      mpz_class den = 1;
      if (accept('/')) {
        size_t at = pos_;
        den = integer();
        if (den == 0) throw ParseError("zero denominator in exponent", at);
      }
      expect(')');
      Rational q(negative ? mpz_class(-num) : num, den);
      q.canonicalize();
      return q;
    }
    return Rational(integer());
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    std::string_view lexeme = text_.substr(start, pos_ - start);
    if (lexeme == ".") throw ParseError("malformed number", start);
    return Expr::constant(parse_rational(lexeme));
  }

  Expr identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    skip_ws();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    auto fn = function_from_name(name);
    if (call) {
      if (!fn) throw ParseError("unknown function '" + name + "'", start);
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::func(*fn, arg);
    }
    if (fn) throw ParseError("function '" + name + "' needs an argument", pos_);
    return Expr::variable(std::move(name));
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace mvlim
