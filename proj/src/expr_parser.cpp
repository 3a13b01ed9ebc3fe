#include "qpbraid/expr_parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace qpbraid {

namespace {

// Dense coefficients c[i][j] of w^i z^j.
struct Poly2 {
  std::vector<std::vector<cplx>> c;

  static Poly2 constant(cplx v) { return Poly2{{{v}}}; }
  static Poly2 monomial(int wdeg, int zdeg) {
    Poly2 p;
    p.c.assign(wdeg + 1, {});
    p.c[wdeg].assign(zdeg + 1, cplx{});
    p.c[wdeg][zdeg] = 1.0;
    return p;
  }

  cplx at(std::size_t i, std::size_t j) const {
    return i < c.size() && j < c[i].size() ? c[i][j] : cplx{};
  }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r;
    r.c.resize(std::max(c.size(), o.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      std::size_t len = std::max(i < c.size() ? c[i].size() : 0,
                                 i < o.c.size() ? o.c[i].size() : 0);
      r.c[i].resize(len);
      for (std::size_t j = 0; j < len; ++j) r.c[i][j] = at(i, j) + o.at(i, j);
    }
    return r;
  }

  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    if (c.empty() || o.c.empty()) return r;
    r.c.resize(c.size() + o.c.size() - 1);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c[i].size(); ++j) {
        if (c[i][j] == cplx{}) continue;
        for (std::size_t k = 0; k < o.c.size(); ++k)
          for (std::size_t l = 0; l < o.c[k].size(); ++l) {
            auto& row = r.c[i + k];
            if (row.size() < j + l + 1) row.resize(j + l + 1);
            row[j + l] += c[i][j] * o.c[k][l];
          }
      }
    return r;
  }

  Poly2 scaled(cplx s) const {
    Poly2 r = *this;
    for (auto& row : r.c)
      for (auto& v : row) v *= s;
    return r;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Poly2 parse() {
    Poly2 p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("polynomial expression, position " + std::to_string(pos_) + ": " +
                     msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Poly2 expr() {
    Poly2 acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc = acc + term();
      } else if (c == '-') {
        ++pos_;
        acc = acc + term().scaled(-1.0);
      } else {
        return acc;
      }
    }
  }

  bool starts_factor(char c) const {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'z' ||
           c == 'w' || c == 'i' || c == '(';
  }

  Poly2 term() {
    Poly2 acc = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * unary();
      } else if (starts_factor(c)) {
        acc = acc * unary();
      } else {
        return acc;
      }
    }
  }

  Poly2 unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return unary().scaled(-1.0);
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Poly2 power() {
    Poly2 base = primary();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (e > 64) fail("exponent too large");
    Poly2 r = Poly2::constant(1.0);
    for (int k = 0; k < e; ++k) r = r * base;
    return r;
  }

  Poly2 primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Poly2 inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == 'z') {
      ++pos_;
      return Poly2::monomial(0, 1);
    }
    if (c == 'w') {
      ++pos_;
      return Poly2::monomial(1, 0);
    }
    if (c == 'i') {
      ++pos_;
      return Poly2::constant(cplx{0.0, 1.0});
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      std::string lit(text_.substr(start, pos_ - start));
      try {
        std::size_t used = 0;
        double v = std::stod(lit, &used);
        if (used != lit.size()) fail("bad number '" + lit + "'");
        return Poly2::constant(v);
      } catch (const std::logic_error&) {
        fail("bad number '" + lit + "'");
      }
    }
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BivariatePolynomial parse_polynomial_expression(std::string_view text) {
  Poly2 p = Parser(text).parse();
  std::vector<UnivariatePolynomial> w_coeffs;
  for (auto& row : p.c) w_coeffs.emplace_back(std::move(row));
  return BivariatePolynomial(std::move(w_coeffs));
}

}  // namespace qpbraid
