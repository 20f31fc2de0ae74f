#ifndef MSHLAB_PARSER_HPP
#define MSHLAB_PARSER_HPP

#include <cctype>
#include <cstdlib>
#include <string>
#include <variant>
#include <vector>

#include "mshlab/current.hpp"
#include "mshlab/errors.hpp"
#include "mshlab/model_function.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

using ParsedSpec = std::variant<ModelFunction, SimpleCurrent>;

namespace detail {

// Recursive-descent parser for the function/current grammar:
//   func    := radpow(s=R[,center=pt]) | radlog([center=pt]) | quad()
//            | fund([center=pt]) | aff(c0=R,c1=R[,center=pt])
//            | cyl(s=R,k=I[,center=pt]) | sum(R*func{,R*func})
//   current := cur(coef=(func|1),ddc=func^(expo){*func^(expo)}[,beta=I])
//   expo    := I | m-1 | m+p-n     pt := 2n comma-separated reals
// Whitespace-insensitive; errors carry the offset and the expected token.
class SpecParser {
 public:
  SpecParser(const std::string& text, const Setting& st) : text_(text), st_(st) {}

  ParsedSpec parse() {
    skipWs();
    ParsedSpec out = peekWord("cur") ? ParsedSpec(parseCurrent()) : ParsedSpec(parseFunc());
    skipWs();
    if (pos_ != text_.size()) fail("end of input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(pos_, expected);
  }

  void skipWs() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peekChar(char c) {
    skipWs();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  // True when the next word (letters) equals w, without consuming.
  bool peekWord(const std::string& w) {
    skipWs();
    size_t e = pos_;
    while (e < text_.size() && std::isalpha(static_cast<unsigned char>(text_[e]))) ++e;
    return text_.compare(pos_, e - pos_, w) == 0 && e - pos_ == w.size();
  }

  void expect(const std::string& lit) {
    skipWs();
    if (text_.compare(pos_, lit.size(), lit) != 0) fail("'" + lit + "'");
    pos_ += lit.size();
  }

  bool tryConsume(char c) {
    if (peekChar(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string word() {
    skipWs();
    size_t e = pos_;
    while (e < text_.size() && std::isalpha(static_cast<unsigned char>(text_[e]))) ++e;
    if (e == pos_) fail("identifier");
    std::string w = text_.substr(pos_, e - pos_);
    pos_ = e;
    return w;
  }

  double real() {
    skipWs();
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail("number");
    pos_ += static_cast<size_t>(end - start);
    return v;
  }

  long integer() {
    skipWs();
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    const long v = std::strtol(start, &end, 10);
    if (end == start) fail("integer");
    pos_ += static_cast<size_t>(end - start);
    return v;
  }

  Point point() {
    Point p(st_.n);
    for (int j = 0; j < st_.n; ++j) {
      if (j) expect(",");
      const double re = real();
      expect(",");
      const double im = real();
      p[j] = Complex(re, im);
    }
    return p;
  }

  Point optionalCenter() {
    if (tryConsume(',')) {
      expect("center");
      expect("=");
      return point();
    }
    return origin(st_.n);
  }

  // "center=pt" or nothing (next token is the closing parenthesis).
  Point optionalBareCenter() {
    if (peekChar(')')) return origin(st_.n);
    if (!peekWord("center")) fail("')' or 'center'");
    expect("center");
    expect("=");
    return point();
  }

  ModelFunction parseFunc() {
    const size_t at = pos_;
    const std::string name = word();
    try {
      if (name == "radpow") {
        expect("(");
        expect("s");
        expect("=");
        const double s = real();
        Point c = optionalCenter();
        expect(")");
        return ModelFunction::radial(st_.n, Profile::power(s), std::move(c));
      }
      if (name == "radlog") {
        expect("(");
        Point c = optionalBareCenter();
        expect(")");
        return ModelFunction::radial(st_.n, Profile::logProfile(), std::move(c));
      }
      if (name == "quad") {
        expect("(");
        expect(")");
        return ModelFunction::radial(st_.n, Profile::affine(0.0, 1.0));
      }
      if (name == "fund") {
        expect("(");
        Point c = optionalBareCenter();
        expect(")");
        return fundamentalSolution(st_, std::move(c));
      }
      if (name == "aff") {
        expect("(");
        expect("c0");
        expect("=");
        const double c0 = real();
        expect(",");
        expect("c1");
        expect("=");
        const double c1 = real();
        Point c = optionalCenter();
        expect(")");
        return ModelFunction::radial(st_.n, Profile::affine(c0, c1), std::move(c));
      }
      if (name == "cyl") {
        expect("(");
        expect("s");
        expect("=");
        const double s = real();
        expect(",");
        expect("k");
        expect("=");
        const long k = integer();
        Point c = optionalCenter();
        expect(")");
        return ModelFunction::cylindrical(st_.n, static_cast<int>(k), Profile::power(s),
                                          std::move(c));
      }
      if (name == "sum") {
        expect("(");
        std::vector<std::pair<double, ModelFunction>> parts;
        do {
          const size_t coeffAt = pos_;
          const double coeff = real();
          if (coeff < 0.0) throw ParseError(coeffAt, "nonnegative coefficient");
          expect("*");
          parts.emplace_back(coeff, parseFunc());
        } while (tryConsume(','));
        expect(")");
        return scaledSum(parts);
      }
    } catch (const InvalidInput& e) {
      throw ParseError(at, std::string("valid arguments (") + e.what() + ")");
    }
    throw ParseError(at, "function name");
  }

  // expo token; kMPN is a placeholder resolved once the whole list is known.
  static constexpr long kMPN = -1000000;
  long parseExpo() {
    skipWs();
    if (pos_ < text_.size() && text_[pos_] == 'm') {
      ++pos_;
      skipWs();
      if (tryConsume('+')) {
        expect("p");
        expect("-");
        expect("n");
        return kMPN;
      }
      expect("-");
      expect("1");
      return st_.m - 1;
    }
    return integer();
  }

  SimpleCurrent parseCurrent() {
    const size_t at = pos_;
    expect("cur");
    expect("(");
    expect("coef");
    expect("=");
    SimpleCurrent cur;
    cur.n = st_.n;
    if (peekChar('1')) {
      expect("1");
    } else {
      cur.coefficient = parseFunc();
    }
    expect(",");
    expect("ddc");
    expect("=");
    std::vector<std::pair<ModelFunction, long>> raw;
    int mpnCount = 0;
    do {
      ModelFunction f = parseFunc();
      expect("^");
      expect("(");
      const size_t expAt = pos_;
      const long e = parseExpo();
      expect(")");
      if (e == kMPN)
        ++mpnCount;
      else if (e < 0)
        throw ParseError(expAt, "nonnegative multiplicity");
      raw.emplace_back(std::move(f), e);
    } while (tryConsume('*'));
    if (tryConsume(',')) {
      expect("beta");
      expect("=");
      const size_t betaAt = pos_;
      cur.betaPower = static_cast<int>(integer());
      if (cur.betaPower < 0) throw ParseError(betaAt, "nonnegative beta power");
    }
    expect(")");
    if (mpnCount > 1) throw ParseError(at, "at most one m+p-n exponent");

    // m+p-n resolves against the bidimension of the rest of the expression:
    // p = n - (sum of the other multiplicities) - betaPower.
    long qOther = 0;
    for (const auto& [f, e] : raw)
      if (e != kMPN) qOther += e;
    for (auto& [f, e] : raw) {
      if (e == kMPN) {
        e = st_.m - qOther - cur.betaPower;
        if (e < 0) throw ParseError(at, "nonnegative resolved m+p-n exponent");
      }
      if (e > 0) cur.factors.emplace_back(std::move(f), static_cast<int>(e));
    }
    try {
      cur.validate();
    } catch (const InvalidInput& e) {
      throw ParseError(at, std::string("valid current (") + e.what() + ")");
    }
    return cur;
  }

  const std::string& text_;
  size_t pos_ = 0;
  const Setting& st_;
};

}  // namespace detail

inline ParsedSpec parseFunctionSpec(const std::string& text, const Setting& st) {
  return detail::SpecParser(text, st).parse();
}

inline ModelFunction parseFunction(const std::string& text, const Setting& st) {
  ParsedSpec s = parseFunctionSpec(text, st);
  if (auto* f = std::get_if<ModelFunction>(&s)) return *f;
  throw InvalidInput("expected a function spec, got a current");
}

inline SimpleCurrent parseCurrentSpec(const std::string& text, const Setting& st) {
  ParsedSpec s = parseFunctionSpec(text, st);
  if (auto* c = std::get_if<SimpleCurrent>(&s)) return *c;
  throw InvalidInput("expected a current spec, got a function");
}

}  // namespace mshlab

#endif
