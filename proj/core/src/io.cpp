#include "qdr/io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qdr/errors.hpp"

namespace qdr {

int Context::field_of(std::string_view name) const {
  for (std::size_t i = 0; i < aliases.size(); ++i)
    if (aliases[i] == name) return static_cast<int>(i) + 1;
  return 0;
}

bool Context::param_declared(std::string_view name) const {
  return std::find(params.begin(), params.end(), name) != params.end();
}

namespace {

std::string rational_text(const Rational& r) { return r.get_str(); }

void append_power(std::string& out, const std::string& base, int exp) {
  out += '*';
  out += base;
  if (exp != 1) {
    out += '^';
    out += std::to_string(exp);
  }
}

std::string term_text(const TermKey& k, const GaussianRational& c) {
  std::string out = "(" + to_text(c) + ")";
  if (k.eps > 0) append_power(out, "eps", k.eps);
  if (k.hbar > 0) append_power(out, "hbar", k.hbar);

  std::vector<std::pair<std::string, int>> params;
  for (const auto& [id, e] : k.params.factors()) params.emplace_back(param_name(id), e);
  std::sort(params.begin(), params.end());
  for (const auto& [name, e] : params) append_power(out, name, e);

  const auto& factors = k.mono.factors();
  for (std::size_t i = 0; i < factors.size();) {
    std::size_t j = i;
    while (j < factors.size() && factors[j] == factors[i]) ++j;
    append_power(out,
                 "u[" + std::to_string(factors[i].field) + "," + std::to_string(factors[i].jet) +
                     "]",
                 static_cast<int>(j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string to_text(const GaussianRational& c) {
  if (c.is_zero()) return "0";
  if (sgn(c.im) == 0) return rational_text(c.re);
  std::string imag;
  if (c.im == Rational(1))
    imag = "i";
  else if (c.im == Rational(-1))
    imag = "-i";
  else
    imag = rational_text(c.im) + "*i";
  if (sgn(c.re) == 0) return imag;
  if (sgn(c.im) > 0) return rational_text(c.re) + "+" + imag;
  return rational_text(c.re) + imag;  // imag already carries the minus sign
}

std::string to_text(const QDiffPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += term_text(k, c);
  }
  return out;
}

std::string to_text(const ScalarSum& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    out += term_text(TermKey{0, 0, {}, m}, c);
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Context& ctx) : text_(text), ctx_(ctx) {}

  QDiffPoly parse() {
    QDiffPoly r = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in expression");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  QDiffPoly make_zero() const { return QDiffPoly::zero(ctx_.fields, ctx_.trunc); }

  QDiffPoly parse_expr() {
    QDiffPoly acc = make_zero();
    bool negative = eat('-');
    if (!negative) eat('+');
    for (;;) {
      QDiffPoly t = parse_product();
      if (negative) t *= GaussianRational(-1);
      acc += t;
      if (eat('+'))
        negative = false;
      else if (eat('-'))
        negative = true;
      else
        break;
    }
    return acc;
  }

  QDiffPoly parse_product() {
    QDiffPoly acc = parse_factor();
    while (eat('*')) acc = acc * parse_factor();
    return acc;
  }

  QDiffPoly parse_factor() {
    QDiffPoly base = parse_primary();
    if (eat('^')) {
      const long e = parse_nat();
      QDiffPoly r = QDiffPoly::constant(GaussianRational(1), ctx_.fields, ctx_.trunc);
      for (long i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  QDiffPoly parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      QDiffPoly inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      QDiffPoly inner = parse_primary();
      inner *= GaussianRational(-1);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_rational();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_symbol();
    fail(std::string("unexpected character '") + c + "'");
  }

  long parse_nat() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected a number");
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000000L) fail("number too large");
      ++pos_;
    }
    return v;
  }

  QDiffPoly parse_rational() {
    const long num = parse_nat();
    Rational r(num);
    if (eat('/')) {
      const long den = parse_nat();
      if (den == 0) fail("zero denominator");
      r = rat(num, den);
    }
    return QDiffPoly::constant(GaussianRational(std::move(r)), ctx_.fields, ctx_.trunc);
  }

  QDiffPoly parse_symbol() {
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      name += text_[pos_++];

    if (name == "i")
      return QDiffPoly::constant(GaussianRational::i(), ctx_.fields, ctx_.trunc);

    if (name == "eps" || name == "hbar") {
      QDiffPoly p = make_zero();
      TermKey key;
      (name == "eps" ? key.eps : key.hbar) = 1;
      p.add_term(std::move(key), GaussianRational(1));
      if (p.is_zero()) return p;  // outside the truncation box
      return p;
    }

    if (peek() == '[') {
      eat('[');
      const long a = parse_nat();
      int field, jet;
      if (eat(',')) {
        const long b = parse_nat();
        if (name != "u") fail("indexed form name[field,jet] is reserved for u");
        field = static_cast<int>(a);
        jet = static_cast<int>(b);
      } else {
        field = ctx_.field_of(name);
        if (field == 0) fail("unknown field alias '" + name + "'");
        jet = static_cast<int>(a);
      }
      if (!eat(']')) fail("expected ']'");
      if (field < 1 || field > ctx_.fields) fail("field index out of range");
      return QDiffPoly::jet({field, jet}, ctx_.fields, ctx_.trunc);
    }

    if (int field = ctx_.field_of(name); field != 0)
      return QDiffPoly::jet({field, 0}, ctx_.fields, ctx_.trunc);

    if (ctx_.param_declared(name)) {
      QDiffPoly p = make_zero();
      TermKey key;
      key.params = ParamMonomial::var(intern_param(name));
      p.add_term(std::move(key), GaussianRational(1));
      return p;
    }
    fail("unknown symbol '" + name + "' (undeclared parameter?)");
  }

  std::string_view text_;
  const Context& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

QDiffPoly parse_qdp(std::string_view text, const Context& ctx) {
  return Parser(text, ctx).parse();
}

ScalarSum parse_scalar_sum(std::string_view text, const Context& ctx) {
  QDiffPoly p = parse_qdp(text, ctx);
  ScalarSum s;
  for (const auto& [k, c] : p.terms()) {
    if (!k.mono.is_one() || k.eps != 0 || k.hbar != 0)
      throw ParseError("expression is not a pure scalar");
    s += ScalarSum(Scalar{c, k.params});
  }
  return s;
}

nlohmann::ordered_json qdp_to_json(const QDiffPoly& p) {
  nlohmann::ordered_json j;
  j["fields"] = p.fields();
  nlohmann::ordered_json t;
  t["eps"] = p.trunc().eps_max;
  t["hbar"] = p.trunc().hbar_max;
  t["udeg"] = p.trunc().u_max ? nlohmann::ordered_json(*p.trunc().u_max)
                              : nlohmann::ordered_json(nullptr);
  j["truncation"] = std::move(t);
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [k, c] : p.terms()) {
    nlohmann::ordered_json term;
    term["eps"] = k.eps;
    term["hbar"] = k.hbar;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, int>> named;
    for (const auto& [id, e] : k.params.factors()) named.emplace_back(param_name(id), e);
    std::sort(named.begin(), named.end());
    for (const auto& [name, e] : named) params[name] = e;
    term["params"] = std::move(params);
    nlohmann::ordered_json mono = nlohmann::ordered_json::array();
    for (const JetVar& v : k.mono.factors()) mono.push_back({v.field, v.jet});
    term["monomial"] = std::move(mono);
    term["coeff"] = {{"re", rational_text(c.re)}, {"im", rational_text(c.im)}};
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

namespace {

Rational rational_from_text(const std::string& s) {
  try {
    Rational r(s);
    r.canonicalize();
    return r;
  } catch (const std::exception&) {
    throw ParseError("bad rational literal '" + s + "'");
  }
}

}  // namespace

QDiffPoly qdp_from_json(const nlohmann::ordered_json& j) {
  try {
    TruncationSpec t;
    t.eps_max = j.at("truncation").at("eps").get<int>();
    t.hbar_max = j.at("truncation").at("hbar").get<int>();
    const auto& u = j.at("truncation").at("udeg");
    if (!u.is_null()) t.u_max = u.get<int>();
    QDiffPoly p(j.at("fields").get<int>(), t);
    for (const auto& term : j.at("terms")) {
      TermKey key;
      key.eps = term.at("eps").get<int>();
      key.hbar = term.at("hbar").get<int>();
      for (const auto& [name, e] : term.at("params").items())
        key.params.multiply(intern_param(name), e.get<int>());
      JetMonomial mono;
      for (const auto& v : term.at("monomial"))
        mono = mono.times(JetVar{v.at(0).get<int>(), v.at(1).get<int>()});
      key.mono = std::move(mono);
      GaussianRational c{rational_from_text(term.at("coeff").at("re").get<std::string>()),
                         rational_from_text(term.at("coeff").at("im").get<std::string>())};
      p.add_term(std::move(key), std::move(c));
    }
    return p;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ParseError(std::string("malformed structured input: ") + e.what());
  }
}

}  // namespace qdr
