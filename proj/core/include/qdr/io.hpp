#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdr/jets.hpp"

namespace qdr {

/// Session context for reading expressions: field count and aliases,
/// declared formal parameters, and the truncation box parsed values live in.
/// Parameter names outside `params` are a ParseError, never a new symbol.
struct Context {
  int fields = 1;
  std::vector<std::string> aliases;  // aliases[i] names field i+1
  std::vector<std::string> params;   // declared parameter names
  TruncationSpec trunc{};

  /// 1-based field index of an alias, 0 when unknown.
  int field_of(std::string_view name) const;
  bool param_declared(std::string_view name) const;
};

/// Exact text forms. Printing is canonical and deterministic: terms in the
/// TermOrder of the map, coefficients always parenthesized, e.g.
///   (1/2)*u[1,0]^2 + (1/24)*eps^2*u[1,2] + (-1/24*i)*hbar
std::string to_text(const GaussianRational& c);
std::string to_text(const QDiffPoly& p);
std::string to_text(const ScalarSum& s);

/// Grammar: sums of products of factors; factors are rational literals
/// a or a/b, the imaginary unit i, eps, hbar, declared parameter names,
/// u[field,jet], alias[jet] and bare aliases (jet 0), all with optional
/// integer powers ^k, plus parenthesized subexpressions and unary signs.
QDiffPoly parse_qdp(std::string_view text, const Context& ctx);
ScalarSum parse_scalar_sum(std::string_view text, const Context& ctx);

/// Structured serialization, mirroring the term map exactly. The truncation
/// travels with the terms so a truncated series is never misread as exact.
nlohmann::ordered_json qdp_to_json(const QDiffPoly& p);
QDiffPoly qdp_from_json(const nlohmann::ordered_json& j);

}  // namespace qdr
