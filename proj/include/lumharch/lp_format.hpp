// Copyright 2026 The lumharch Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Text bridges to external MILP solvers: CPLEX-style LP files out, and
// "name value" solution files in.

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lumharch/model.hpp"

namespace lumharch {

namespace detail {

inline constexpr std::size_t kTermsPerLine = 8;

inline void write_terms(std::ostream& os, const IlpModel& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << "0 " << model.vars.front().name;
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (i > 0 && i % kTermsPerLine == 0) os << "\n   ";
    const auto magnitude = t.coef < 0 ? -t.coef : t.coef;
    if (i == 0) {
      if (t.coef < 0) os << "- ";
    } else {
      os << (t.coef < 0 ? " - " : " + ");
    }
    if (magnitude != 1) os << magnitude << ' ';
    os << model.vars[t.var].name;
  }
}

inline std::string_view sense_token(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

}  // namespace detail

/// CPLEX LP text: Minimize / Subject To / Bounds / General / Binary / End.
/// Variables are named L_<m>_<n>_<k>, F_<m>_<n>_<k> and w_<k>; order follows
/// the model, so the output is deterministic.
inline std::string emit_lp(const IlpModel& model) {
  std::ostringstream os;
  os << "\\ light-structure ILP: mode " << to_string(model.mode) << ", connectivity "
     << (model.connectivity ? "on" : "off") << ", delta " << model.delta << "\n";
  os << "Minimize\n obj: ";
  detail::write_terms(os, model, model.objective);
  os << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    os << ' ' << c.name << ": ";
    detail::write_terms(os, model, c.terms);
    os << ' ' << detail::sense_token(c.sense) << ' ' << c.rhs << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : model.vars) os << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
  bool any_general = false;
  for (const auto& v : model.vars)
    if (v.kind == VarKind::Flow) {
      if (!any_general) os << "General\n";
      any_general = true;
      os << ' ' << v.name << '\n';
    }
  os << "Binary\n";
  for (const auto& v : model.vars)
    if (v.kind != VarKind::Flow) os << ' ' << v.name << '\n';
  os << "End\n";
  return os.str();
}

/// The content of an LP file, by variable name.
struct LpDocument {
  struct Row {
    std::string name;
    std::vector<std::pair<std::string, std::int64_t>> terms;
    Sense sense = Sense::Equal;
    std::int64_t rhs = 0;
  };

  std::vector<std::pair<std::string, std::int64_t>> objective;
  std::vector<Row> rows;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> bounds;
  std::set<std::string> general;
  std::set<std::string> binary;
};

namespace detail {

class LpReader {
 public:
  explicit LpReader(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (auto bs = line.find('\\'); bs != std::string_view::npos) line = line.substr(0, bs);
      for (auto tok : split_ws(line)) tokens_.push_back({std::string(tok), line_no});
    }
  }

  LpDocument read() {
    LpDocument doc;
    expect_keyword("minimize");
    std::string label = take().text;
    if (label != "obj:") fail("expected objective label 'obj:'");
    doc.objective = expression();
    if (!keyword("subject")) fail("expected 'Subject To'");
    ++pos_;
    if (!keyword("to")) fail("expected 'Subject To'");
    ++pos_;
    while (!at_section()) {
      LpDocument::Row row;
      std::string name = take().text;
      if (name.size() < 2 || name.back() != ':') fail("expected constraint label");
      row.name = name.substr(0, name.size() - 1);
      row.terms = expression();
      const std::string op = take().text;
      if (op == "<=") row.sense = Sense::LessEqual;
      else if (op == ">=") row.sense = Sense::GreaterEqual;
      else if (op == "=") row.sense = Sense::Equal;
      else fail("expected a relation, got '" + op + "'");
      row.rhs = integer(take().text);
      doc.rows.push_back(std::move(row));
    }
    if (keyword("bounds")) {
      ++pos_;
      while (!at_section()) {
        const auto lo = integer(take().text);
        if (take().text != "<=") fail("expected '<='");
        std::string name = take().text;
        if (take().text != "<=") fail("expected '<='");
        const auto hi = integer(take().text);
        doc.bounds[name] = {lo, hi};
      }
    }
    if (keyword("general")) {
      ++pos_;
      while (!at_section()) doc.general.insert(take().text);
    }
    if (keyword("binary")) {
      ++pos_;
      while (!at_section()) doc.binary.insert(take().text);
    }
    expect_keyword("end");
    return doc;
  }

 private:
  struct Token {
    std::string text;
    std::size_t line;
  };

  std::vector<std::pair<std::string, std::int64_t>> expression() {
    std::vector<std::pair<std::string, std::int64_t>> terms;
    bool first = true;
    while (pos_ < tokens_.size()) {
      const auto& t = tokens_[pos_].text;
      if (t == "<=" || t == ">=" || t == "=" || is_section(t) || (!first && t.back() == ':')) break;
      std::int64_t sign = 1;
      if (t == "+" || t == "-") {
        sign = t == "-" ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      std::int64_t coef = 1;
      std::string tok = take().text;
      if (auto value = parse_int(tok)) {
        coef = *value;
        tok = take().text;
      }
      terms.emplace_back(tok, sign * coef);
      first = false;
    }
    return terms;
  }

  static std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  }

  static bool is_section(const std::string& t) {
    const auto l = lower(t);
    return l == "subject" || l == "bounds" || l == "general" || l == "binary" || l == "end";
  }

  bool at_section() const { return pos_ >= tokens_.size() || is_section(tokens_[pos_].text); }

  bool keyword(std::string_view k) const { return pos_ < tokens_.size() && lower(tokens_[pos_].text) == k; }

  void expect_keyword(std::string_view k) {
    if (!keyword(k)) fail("expected '" + std::string(k) + "'");
    ++pos_;
  }

  Token take() {
    if (pos_ >= tokens_.size()) fail("unexpected end of LP text");
    return tokens_[pos_++];
  }

  std::int64_t integer(const std::string& s) {
    auto v = parse_int(s);
    if (!v) fail("expected an integer, got '" + s + "'");
    return *v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t line = pos_ < tokens_.size() ? tokens_[pos_].line : (tokens_.empty() ? 0 : tokens_.back().line);
    throw InputError("LP: " + what, line);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Reads the LP subset written by `emit_lp`.
inline LpDocument parse_lp(std::string_view text) { return detail::LpReader(text).read(); }

/// Imports "name value" lines (blank lines and '#' comments ignored).
/// Variables not mentioned are zero. Values within 1e-6 of an integer are
/// rounded; anything else, unknown names, duplicates and out-of-bounds values
/// are rejected.
inline Assignment import_solution(const IlpModel& model, std::string_view text) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < model.vars.size(); ++i) index.emplace(model.vars[i].name, i);

  Assignment a{std::vector<std::int64_t>(model.vars.size(), 0)};
  std::vector<char> seen(model.vars.size(), 0);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw InputError("expected '<name> <value>'", line_no);
    auto it = index.find(std::string(tok[0]));
    if (it == index.end()) throw InputError("unknown variable '" + std::string(tok[0]) + "'", line_no);
    if (seen[it->second]) throw InputError("variable '" + std::string(tok[0]) + "' given twice", line_no);
    seen[it->second] = 1;

    double value = 0;
    auto [ptr, ec] = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), value);
    if (ec != std::errc() || ptr != tok[1].data() + tok[1].size() || !std::isfinite(value))
      throw InputError("bad value '" + std::string(tok[1]) + "'", line_no);
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-6)
      throw InputError("non-integral value " + std::string(tok[1]) + " for '" + std::string(tok[0]) + "'", line_no);
    const auto x = static_cast<std::int64_t>(rounded);
    const auto& v = model.vars[it->second];
    if (x < v.lower || x > v.upper)
      throw InputError("value " + std::to_string(x) + " outside bounds of '" + v.name + "'", line_no);
    a.values[it->second] = x;
  }
  return a;
}

/// Writes every variable as "name value", in model order.
inline std::string format_solution(const IlpModel& model, const Assignment& a) {
  std::string out;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    out += model.vars[i].name + " " + std::to_string(a.values.at(i)) + "\n";
  return out;
}

}  // namespace lumharch
