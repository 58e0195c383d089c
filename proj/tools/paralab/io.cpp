#include "paralab/io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "paralab/errors.hpp"

namespace paralab::io {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

Complex parse_complex(const std::string& text) {
  std::string s = trim(text);
  static const std::regex pair(R"(^([^,]+),([^,]+)$)");
  static const std::regex cart(R"(^([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)([+-][0-9.]*(?:[eE][+-]?[0-9]+)?)[ij]$)");
  static const std::regex imag(R"(^([+-]?[0-9.]*(?:[eE][+-]?[0-9]+)?)[ij]$)");
  static const std::regex real(R"(^[+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?$)");
  std::smatch m;
  auto coef = [](std::string c) {
    if (c.empty() || c == "+") return Real(1);
    if (c == "-") return Real(-1);
    return Real(c);
  };
  if (std::regex_match(s, m, pair)) return Complex(Real(trim(m[1].str())), Real(trim(m[2].str())));
  if (std::regex_match(s, m, cart)) return Complex(Real(m[1].str()), coef(m[2].str()));
  if (std::regex_match(s, m, imag)) return Complex(Real(0), coef(m[1].str()));
  if (std::regex_match(s, real)) return Complex(Real(s));
  throw DomainError("cannot parse complex number '" + text + "'");
}

std::vector<Complex> parse_points(const std::string& s) {
  std::vector<Complex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!trim(item).empty()) out.push_back(parse_complex(item));
  if (out.empty()) throw DomainError("no points given");
  return out;
}

std::pair<double, double> parse_range(const std::string& s) {
  auto c = s.find(':');
  if (c == std::string::npos) throw DomainError("range must be lo:hi, got '" + s + "'");
  double lo = std::stod(s.substr(0, c)), hi = std::stod(s.substr(c + 1));
  if (!(lo > 0 && hi > lo)) throw DomainError("range needs 0 < lo < hi, got '" + s + "'");
  return {lo, hi};
}

Rhs parse_rhs(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw DomainError("empty right-hand side");
  // Split into signed terms.
  std::vector<std::string> terms;
  size_t start = 0;
  for (size_t i = 1; i <= s.size(); ++i) {
    bool split = i == s.size() || ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E' && s[i - 1] != '^');
    if (split) {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  static const std::regex term(R"(^([+-]?)(.*?)\*?(?:z(?:\^([0-9]+))?)$)");
  std::vector<ScalarSpec> c;
  for (const auto& t : terms) {
    std::smatch m;
    int k = 0;
    std::string coef;
    if (t.find('z') != std::string::npos) {
      if (!std::regex_match(t, m, term)) throw DomainError("cannot parse term '" + t + "'");
      k = m[3].matched ? std::stoi(m[3].str()) : 1;
      coef = m[1].str() + (m[2].str().empty() ? "1" : m[2].str());
    } else {
      coef = t;
    }
    if (c.size() <= static_cast<size_t>(k)) c.resize(static_cast<size_t>(k + 1), ScalarSpec::parse("0"));
    if (!(c[static_cast<size_t>(k)].value() == Complex()))
      throw DomainError("repeated power z^" + std::to_string(k) + " in right-hand side");
    c[static_cast<size_t>(k)] = ScalarSpec::parse(coef);
  }
  return Rhs(c);
}

PetalKind parse_side(const std::string& s) {
  if (s == "+" || s == "attracting" || s == "plus") return PetalKind::attracting;
  if (s == "-" || s == "repelling" || s == "minus") return PetalKind::repelling;
  throw DomainError("side must be + or -, got '" + s + "'");
}

std::string num(const Real& x) { return to_string(x, current_digits()); }

json to_json(const Complex& z) { return json{{"re", num(z.re)}, {"im", num(z.im)}}; }

json to_json(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

void csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    if (i) os << ',';
    if (f.find_first_of(",\"\n") != std::string::npos) {
      os << '"';
      for (char ch : f) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    } else {
      os << f;
    }
  }
  os << '\n';
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace paralab::io
