#pragma once

// Text form of profiles, whitespace-free and recursive:
//
//   loglinear:a,b          a t + b
//   power:c,alpha          -c (-t)^alpha
//   floorcap:<p>,M         max(p, -M)
//   sum:w1*<p1>+w2*<p2>    positive combination; a nested sum goes in (...)
//   sweep:<p>,rho          relative extremal function of the ball B_rho
//   compose:<p>,k,alpha    -k (-p)^alpha
//   piecewise:<tail>@t1@<p1>@t2@<p2>...
//
// Numbers are anything strtod accepts, optionally as a ratio x/y.

#include <cstdio>
#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "plurilab/error.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/subextension.hpp"

namespace plurilab {

namespace detail {

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view text) : s_(text) {}

  Profile parse() {
    Profile p = profile();
    if (pos_ != s_.size()) error("trailing characters");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse, what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  void expect(char c) {
    if (!peek(c)) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  double number() {
    const std::string rest(s_.substr(pos_));
    char* end = nullptr;
    const double x = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) error("expected a number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    if (peek('/')) {
      ++pos_;
      const double y = number();
      if (y == 0.0) error("zero denominator");
      return x / y;
    }
    return x;
  }

  std::string keyword() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected a profile type");
    std::string k(s_.substr(start, pos_ - start));
    expect(':');
    return k;
  }

  Profile profile() {
    if (peek('(')) {
      ++pos_;
      Profile p = profile();
      expect(')');
      return p;
    }
    const std::size_t at = pos_;
    const std::string kind = keyword();
    if (kind == "loglinear") {
      const double a = number();
      expect(',');
      return log_linear(a, number());
    }
    if (kind == "power") {
      const double c = number();
      expect(',');
      return power_alpha(c, number());
    }
    if (kind == "floorcap") {
      Profile inner = profile();
      expect(',');
      return floor_cap(inner, number());
    }
    if (kind == "sweep") {
      Profile inner = profile();
      expect(',');
      return sweep(inner, number());
    }
    if (kind == "compose") {
      Profile inner = profile();
      expect(',');
      const double k = number();
      expect(',');
      return compose_h(inner, PowerH{k, number()});
    }
    if (kind == "sum") {
      std::vector<std::pair<double, Profile>> terms;
      do {
        if (!terms.empty()) ++pos_;
        const double w = number();
        expect('*');
        terms.emplace_back(w, profile());
      } while (peek('+'));
      return positive_sum(std::move(terms));
    }
    if (kind == "piecewise") {
      Profile tail = profile();
      std::vector<double> bps;
      std::vector<Profile> segs;
      while (peek('@')) {
        ++pos_;
        bps.push_back(number());
        expect('@');
        segs.push_back(profile());
      }
      return piecewise(tail, std::move(bps), std::move(segs));
    }
    pos_ = at;
    error("unknown profile type '" + kind + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline Profile parse_profile(std::string_view text) { return detail::DescriptorParser(text).parse(); }

inline std::string to_descriptor(const Profile& p) {
  using detail::num;
  return std::visit(
      detail::overloaded{
          [](const LogLinear& l) { return "loglinear:" + num(l.slope) + "," + num(l.offset); },
          [](const PowerAlpha& a) { return "power:" + num(a.scale) + "," + num(a.exponent); },
          [](const FloorCap& f) { return "floorcap:" + to_descriptor(f.inner) + "," + num(f.floor); },
          [](const PositiveSum& s) {
            std::string out = "sum:";
            for (std::size_t i = 0; i < s.terms.size(); ++i) {
              if (i) out += "+";
              std::string inner = to_descriptor(s.terms[i]);
              if (std::holds_alternative<PositiveSum>(s.terms[i].node().form)) inner = "(" + inner + ")";
              out += num(s.weights[i]) + "*" + inner;
            }
            return out;
          },
          [](const Piecewise& pw) {
            if (pw.origin) return "sweep:" + to_descriptor(pw.origin->source) + "," + num(pw.origin->rho);
            std::string out = "piecewise:" + to_descriptor(pw.tail);
            for (std::size_t i = 0; i < pw.segments.size(); ++i)
              out += "@" + num(pw.breakpoints[i]) + "@" + to_descriptor(pw.segments[i]);
            return out;
          },
          [](const Composed& c) {
            return "compose:" + to_descriptor(c.inner) + "," + num(c.h.scale) + "," + num(c.h.exponent);
          },
      },
      p.node().form);
}

}  // namespace plurilab
