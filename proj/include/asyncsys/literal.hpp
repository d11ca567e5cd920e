#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asyncsys/signal.hpp"

namespace asyncsys {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line, int first_column = 1) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), first_column + static_cast<int>(i)});
    i = j;
  }
  return out;
}

/// `sig <width> init=<bits> [@<t>=<bits> ...] [period=<p> [at=<t>] @<off>=<bits> ...]`
///
/// The periodic part repeats its entries at anchor + k*period + offset, k >= 0.
/// Without `at=` the anchor is the last finite event time, or 0 when there is none.
inline Signal parse_signal(std::string_view text, int line = 1, int first_column = 1) {
  auto toks = tokenize(text, first_column);
  auto fail = [&](const std::string& msg, int col) -> ParseError { return ParseError(msg, line, col); };
  if (toks.empty() || toks[0].text != "sig") throw fail("expected 'sig'", toks.empty() ? first_column : toks[0].column);
  if (toks.size() < 3) throw fail("signal literal needs a width and init=", toks.back().column);

  int width = 0;
  try {
    width = std::stoi(std::string(toks[1].text));
  } catch (const std::exception&) {
    throw fail("bad width '" + std::string(toks[1].text) + "'", toks[1].column);
  }
  if (width < 1 || width > Bits::kMaxWidth) throw fail("width out of range", toks[1].column);

  auto bits_of = [&](std::string_view s, int col) {
    auto b = Bits::parse(s);
    if (!b) throw fail("bad bit string '" + std::string(s) + "'", col);
    if (b->width() != width)
      throw fail("bit string '" + std::string(s) + "' has width " + std::to_string(b->width()) + ", expected " +
                     std::to_string(width),
                 col);
    return *b;
  };
  auto time_of = [&](std::string_view s, int col) {
    auto t = Time::parse(s);
    if (!t) throw fail("bad time '" + std::string(s) + "'", col);
    return *t;
  };

  if (toks[2].text.substr(0, 5) != "init=") throw fail("expected init=<bits>", toks[2].column);
  Bits init = bits_of(toks[2].text.substr(5), toks[2].column + 5);

  std::vector<Event> events;
  std::optional<RawTail> tail;
  for (std::size_t k = 3; k < toks.size(); ++k) {
    auto tok = toks[k].text;
    int col = toks[k].column;
    if (tok == "{" || tok == "}") continue;
    if (tok.substr(0, 7) == "period=") {
      if (tail) throw fail("second period=", col);
      tail = RawTail{time_of(tok.substr(7), col + 7), {}, std::nullopt};
      continue;
    }
    if (tok.substr(0, 3) == "at=") {
      if (!tail || !tail->pattern.empty()) throw fail("at= must follow period=", col);
      tail->anchor = time_of(tok.substr(3), col + 3);
      continue;
    }
    if (tok.empty() || tok[0] != '@') throw fail("unexpected token '" + std::string(tok) + "'", col);
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw fail("expected @<t>=<bits>", col);
    Event e{time_of(tok.substr(1, eq - 1), col + 1), bits_of(tok.substr(eq + 1), col + static_cast<int>(eq) + 1)};
    (tail ? tail->pattern : events).push_back(e);
  }
  if (tail && tail->pattern.empty()) throw fail("period= without entries", toks.back().column);
  try {
    return Signal::make(init, std::move(events), std::move(tail));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw fail(e.what(), first_column);
  }
}

inline std::string to_literal(const Signal& x) {
  std::string s = "sig " + std::to_string(x.width()) + " init=" + x.initial().str();
  for (const auto& e : x.prefix()) s += " @" + e.at.str() + "=" + e.value.str();
  if (x.has_tail()) {
    auto c = x.cycle();
    const Time anchor = c.front().at;
    s += " period=" + x.period().str();
    if (!x.prefix().empty() || anchor != Time{0}) s += " at=" + anchor.str();
    for (const auto& e : c) s += " @" + (e.at - anchor).str() + "=" + e.value.str();
  }
  return s;
}

}  // namespace asyncsys
