#pragma once

#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "asyncsys/literal.hpp"
#include "asyncsys/system.hpp"

namespace asyncsys {

namespace detail {

struct Line {
  int number;
  std::string_view text;  // comment stripped
};

inline std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!tokenize(line).empty()) out.push_back({number, line});
    pos = end + 1;
  }
  return out;
}

inline int int_field(const Token& tok, std::string_view key, int line) {
  const std::string prefix = std::string(key) + "=";
  if (tok.text.substr(0, prefix.size()) != prefix) throw ParseError("expected " + prefix + "<int>", line, tok.column);
  const std::string value(tok.text.substr(prefix.size()));
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty())
    throw ParseError("bad integer '" + value + "'", line, tok.column + static_cast<int>(prefix.size()));
  if (v < 1 || v > Bits::kMaxWidth)
    throw ParseError("width out of range", line, tok.column + static_cast<int>(prefix.size()));
  return v;
}

/// Column where the text after `key` starts.
inline int after(const Token& tok, std::string_view key) { return tok.column + static_cast<int>(key.size()); }

inline std::string_view rest_of(std::string_view line, const Token& tok) {
  return line.substr(static_cast<std::size_t>(tok.column - 1));
}

}  // namespace detail

/// Parses the system file format:
///
///   system m=<int> n=<int>
///   input: <signal literal>
///   state: <signal literal>      (one or more per input)
///
/// `#` starts a comment. Errors carry line:column.
inline SystemTable parse_system_text(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty system file", 1, 1);
  auto head = tokenize(lines[0].text);
  if (head[0].text != "system") throw ParseError("expected 'system' header", lines[0].number, head[0].column);
  if (head.size() != 3) throw ParseError("header is 'system m=<int> n=<int>'", lines[0].number, head.back().column);
  const int m = detail::int_field(head[1], "m", lines[0].number);
  const int n = detail::int_field(head[2], "n", lines[0].number);

  struct Block {
    Signal u;
    int line;
    std::vector<Signal> states;
  };
  std::vector<Block> blocks;
  std::map<Signal, int> input_lines;
  auto close = [&] {
    if (!blocks.empty() && blocks.back().states.empty())
      throw ParseError("input has no state lines (empty state block)", blocks.back().line, 1);
  };
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, line] = lines[k];
    auto toks = tokenize(line);
    const Token& key = toks[0];
    if (key.text != "input:" && key.text != "state:")
      throw ParseError("expected 'input:' or 'state:', got '" + std::string(key.text) + "'", number, key.column);
    if (toks.size() < 2) throw ParseError("missing signal literal", number, detail::after(key, key.text) + 1);
    const Signal s = parse_signal(detail::rest_of(line, toks[1]), number, toks[1].column);
    const int width = key.text == "input:" ? m : n;
    if (s.width() != width)
      throw ParseError(std::string(key.text == "input:" ? "input" : "state") + " width " + std::to_string(s.width()) +
                           " does not match " + (key.text == "input:" ? "m=" : "n=") + std::to_string(width),
                       number, toks[1].column);
    if (key.text == "input:") {
      close();
      if (auto it = input_lines.find(s); it != input_lines.end())
        throw ParseError("duplicate input, first given on line " + std::to_string(it->second) + " and again on line " +
                             std::to_string(number),
                         number, toks[1].column);
      input_lines[s] = number;
      blocks.push_back({s, number, {}});
    } else {
      if (blocks.empty()) throw ParseError("state line before any input line", number, key.column);
      blocks.back().states.push_back(s);
    }
  }
  close();
  if (blocks.empty()) throw ParseError("system has no inputs", lines[0].number, 1);
  std::vector<std::pair<Signal, std::vector<Signal>>> rows;
  for (auto& b : blocks) rows.emplace_back(std::move(b.u), std::move(b.states));
  return SystemTable::make(m, n, std::move(rows));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses a system file; diagnostics are prefixed with the path.
inline SystemTable parse_system_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_system_text(text);
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

/// Truth-table file for F:
///
///   fn in=<m> out=<n>
///   <input bits> <output bits>   (one line per input vector, each exactly once)
inline BoolFn parse_truth_table(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty truth table", 1, 1);
  auto head = tokenize(lines[0].text);
  if (head[0].text != "fn" || head.size() != 3)
    throw ParseError("expected 'fn in=<int> out=<int>' header", lines[0].number, head[0].column);
  const int m = detail::int_field(head[1], "in", lines[0].number);
  const int n = detail::int_field(head[2], "out", lines[0].number);
  if (m > 16) throw ParseError("truth table input width above 16", lines[0].number, head[1].column);
  std::vector<std::optional<Bits>> rows(std::size_t{1} << m);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto toks = tokenize(lines[k].text);
    if (toks.size() != 2) throw ParseError("expected '<input bits> <output bits>'", lines[k].number, toks[0].column);
    auto in = Bits::parse(toks[0].text);
    auto out = Bits::parse(toks[1].text);
    if (!in || in->width() != m) throw ParseError("bad input row, expected " + std::to_string(m) + " bits", lines[k].number, toks[0].column);
    if (!out || out->width() != n) throw ParseError("bad output, expected " + std::to_string(n) + " bits", lines[k].number, toks[1].column);
    auto& slot = rows[in->index()];
    if (slot) throw ParseError("row " + std::string(toks[0].text) + " given twice", lines[k].number, toks[0].column);
    slot = *out;
  }
  std::vector<Bits> table;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k]) throw ParseError("missing row " + Bits::from_index(m, k).str(), lines.back().number, 1);
    table.push_back(*rows[k]);
  }
  return BoolFn(m, n, std::move(table));
}

inline std::string to_truth_table_text(const BoolFn& F) {
  std::string s = "fn in=" + std::to_string(F.in_width()) + " out=" + std::to_string(F.out_width()) + "\n";
  for (std::size_t k = 0; k < F.table().size(); ++k)
    s += Bits::from_index(F.in_width(), k).str() + " " + F.table()[k].str() + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// VCD

struct Waveform {
  std::string name;
  Signal signal;
};

/// Default dump horizon: one time unit past the last finite event or tail
/// anchor, extended by two periods for tails.
inline Time default_horizon(const std::vector<Waveform>& waves) {
  Time h{0};
  for (const auto& w : waves) {
    const auto& ev = w.signal.events();
    if (ev.empty()) continue;
    Time end = ev.back().at + Time(1);
    if (w.signal.has_tail()) end = end + w.signal.period() + w.signal.period();
    h = std::max(h, end);
  }
  return h == Time{0} ? Time(1) : h;
}

/// VCD dump of the given signals on [0, horizon]. Rational times map to integer
/// ticks through the LCM of all denominators; the factor is written in the
/// header comment. Vector values list coordinate 1 first (most significant).
inline std::string write_vcd(const std::vector<Waveform>& waves, std::optional<Time> horizon = std::nullopt) {
  if (waves.empty()) throw Error("nothing to dump");
  const Time h = horizon ? *horizon : default_horizon(waves);
  std::vector<std::vector<Event>> events;
  std::int64_t lcm = h.den();
  for (const auto& w : waves) {
    events.push_back(w.signal.unroll(h, true));
    for (const auto& e : events.back()) lcm = std::lcm(lcm, e.at.den());
  }
  auto tick = [&](const Time& t) { return (t * Time(lcm)).num(); };
  auto id = [](std::size_t k) {
    std::string s;
    do {
      s += static_cast<char>('!' + k % 94);
      k /= 94;
    } while (k);
    return s;
  };
  auto value = [&](std::size_t k, const Bits& b) {
    return waves[k].signal.width() == 1 ? b.str() + id(k) : "b" + b.str() + " " + id(k);
  };

  std::ostringstream o;
  o << "$comment\n  1 tick = 1/" << lcm << " time unit (LCM of all time denominators)\n$end\n";
  o << "$timescale 1 ns $end\n";
  o << "$scope module asyncsys $end\n";
  for (std::size_t k = 0; k < waves.size(); ++k)
    o << "$var wire " << waves[k].signal.width() << " " << id(k) << " " << waves[k].name << " $end\n";
  o << "$upscope $end\n$enddefinitions $end\n";
  o << "#0\n$dumpvars\n";
  std::map<Time, std::vector<std::string>> changes;
  for (std::size_t k = 0; k < waves.size(); ++k) {
    Bits v = waves[k].signal.initial();
    for (const auto& e : events[k]) {
      if (!(Time{0} < e.at)) v = e.value;  // dumped as the initial value
      else changes[e.at].push_back(value(k, e.value));
    }
    o << value(k, v) << "\n";
  }
  o << "$end\n";
  for (const auto& [t, vs] : changes) {
    o << "#" << tick(t) << "\n";
    for (const auto& v : vs) o << v << "\n";
  }
  if (changes.empty() || changes.rbegin()->first < h) o << "#" << tick(h) << "\n";
  return o.str();
}

}  // namespace asyncsys
