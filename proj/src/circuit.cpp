#include "fopa/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <system_error>
#include <type_traits>

#include <fmt/format.h>

namespace fopa {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_identifier(std::string_view token) {
  if (token.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(token.front())) return false;
  return std::all_of(token.begin() + 1, token.end(), [&](char c) { return alpha(c) || digit(c); });
}

std::optional<double> parse_number(std::string_view token) {
  if (token.empty()) return std::nullopt;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;  // from_chars rejects a leading plus
  double value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (pos < line.size()) {
    while (pos < line.size() && space(line[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !space(line[pos])) ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

struct Statement {
  std::size_t line;
  std::string_view keyword;
  std::vector<std::string_view> positional;
  std::vector<std::pair<std::string_view, std::string_view>> keyed;
};

struct KeywordSpec {
  std::size_t min_positional;
  std::size_t max_positional;
  std::vector<std::string_view> keys;
};

const std::map<std::string_view, KeywordSpec>& keyword_specs() {
  static const std::map<std::string_view, KeywordSpec> specs{
      {"mode", {1, 1, {}}},
      {"displace", {1, 1, {"re", "im"}}},
      {"thermal", {1, 1, {"nbar"}}},
      {"tms", {2, 2, {"g", "theta_p"}}},
      {"bs", {2, 2, {"t"}}},
      {"phase", {1, 1, {"theta"}}},
      {"loss", {1, 1, {"eta"}}},
      {"block", {1, 1, {}}},
      {"measure", {1, 2, {"theta"}}},
  };
  return specs;
}

class Parser {
 public:
  ParseResult run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line_no;
      handle_line(line_no, text.substr(pos, end - pos));
      if (end == text.size()) break;
      pos = end + 1;
    }

    auto semantic = validate(circuit_);
    diagnostics_.insert(diagnostics_.end(), semantic.begin(), semantic.end());
    std::stable_sort(diagnostics_.begin(), diagnostics_.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });

    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (!has_errors(result.diagnostics)) result.circuit = std::move(circuit_);
    return result;
  }

 private:
  void error(std::size_t line, std::string message) {
    diagnostics_.push_back({line, Severity::error, std::move(message)});
  }

  void handle_line(std::size_t line_no, std::string_view raw) {
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto tokens = split_tokens(raw);
    if (tokens.empty()) return;

    Statement st{line_no, tokens.front(), {}, {}};
    const auto& specs = keyword_specs();
    const auto spec_it = specs.find(st.keyword);
    if (spec_it == specs.end()) {
      error(line_no, fmt::format("unknown keyword '{}'", st.keyword));
      return;
    }
    const KeywordSpec& spec = spec_it->second;

    bool ok = true;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto tok = tokens[k];
      if (const auto eq = tok.find('='); eq != std::string_view::npos) {
        st.keyed.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
      } else {
        st.positional.push_back(tok);
      }
    }
    if (st.positional.size() < spec.min_positional || st.positional.size() > spec.max_positional) {
      error(line_no, spec.min_positional == spec.max_positional
                         ? fmt::format("'{}' expects {} mode argument(s), got {}", st.keyword,
                                       spec.min_positional, st.positional.size())
                         : fmt::format("'{}' expects {} to {} positional arguments, got {}", st.keyword,
                                       spec.min_positional, spec.max_positional, st.positional.size()));
      ok = false;
    }
    for (const auto tok : st.positional) {
      if (!is_identifier(tok)) {
        error(line_no, fmt::format("invalid identifier '{}'", tok));
        ok = false;
      }
    }

    std::map<std::string_view, double> values;
    for (const auto& [key, text] : st.keyed) {
      if (std::find(spec.keys.begin(), spec.keys.end(), key) == spec.keys.end()) {
        error(line_no, fmt::format("unexpected parameter '{}' for '{}'", key, st.keyword));
        ok = false;
        continue;
      }
      if (values.count(key) != 0) {
        error(line_no, fmt::format("duplicate parameter '{}'", key));
        ok = false;
        continue;
      }
      const auto value = parse_number(text);
      if (!value) {
        error(line_no, fmt::format("bad number '{}' for parameter '{}'", text, key));
        ok = false;
        continue;
      }
      values[key] = *value;
    }
    for (const auto key : spec.keys) {
      if (values.count(key) == 0 && std::none_of(st.keyed.begin(), st.keyed.end(),
                                                 [&](const auto& kv) { return kv.first == key; })) {
        error(line_no, fmt::format("missing parameter '{}' for '{}'", key, st.keyword));
        ok = false;
      }
    }
    if (!ok) return;

    if (st.keyword == "mode") {
      const ModeId id{st.positional[0]};
      if (declared_.count(id.label) != 0) {
        error(line_no, fmt::format("mode '{}' declared twice", id.label));
        return;
      }
      declared_.insert(id.label);
      circuit_.modes.push_back(id);
      return;
    }

    // Every referenced mode must already be declared.
    const std::size_t mode_args = st.keyword == "measure" ? 1 : st.positional.size();
    for (std::size_t k = 0; k < mode_args; ++k) {
      if (declared_.count(std::string(st.positional[k])) == 0) {
        error(line_no, fmt::format("undeclared mode '{}'", st.positional[k]));
        ok = false;
      }
    }
    if (!ok) return;

    const auto p = [&](std::size_t k) { return ModeId{st.positional[k]}; };
    const auto& kw = st.keyword;
    if (kw == "displace") {
      circuit_.elements.push_back(Displace{p(0), values["re"], values["im"], line_no});
    } else if (kw == "thermal") {
      circuit_.elements.push_back(Thermal{p(0), values["nbar"], line_no});
    } else if (kw == "tms") {
      circuit_.elements.push_back(Tms{p(0), p(1), values["g"], values["theta_p"], line_no});
    } else if (kw == "bs") {
      circuit_.elements.push_back(Bs{p(0), p(1), values["t"], line_no});
    } else if (kw == "phase") {
      circuit_.elements.push_back(Phase{p(0), values["theta"], line_no});
    } else if (kw == "loss") {
      circuit_.elements.push_back(Loss{p(0), values["eta"], line_no});
    } else if (kw == "block") {
      circuit_.elements.push_back(Block{p(0), line_no});
    } else if (kw == "measure") {
      std::string label = st.positional.size() > 1 ? std::string(st.positional[1]) : p(0).label;
      circuit_.elements.push_back(Measure{p(0), values["theta"], std::move(label), line_no});
    }
  }

  Circuit circuit_;
  std::set<std::string, std::less<>> declared_;
  std::vector<Diagnostic> diagnostics_;
};

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::size_t source_line(const CircuitElement& element) {
  return std::visit([](const auto& e) { return e.line; }, element);
}

std::vector<ModeId> referenced_modes(const CircuitElement& element) {
  return std::visit(overloaded{
                        [](const Tms& e) { return std::vector<ModeId>{e.signal, e.idler}; },
                        [](const Bs& e) { return std::vector<ModeId>{e.a, e.b}; },
                        [](const auto& e) { return std::vector<ModeId>{e.mode}; },
                    },
                    element);
}

std::vector<Measure> Circuit::measurements() const {
  std::vector<Measure> out;
  for (const auto& e : elements) {
    if (const auto* m = std::get_if<Measure>(&e)) out.push_back(*m);
  }
  return out;
}

bool structurally_equal(const Circuit& a, const Circuit& b, double rel_tol) {
  if (a.modes != b.modes || a.elements.size() != b.elements.size()) return false;
  const auto eq = [rel_tol](double x, double y) { return close(x, y, rel_tol); };
  for (std::size_t k = 0; k < a.elements.size(); ++k) {
    const auto& ea = a.elements[k];
    const auto& eb = b.elements[k];
    if (ea.index() != eb.index()) return false;
    const bool same = std::visit(
        overloaded{
            [&](const Displace& x) {
              const auto& y = std::get<Displace>(eb);
              return x.mode == y.mode && eq(x.re, y.re) && eq(x.im, y.im);
            },
            [&](const Thermal& x) {
              const auto& y = std::get<Thermal>(eb);
              return x.mode == y.mode && eq(x.nbar, y.nbar);
            },
            [&](const Tms& x) {
              const auto& y = std::get<Tms>(eb);
              return x.signal == y.signal && x.idler == y.idler && eq(x.g, y.g) && eq(x.theta_p, y.theta_p);
            },
            [&](const Bs& x) {
              const auto& y = std::get<Bs>(eb);
              return x.a == y.a && x.b == y.b && eq(x.t, y.t);
            },
            [&](const Phase& x) {
              const auto& y = std::get<Phase>(eb);
              return x.mode == y.mode && eq(x.theta, y.theta);
            },
            [&](const Loss& x) {
              const auto& y = std::get<Loss>(eb);
              return x.mode == y.mode && eq(x.eta, y.eta);
            },
            [&](const Block& x) { return x.mode == std::get<Block>(eb).mode; },
            [&](const Measure& x) {
              const auto& y = std::get<Measure>(eb);
              return x.mode == y.mode && x.label == y.label && eq(x.theta, y.theta);
            },
        },
        ea);
    if (!same) return false;
  }
  return true;
}

std::string to_string(const Diagnostic& d) {
  const char* sev = d.severity == Severity::error ? "error" : "warning";
  if (d.line == 0) return fmt::format("{}: {}", sev, d.message);
  return fmt::format("line {}: {}: {}", d.line, sev, d.message);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

ParseResult parse_circuit(std::string_view text) { return Parser{}.run(text); }

std::vector<Diagnostic> validate(const Circuit& circuit) {
  std::vector<Diagnostic> out;
  const auto err = [&](std::size_t line, std::string msg) { out.push_back({line, Severity::error, std::move(msg)}); };

  if (circuit.modes.empty()) err(0, "circuit declares no modes");

  std::set<std::string> declared;
  for (const auto& m : circuit.modes) {
    if (!is_identifier(m.label)) err(0, fmt::format("invalid mode label '{}'", m.label));
    if (!declared.insert(m.label).second) err(0, fmt::format("mode '{}' declared twice", m.label));
  }

  std::set<std::string> used;
  std::set<std::string> labels;
  bool measured = false;
  for (const auto& element : circuit.elements) {
    const std::size_t line = source_line(element);
    for (const auto& m : referenced_modes(element)) {
      used.insert(m.label);
      if (declared.count(m.label) == 0) err(line, fmt::format("undeclared mode '{}'", m.label));
    }
    const auto finite = [&](double v, std::string_view name) {
      if (!std::isfinite(v)) err(line, fmt::format("parameter '{}' must be finite", name));
    };
    std::visit(overloaded{
                   [&](const Displace& e) {
                     finite(e.re, "re");
                     finite(e.im, "im");
                   },
                   [&](const Thermal& e) {
                     if (!(e.nbar >= 0) || !std::isfinite(e.nbar))
                       err(line, fmt::format("nbar={} out of range (must be >= 0)", format_number(e.nbar)));
                   },
                   [&](const Tms& e) {
                     if (e.signal == e.idler) err(line, "signal and idler must differ");
                     if (!(e.g >= 0) || !std::isfinite(e.g))
                       err(line, fmt::format("g={} out of range (must be >= 0)", format_number(e.g)));
                     finite(e.theta_p, "theta_p");
                   },
                   [&](const Bs& e) {
                     if (e.a == e.b) err(line, "beam splitter ports must differ");
                     if (!(e.t >= 0 && e.t <= 1))
                       err(line, fmt::format("t={} out of range [0, 1]", format_number(e.t)));
                   },
                   [&](const Phase& e) { finite(e.theta, "theta"); },
                   [&](const Loss& e) {
                     if (!(e.eta >= 0 && e.eta <= 1))
                       err(line, fmt::format("eta={} out of range [0, 1]", format_number(e.eta)));
                   },
                   [&](const Block&) {},
                   [&](const Measure& e) {
                     measured = true;
                     finite(e.theta, "theta");
                     if (!is_identifier(e.label)) err(line, fmt::format("invalid measurement label '{}'", e.label));
                     if (!labels.insert(e.label).second)
                       err(line, fmt::format("duplicate measurement label '{}'", e.label));
                   },
               },
               element);
  }

  for (const auto& m : circuit.modes) {
    if (used.count(m.label) == 0) {
      out.push_back({0, Severity::warning, fmt::format("mode '{}' is declared but never used", m.label)});
    }
  }
  if (!measured && !circuit.modes.empty()) out.push_back({0, Severity::warning, "circuit has no measurements"});
  return out;
}

std::string format_number(double value) {
  if (value == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string serialize(const Circuit& circuit) {
  std::string out;
  for (const auto& m : circuit.modes) out += fmt::format("mode {}\n", m.label);
  const auto n = [](double v) { return format_number(v); };
  for (const auto& element : circuit.elements) {
    out += std::visit(
        overloaded{
            [&](const Displace& e) { return fmt::format("displace {} re={} im={}\n", e.mode.label, n(e.re), n(e.im)); },
            [&](const Thermal& e) { return fmt::format("thermal {} nbar={}\n", e.mode.label, n(e.nbar)); },
            [&](const Tms& e) {
              return fmt::format("tms {} {} g={} theta_p={}\n", e.signal.label, e.idler.label, n(e.g), n(e.theta_p));
            },
            [&](const Bs& e) { return fmt::format("bs {} {} t={}\n", e.a.label, e.b.label, n(e.t)); },
            [&](const Phase& e) { return fmt::format("phase {} theta={}\n", e.mode.label, n(e.theta)); },
            [&](const Loss& e) { return fmt::format("loss {} eta={}\n", e.mode.label, n(e.eta)); },
            [&](const Block& e) { return fmt::format("block {}\n", e.mode.label); },
            [&](const Measure& e) {
              if (e.label == e.mode.label) return fmt::format("measure {} theta={}\n", e.mode.label, n(e.theta));
              return fmt::format("measure {} theta={} {}\n", e.mode.label, n(e.theta), e.label);
            },
        },
        element);
  }
  return out;
}

}  // namespace fopa
