#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fopa/gaussian_state.hpp"

namespace fopa {

// Circuit elements. `line` is the 1-based source line for parsed circuits and
// 0 for circuits built in code; it never takes part in structural equality.

struct Displace {
  ModeId mode;
  double re{0};
  double im{0};
  std::size_t line{0};
};

struct Thermal {
  ModeId mode;
  double nbar{0};
  std::size_t line{0};
};

struct Tms {
  ModeId signal;
  ModeId idler;
  double g{0};
  double theta_p{0};
  std::size_t line{0};
};

struct Bs {
  ModeId a;
  ModeId b;
  double t{1};
  std::size_t line{0};
};

struct Phase {
  ModeId mode;
  double theta{0};
  std::size_t line{0};
};

struct Loss {
  ModeId mode;
  double eta{1};
  std::size_t line{0};
};

struct Block {
  ModeId mode;
  std::size_t line{0};
};

struct Measure {
  ModeId mode;
  double theta{0};
  std::string label;  // defaults to the mode label
  std::size_t line{0};
};

using CircuitElement = std::variant<Displace, Thermal, Tms, Bs, Phase, Loss, Block, Measure>;

std::size_t source_line(const CircuitElement& element);

/// Modes touched by an element, in argument order.
std::vector<ModeId> referenced_modes(const CircuitElement& element);

struct Circuit {
  std::vector<ModeId> modes;
  std::vector<CircuitElement> elements;

  std::vector<Measure> measurements() const;
};

/// Equal mode lists, element kinds and labels; numeric parameters equal to
/// `rel_tol` relative (absolute below 1). Source lines are ignored.
bool structurally_equal(const Circuit& a, const Circuit& b, double rel_tol = 1e-11);

enum class Severity { error, warning };

struct Diagnostic {
  std::size_t line{0};
  Severity severity{Severity::error};
  std::string message;
};

std::string to_string(const Diagnostic& diagnostic);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

struct ParseResult {
  std::optional<Circuit> circuit;       // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;  // errors and warnings, by line
};

/**
 * Parses the line-oriented `.fopa` format:
 *
 *   mode IDENT
 *   displace IDENT re=F im=F
 *   thermal IDENT nbar=F
 *   tms IDENT IDENT g=F theta_p=F
 *   bs IDENT IDENT t=F
 *   phase IDENT theta=F
 *   loss IDENT eta=F
 *   block IDENT
 *   measure IDENT theta=F [LABEL]
 *
 * `#` starts a comment. All diagnostics are collected, not just the first.
 */
ParseResult parse_circuit(std::string_view text);

/// Static checks; errors mean propagation would reject the circuit.
std::vector<Diagnostic> validate(const Circuit& circuit);

/// Canonical text: modes first, then elements, fixed key order, 12
/// significant digits, LF endings. Comments are not preserved.
std::string serialize(const Circuit& circuit);

/// Shortest `%.12g` rendering used by serialize().
std::string format_number(double value);

}  // namespace fopa
