#pragma once

// Seeded generators of valid circuits and of mutated `.fopa` text, shared by
// the property tests and the acceptance binary.

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fopa/circuit.hpp"

namespace fopa::testing {

class CircuitGenerator {
 public:
  explicit CircuitGenerator(std::uint64_t seed) : rng_(seed) {}

  /// 1-4 modes, up to max_elements elements with parameters inside their
  /// valid ranges, then one measurement per mode.
  Circuit circuit(std::size_t max_elements = 12) {
    Circuit c;
    const int n_modes = pick(1, 4);
    for (int k = 0; k < n_modes; ++k) c.modes.push_back(ModeId{"m" + std::to_string(k)});
    const int n_elements = pick(0, static_cast<int>(max_elements) - n_modes > 0 ? static_cast<int>(max_elements) - n_modes : 0);
    for (int k = 0; k < n_elements; ++k) c.elements.push_back(element(c.modes));
    for (const auto& m : c.modes) c.elements.push_back(Measure{m, uniform(0, 2 * std::numbers::pi), m.label});
    return c;
  }

  CircuitElement element(const std::vector<ModeId>& modes) {
    const ModeId& a = modes[pick(0, static_cast<int>(modes.size()) - 1)];
    const bool two = modes.size() > 1;
    ModeId b = a;
    while (two && b == a) b = modes[pick(0, static_cast<int>(modes.size()) - 1)];
    switch (pick(0, two ? 7 : 4)) {
      case 0:
        return Displace{a, uniform(-3, 3), uniform(-3, 3)};
      case 1:
        return Thermal{a, uniform(0, 4)};
      case 2:
        return Phase{a, uniform(-7, 7)};
      case 3:
        return Loss{a, uniform(0, 1)};
      case 4:
        return Block{a};
      case 5:
      case 6:
        return Tms{a, b, uniform(0, 2.5), uniform(-4, 4)};
      default:
        return Bs{a, b, uniform(0, 1)};
    }
  }

  /// Random edits of a valid file: byte flips, insertions, deletions,
  /// truncation, token swaps and line shuffles.
  std::string mutate(std::string text) {
    static const std::string kAlphabet =
        "abcdefghijklmnopqrstuvwxyz0123456789 =._-+#\n\teEinfa\x01\xff\xc3\xa9";
    static const std::vector<std::string> kTokens = {"mode",  "tms",   "bs",      "loss", "eta=", "g=",   "=",
                                                     "nan",   "1e999", "-0",      "  ",   "\r",   "theta=",
                                                     "block", "#",     "measure", "s",    "i",    "\n\n"};
    const int edits = pick(1, 8);
    for (int k = 0; k < edits; ++k) {
      const std::size_t pos = text.empty() ? 0 : static_cast<std::size_t>(pick(0, static_cast<int>(text.size())));
      switch (pick(0, 5)) {
        case 0:
          if (!text.empty() && pos < text.size()) text[pos] = kAlphabet[pick(0, static_cast<int>(kAlphabet.size()) - 1)];
          break;
        case 1:
          text.insert(pos, 1, static_cast<char>(pick(0, 255)));
          break;
        case 2:
          if (pos < text.size()) text.erase(pos, static_cast<std::size_t>(pick(1, 6)));
          break;
        case 3:
          text.resize(pos);
          break;
        case 4:
          text.insert(pos, kTokens[pick(0, static_cast<int>(kTokens.size()) - 1)]);
          break;
        default: {
          const auto nl = text.find('\n', pos);
          if (nl != std::string::npos) text = text.substr(nl + 1) + text.substr(0, nl + 1);
        }
      }
    }
    return text;
  }

  std::string random_bytes(std::size_t max_len) {
    std::string s(static_cast<std::size_t>(pick(0, static_cast<int>(max_len))), '\0');
    for (auto& ch : s) ch = static_cast<char>(pick(0, 255));
    return s;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fopa::testing
