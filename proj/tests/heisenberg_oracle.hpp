#pragma once

// Test-only reference model. Every circuit mode operator is tracked as
//   b_k = sum_j A_kj a_j + B_kj a_j^dagger + c_k
// over independent input modes a_j, each in a thermal state of occupancy
// nbar_j (vacuum: 0). Losses and resets append fresh input modes. Nothing
// here touches the real covariance representation used by the library.

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fopa/circuit.hpp"

namespace fopa::testing {

class HeisenbergModel {
 public:
  using C = std::complex<double>;

  explicit HeisenbergModel(const std::vector<ModeId>& modes) {
    for (const auto& m : modes) {
      const std::size_t k = rows_.size();
      index_[m.label] = k;
      rows_.push_back(Row{});
      const std::size_t j = add_input(0.0);
      rows_[k].a[j] = 1.0;
    }
  }

  static HeisenbergModel run(const Circuit& circuit) {
    HeisenbergModel h(circuit.modes);
    for (const auto& e : circuit.elements) h.apply(e);
    return h;
  }

  void apply(const CircuitElement& e) {
    std::visit([this](const auto& el) { apply_one(el); }, e);
  }

  /// <X(theta)> for a weighted sum of quadratures.
  double mean(const std::vector<std::tuple<std::string, double, double>>& terms) const {
    double m = 0;
    for (const auto& [mode, theta, w] : terms) {
      const C c = rows_[index_.at(mode)].c;
      m += w * 2.0 * std::real(std::polar(1.0, -theta) * c);
    }
    return m;
  }

  /// Var of sum_t w_t X_{mode_t}(theta_t).
  double variance(const std::vector<std::tuple<std::string, double, double>>& terms) const {
    // Operator L = sum_j u_j a_j + h.c.; Var = sum_j |u_j|^2 (2 nbar_j + 1).
    std::vector<C> u(nbar_.size(), C{0, 0});
    for (const auto& [mode, theta, w] : terms) {
      const Row& r = rows_[index_.at(mode)];
      const C ph = std::polar(1.0, -theta);
      for (std::size_t j = 0; j < nbar_.size(); ++j) {
        u[j] += w * (ph * coeff(r.a, j) + std::conj(ph) * std::conj(coeff(r.b, j)));
      }
    }
    double v = 0;
    for (std::size_t j = 0; j < u.size(); ++j) v += std::norm(u[j]) * (2 * nbar_[j] + 1);
    return v;
  }

  double mean(const std::string& mode, double theta) const { return mean({{mode, theta, 1.0}}); }
  double variance(const std::string& mode, double theta) const { return variance({{mode, theta, 1.0}}); }
  C amplitude(const std::string& mode) const { return rows_[index_.at(mode)].c; }

 private:
  struct Row {
    std::map<std::size_t, C> a;
    std::map<std::size_t, C> b;
    C c{0, 0};
  };

  static C coeff(const std::map<std::size_t, C>& m, std::size_t j) {
    const auto it = m.find(j);
    return it == m.end() ? C{0, 0} : it->second;
  }

  std::size_t add_input(double nbar) {
    nbar_.push_back(nbar);
    return nbar_.size() - 1;
  }

  Row& row(const ModeId& m) { return rows_[index_.at(m.label)]; }

  static Row combine(C x, const Row& p, C y, const Row& q) {
    Row out;
    for (const auto& [j, v] : p.a) out.a[j] += x * v;
    for (const auto& [j, v] : p.b) out.b[j] += x * v;
    for (const auto& [j, v] : q.a) out.a[j] += y * v;
    for (const auto& [j, v] : q.b) out.b[j] += y * v;
    out.c = x * p.c + y * q.c;
    return out;
  }

  static Row dagger(const Row& r) {
    Row out;
    for (const auto& [j, v] : r.a) out.b[j] = std::conj(v);
    for (const auto& [j, v] : r.b) out.a[j] = std::conj(v);
    out.c = std::conj(r.c);
    return out;
  }

  void apply_one(const Displace& d) { row(d.mode).c += C{d.re, d.im}; }

  void apply_one(const Thermal& t) {
    Row fresh;
    fresh.a[add_input(t.nbar)] = 1.0;
    row(t.mode) = fresh;
  }

  // b_s = mu a_s + e^{2 i theta_p} nu a_i^dagger, and s <-> i.
  void apply_one(const Tms& t) {
    const double mu = std::cosh(t.g), nu = std::sinh(t.g);
    const C e = std::polar(nu, 2 * t.theta_p);
    const Row s = row(t.signal), i = row(t.idler);
    row(t.signal) = combine(mu, s, e, dagger(i));
    row(t.idler) = combine(mu, i, e, dagger(s));
  }

  void apply_one(const Bs& b) {
    const double r = std::sqrt(1 - b.t * b.t);
    const Row a0 = row(b.a), b0 = row(b.b);
    row(b.a) = combine(b.t, a0, r, b0);
    row(b.b) = combine(-r, a0, b.t, b0);
  }

  void apply_one(const Phase& p) {
    Row& r = row(p.mode);
    r = combine(std::polar(1.0, p.theta), r, 0.0, Row{});
  }

  void apply_one(const Loss& l) {
    Row fresh;
    fresh.a[add_input(0.0)] = 1.0;
    row(l.mode) = combine(std::sqrt(l.eta), row(l.mode), std::sqrt(1 - l.eta), fresh);
  }

  void apply_one(const Block& b) { apply_one(Loss{b.mode, 0.0}); }
  void apply_one(const Measure&) {}

  std::map<std::string, std::size_t> index_;
  std::vector<Row> rows_;
  std::vector<double> nbar_;
};

}  // namespace fopa::testing
