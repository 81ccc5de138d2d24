#include "fopa/mc_oracle.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <variant>

#include <fmt/format.h>

namespace fopa {
namespace {

using Amplitude = std::complex<double>;

// Running mean / sum of squared deviations (Welford), mergeable (Chan et al.).
struct Moments {
  double count{0};
  double mean{0};
  double m2{0};

  void push(double v) {
    count += 1;
    const double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    const double n = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * count * o.count / n;
    count = n;
  }
};

/// Circuit lowered to mode indices once, so the sample loop does no lookups.
struct Step {
  enum Kind { displace, thermal, tms, bs, phase, loss, block, measure } kind;
  std::size_t a{0};
  std::size_t b{0};
  Amplitude c1{};  // per-kind coefficients
  double r1{0};
  double r2{0};
  std::size_t slot{0};
};

std::vector<Step> lower(const Circuit& circuit, std::size_t& n_measurements) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t k = 0; k < circuit.modes.size(); ++k) index.emplace(circuit.modes[k].label, k);
  const auto at = [&](const ModeId& m) { return index.at(m.label); };

  std::vector<Step> steps;
  n_measurements = 0;
  for (const auto& element : circuit.elements) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          Step s{};
          if constexpr (std::is_same_v<T, Displace>) {
            s = {Step::displace, at(e.mode), 0, Amplitude(e.re, e.im)};
          } else if constexpr (std::is_same_v<T, Thermal>) {
            s = {Step::thermal, at(e.mode), 0, {}, std::sqrt(2.0 * e.nbar + 1.0)};
          } else if constexpr (std::is_same_v<T, Tms>) {
            s = {Step::tms, at(e.signal), at(e.idler), std::polar(std::sinh(e.g), 2.0 * e.theta_p), std::cosh(e.g)};
          } else if constexpr (std::is_same_v<T, Bs>) {
            s = {Step::bs, at(e.a), at(e.b), {}, e.t, std::sqrt(1.0 - e.t * e.t)};
          } else if constexpr (std::is_same_v<T, Phase>) {
            s = {Step::phase, at(e.mode), 0, std::polar(1.0, e.theta)};
          } else if constexpr (std::is_same_v<T, Loss>) {
            s = {Step::loss, at(e.mode), 0, {}, std::sqrt(e.eta), std::sqrt(1.0 - e.eta)};
          } else if constexpr (std::is_same_v<T, Block>) {
            s = {Step::block, at(e.mode)};
          } else {
            s = {Step::measure, at(e.mode), 0, std::polar(1.0, -e.theta)};
            s.slot = n_measurements++;
          }
          steps.push_back(s);
        },
        element);
  }
  return steps;
}

std::vector<Moments> run_batch(const std::vector<Step>& steps, std::size_t n_modes, std::size_t n_measurements,
                               std::size_t n_samples, std::uint64_t seed, std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto vacuum = [&] {
    const double x = normal(rng);
    const double p = normal(rng);
    return Amplitude(x, p) / 2.0;
  };

  std::vector<Moments> acc(n_measurements);
  std::vector<Amplitude> a(n_modes);
  for (std::size_t n = 0; n < n_samples; ++n) {
    for (auto& v : a) v = vacuum();
    for (const Step& s : steps) {
      switch (s.kind) {
        case Step::displace:
          a[s.a] += s.c1;
          break;
        case Step::thermal:
          a[s.a] = s.r1 * vacuum();
          break;
        case Step::tms: {
          // b_s = mu a_s + e^{2i theta_p} nu a_i^*, b_i = mu a_i + e^{2i theta_p} nu a_s^*
          const Amplitude as = a[s.a];
          const Amplitude ai = a[s.b];
          a[s.a] = s.r1 * as + s.c1 * std::conj(ai);
          a[s.b] = s.r1 * ai + s.c1 * std::conj(as);
          break;
        }
        case Step::bs: {
          const Amplitude x = a[s.a];
          const Amplitude y = a[s.b];
          a[s.a] = s.r1 * x + s.r2 * y;
          a[s.b] = -s.r2 * x + s.r1 * y;
          break;
        }
        case Step::phase:
          a[s.a] *= s.c1;
          break;
        case Step::loss:
          a[s.a] = s.r1 * a[s.a] + s.r2 * vacuum();
          break;
        case Step::block:
          a[s.a] = vacuum();
          break;
        case Step::measure:
          // X(theta) = e^{-i theta} a + e^{i theta} a^*
          acc[s.slot].push(2.0 * (s.c1 * a[s.a]).real());
          break;
      }
    }
  }
  return acc;
}

}  // namespace

std::vector<McMeasurement> mc_propagate(const Circuit& circuit, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < kMcMinSamples) {
    throw std::invalid_argument(fmt::format("n too small: need at least {} samples", kMcMinSamples));
  }
  for (const auto& d : validate(circuit)) {
    if (d.severity == Severity::error) throw std::invalid_argument("invalid circuit: " + to_string(d));
  }

  std::size_t n_measurements = 0;
  const auto steps = lower(circuit, n_measurements);

  std::vector<Moments> total(n_measurements);
  std::size_t done = 0;
  for (std::uint64_t batch = 0; done < n_samples; ++batch) {
    const std::size_t count = std::min(kMcBatchSize, n_samples - done);
    const auto part = run_batch(steps, circuit.modes.size(), n_measurements, count, seed, batch);
    for (std::size_t k = 0; k < n_measurements; ++k) total[k].merge(part[k]);
    done += count;
  }

  std::vector<McMeasurement> out;
  const auto measures = circuit.measurements();
  for (std::size_t k = 0; k < n_measurements; ++k) {
    const double n = static_cast<double>(n_samples);
    const double var = total[k].m2 / (n - 1.0);
    McEstimate e{total[k].mean, var, n_samples, std::sqrt(var / n), var * std::sqrt(2.0 / (n - 1.0))};
    out.push_back({measures[k].label, e});
  }
  return out;
}

ComparisonVerdict compare(const QuadratureStats& analytic, const McEstimate& mc, double z_threshold) {
  if (!(z_threshold > 0)) throw std::domain_error("compare: z threshold must be positive");
  if (!(mc.std_error_mean > 0) || !(mc.std_error_var > 0)) throw std::domain_error("compare: zero standard error");
  ComparisonVerdict v;
  v.z_mean = (mc.mean - analytic.mean) / mc.std_error_mean;
  v.z_variance = (mc.variance - analytic.variance) / mc.std_error_var;
  v.pass = std::abs(v.z_mean) <= z_threshold && std::abs(v.z_variance) <= z_threshold;
  return v;
}

}  // namespace fopa
