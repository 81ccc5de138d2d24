#include "fopa/metrics.hpp"

#include <cmath>
#include <limits>

namespace fopa {

double TapReport::db(double linear) {
  if (std::isinf(linear) && linear > 0) return linear;
  if (linear == 0.0) return -std::numeric_limits<double>::infinity();
  return to_decibels(linear);
}

TapReport make_tap_report(double snr_in, double snr_s, double snr_i, double lambda_opt, double variance_s,
                          double variance_i) {
  if (!(snr_in > 0)) throw std::domain_error("make_tap_report: input SNR must be positive");
  constexpr double inf = std::numeric_limits<double>::infinity();
  TapReport r;
  r.snr_in = snr_in;
  r.snr_s = snr_s;
  r.snr_i = snr_i;
  r.nf_s = snr_s > 0 ? snr_in / snr_s : inf;
  r.nf_i = snr_i > 0 ? snr_in / snr_i : inf;
  r.t_s = snr_s / snr_in;
  r.t_i = snr_i / snr_in;
  r.t_sum = r.t_s + r.t_i;
  r.lambda_opt = lambda_opt;
  r.variance_s = variance_s;
  r.variance_i = variance_i;
  return r;
}

}  // namespace fopa
