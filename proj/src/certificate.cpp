#include "iva/certificate.hpp"

#include <cmath>

#include "iva/eating.hpp"

namespace iva {

namespace {
// gamma = (1 - shadow/value) / (ln value - ln shadow), with the branch value
// 1 at shadow = value and the limit 0 at shadow = 0.
double gamma_of(double value, double shadow) {
  if (shadow >= value || value - shadow <= 1e-12 * value) return 1.0;
  if (shadow <= 0) return 0.0;
  return (1.0 - shadow / value) / (std::log(value) - std::log(shadow));
}
}  // namespace

DualCertificate build_dual_certificate(const SignalProfile& s,
                                       const std::vector<ValuationOracle>& v,
                                       const ShadowOperator& op) {
  const int n_all = s.size();
  require(static_cast<int>(v.size()) == n_all, "one oracle per bidder");

  DualCertificate cert;
  std::vector<double> value_all(static_cast<std::size_t>(n_all));
  std::vector<std::vector<double>> shadow_all(
      static_cast<std::size_t>(n_all), std::vector<double>(static_cast<std::size_t>(n_all), 0.0));
  for (int i = 0; i < n_all; ++i) {
    value_all[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)](s);
    for (int j = 0; j < n_all; ++j) {
      if (j == i) continue;
      shadow_all[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          shadow_value(v[static_cast<std::size_t>(i)], s, j, op);
    }
  }

  // shares of the full instance: bidder i's own share in its process
  // (own real value, others' shadows)
  std::vector<double> share(static_cast<std::size_t>(n_all), 0.0);
  for (int i = 0; i < n_all; ++i) {
    if (value_all[static_cast<std::size_t>(i)] <= 0) continue;  // never starts eating
    WeightFunction w(static_cast<std::size_t>(n_all), 0.0);
    for (int j = 0; j < n_all; ++j) {
      w[static_cast<std::size_t>(j)] = j == i
                                           ? value_all[static_cast<std::size_t>(i)]
                                           : shadow_all[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    share[static_cast<std::size_t>(i)] = eat(w).shares[static_cast<std::size_t>(i)];
    cert.sum_shares += share[static_cast<std::size_t>(i)];
  }

  // restrict to positive-share bidders: dropping a zero-share bidder never
  // lowers anyone else's share, and over the restricted instance every (P_i)
  // is feasible, so weak duality applies bidder by bidder
  for (int i = 0; i < n_all; ++i) {
    if (share[static_cast<std::size_t>(i)] > 0) cert.bidders.push_back(i);
  }
  const int n = static_cast<int>(cert.bidders.size());
  if (n == 0) return cert;

  std::vector<double> value(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> shadows(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int a = 0; a < n; ++a) {
    const int i = cert.bidders[static_cast<std::size_t>(a)];
    value[static_cast<std::size_t>(a)] = value_all[static_cast<std::size_t>(i)];
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const int j = cert.bidders[static_cast<std::size_t>(b)];
      shadows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          shadow_all[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }

  // shares of the restricted instance; these are what the duals dominate
  cert.restricted_shares.assign(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    WeightFunction w(static_cast<std::size_t>(n), 0.0);
    for (int b = 0; b < n; ++b) {
      w[static_cast<std::size_t>(b)] =
          b == a ? value[static_cast<std::size_t>(a)]
                 : shadows[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
    }
    cert.restricted_shares[static_cast<std::size_t>(a)] = eat(w).shares[static_cast<std::size_t>(a)];
  }

  cert.gamma.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0));
  cert.beta.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      cert.gamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = gamma_of(
          value[static_cast<std::size_t>(a)],
          shadows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
    }
  }
  double marginal_sum = 0;  // sum over ordered pairs of (1 - shadow/value)
  for (int a = 0; a < n; ++a) {
    double beta_sum = 0;
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double beta = cert.gamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                          cert.gamma[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] / n;
      cert.beta[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = beta;
      beta_sum += beta;
      marginal_sum += 1.0 - shadows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] /
                                value[static_cast<std::size_t>(a)];
    }
    cert.alpha.push_back(1.0 - beta_sum);
  }

  cert.dual_values.assign(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    cert.a_part += cert.alpha[static_cast<std::size_t>(a)];
    double dual = cert.alpha[static_cast<std::size_t>(a)];
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double beta = cert.beta[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (beta <= 0) continue;  // zero-shadow pairs have a vacuous constraint
      // (D_a)'s objective pairs a's value with b's shadow in a's process
      dual += beta * (std::log(value[static_cast<std::size_t>(a)]) -
                      std::log(shadows[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]));
      // the bound's swapped form pairs it with a's own shadow; the totals
      // agree because beta is symmetric
      cert.b_part += beta * (std::log(value[static_cast<std::size_t>(a)]) -
                             std::log(shadows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]));
    }
    cert.dual_values[static_cast<std::size_t>(a)] = dual;
  }
  cert.bound = cert.a_part + cert.b_part;
  cert.self_bounding_rhs = 1.0 + 3.0 * marginal_sum / n;

  // dual feasibility of every (D_i): alpha + sum beta >= 1, alpha >= beta >= 0
  for (int a = 0; a < n; ++a) {
    double beta_sum = 0;
    for (int b = 0; b < n; ++b) {
      const double beta = cert.beta[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      beta_sum += beta;
      if (beta < 0 || cert.alpha[static_cast<std::size_t>(a)] < beta - 1e-12) {
        cert.dual_feasible = false;
      }
    }
    if (cert.alpha[static_cast<std::size_t>(a)] + beta_sum < 1.0 - 1e-9) cert.dual_feasible = false;
    if (cert.alpha[static_cast<std::size_t>(a)] < -1e-12) cert.dual_feasible = false;
  }
  return cert;
}

}  // namespace iva
