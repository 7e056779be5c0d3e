#include "lathom/constitutive/htc.hpp"

#include <algorithm>
#include <cmath>

namespace lathom::constitutive {

double htc_beta_h(double H, const HtcParams& p) {
  const double x = p.a * std::max(0.0, 1.0 - H);
  return 1.0 / (1.0 + std::pow(x, p.b));
}

double htc_beta_h_derivative(double H, const HtcParams& p) {
  if (H >= 1.0) return 0.0;
  const double x = p.a * (1.0 - H);
  const double beta = 1.0 / (1.0 + std::pow(x, p.b));
  return beta * beta * p.b * std::pow(x, p.b - 1.0) * p.a;
}

HtcRates htc_rates(double H, double T, const HtcState& st, const HtcParams& p) {
  HtcRates r;
  const double ac = std::clamp(st.alpha_c, 0.0, p.alpha_c_inf);
  if (p.alpha_c_inf > 0.0) {
    const double affinity = p.Ac1 * (p.Ac2 / p.alpha_c_inf + ac) * (p.alpha_c_inf - ac) *
                            std::exp(-p.eta_c * ac / p.alpha_c_inf);
    const double arrhenius = std::exp(-p.Eac_R / T);
    const double beta = htc_beta_h(H, p);
    r.alpha_c = affinity * beta * arrhenius;
    r.dc_dH = affinity * htc_beta_h_derivative(H, p) * arrhenius;
    r.dc_dT = r.alpha_c * p.Eac_R / (T * T);
  }
  // alpha_s_inf = 0 makes the silica branch inert (and avoids As2 / 0).
  if (p.alpha_s_inf > 0.0) {
    const double as = std::clamp(st.alpha_s, 0.0, p.alpha_s_inf);
    const double affinity = p.As1 * (p.As2 / p.alpha_s_inf + as) * (p.alpha_s_inf - as) *
                            std::exp(-p.eta_s * as / p.alpha_s_inf);
    r.alpha_s = affinity * std::exp(-p.Eas_R / T);
    r.ds_dT = r.alpha_s * p.Eas_R / (T * T);
  }
  return r;
}

Sorption htc_sorption(double H, const HtcState& st, const HtcParams& p) {
  const double ac = st.alpha_c, as = st.alpha_s;
  const double k = 10.0 * (p.g1 * p.alpha_c_inf - ac);
  constexpr double dk = -10.0;  // dk/dalpha_c
  const double G1 = p.kvg_c * ac * p.c + p.kvg_s * as * p.s;
  const double G1c = p.kvg_c * p.c, G1s = p.kvg_s * p.s;
  const double ek = std::exp(k), emk = std::exp(-k);
  const double N = p.w0 - 0.188 * ac * p.c + 0.22 * as * p.s - G1 * (1.0 - emk);
  const double D = ek - 1.0;
  const double K1 = N / D;
  const double Nc = -0.188 * p.c - G1c * (1.0 - emk) - G1 * emk * dk;
  const double Dc = ek * dk;
  const double K1c = (Nc * D - N * Dc) / (D * D);
  const double K1s = (0.22 * p.s - G1s * (1.0 - emk)) / D;

  const double eH = std::exp(k * H), emH = std::exp(-k * H);
  Sorption s;
  s.we = G1 * (1.0 - emH) + K1 * (eH - 1.0);
  s.dH = G1 * k * emH + K1 * k * eH;
  s.dHH = -G1 * k * k * emH + K1 * k * k * eH;
  s.dac = G1c * (1.0 - emH) + G1 * H * dk * emH + K1c * (eH - 1.0) + K1 * H * dk * eH;
  s.das = G1s * (1.0 - emH) + K1s * (eH - 1.0);
  s.dHac = G1c * k * emH + G1 * dk * emH - G1 * k * H * dk * emH + K1c * k * eH + K1 * dk * eH +
           K1 * k * H * dk * eH;
  s.dHas = G1s * k * emH + K1s * k * eH;
  return s;
}

MoisturePermeability htc_moisture_permeability(double H, double T, const HtcParams& p) {
  const double h = std::clamp(H, 0.0, 1.0);
  const double psi = std::exp(p.Ead_R / p.T0 - p.Ead_R / T);
  const double ratio = p.D1 / p.D0 - 1.0;
  const double F = 1.0 + ratio * std::pow(1.0 - h, p.n);
  MoisturePermeability d;
  d.value = psi * p.D1 / F;
  if (H > 0.0 && H < 1.0) d.dH = psi * p.D1 * ratio * p.n * std::pow(1.0 - h, p.n - 1.0) / (F * F);
  d.dT = d.value * p.Ead_R / (T * T);
  return d;
}

HtcSources htc_sources(double H, const HtcState& st, const HtcRates& r, const HtcParams& p) {
  const Sorption s = htc_sorption(H, st, p);
  HtcSources q;
  q.q_h = s.dac * r.alpha_c + s.das * r.alpha_s + p.kappa_c * p.c * r.alpha_c;
  q.q_t = r.alpha_c * p.c * p.Qc_inf + r.alpha_s * p.s * p.Qs_inf;
  return q;
}

HtcPointResponse htc_point_response(double H, double T, const HtcState& st, double dt, const HtcParams& p) {
  HtcRates r = htc_rates(H, T, st, p);
  // Cap the rates so the step lands at most on the asymptote; the cap does not
  // depend on (H, T), so the derivatives vanish where it is active.
  const double cap_c = std::max(0.0, p.alpha_c_inf - st.alpha_c) / dt;
  if (r.alpha_c >= cap_c) r.alpha_c = cap_c, r.dc_dH = r.dc_dT = 0.0;
  const double cap_s = std::max(0.0, p.alpha_s_inf - st.alpha_s) / dt;
  if (r.alpha_s >= cap_s) r.alpha_s = cap_s, r.ds_dT = 0.0;

  const Sorption s = htc_sorption(H, st, p);
  const double wc = s.dac + p.kappa_c * p.c;
  HtcPointResponse out;
  out.cap_h = s.dH;
  out.dcap_h_dH = s.dHH;
  out.cap_t = p.rho * p.c_t;
  out.sink_h = wc * r.alpha_c + s.das * r.alpha_s;
  out.dsink_h_dH = s.dHac * r.alpha_c + wc * r.dc_dH + s.dHas * r.alpha_s;
  out.dsink_h_dT = wc * r.dc_dT + s.das * r.ds_dT;
  out.source_t = r.alpha_c * p.c * p.Qc_inf + r.alpha_s * p.s * p.Qs_inf;
  out.dsource_t_dH = r.dc_dH * p.c * p.Qc_inf;
  out.dsource_t_dT = r.dc_dT * p.c * p.Qc_inf + r.ds_dT * p.s * p.Qs_inf;
  out.rate_c = r.alpha_c;
  out.rate_s = r.alpha_s;
  return out;
}

HtcState htc_advance(const HtcState& st, const HtcPointResponse& r, double dt, const HtcParams& p) {
  HtcState next;
  next.alpha_c = std::clamp(st.alpha_c + r.rate_c * dt, st.alpha_c, std::max(st.alpha_c, p.alpha_c_inf));
  next.alpha_s = std::clamp(st.alpha_s + r.rate_s * dt, st.alpha_s, std::max(st.alpha_s, p.alpha_s_inf));
  return next;
}

}  // namespace lathom::constitutive
