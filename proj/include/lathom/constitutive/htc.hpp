#pragma once

// Hygro-thermo-chemical concrete material: humidity H (-), temperature T (K),
// cement hydration degree alpha_c and silica fume reaction degree alpha_s.

namespace lathom::constitutive {

struct HtcParams {
  double rho = 2400.0;        // kg/m^3
  double c_t = 1100.0;        // J/(kg K)
  double kappa = 2.5;         // W/(m K)
  double c = 260.0;           // cement content, kg/m^3
  double s = 0.0;             // silica fume content, kg/m^3
  double Qc_inf = 5.2e5;      // J/kg
  double Qs_inf = 7.8e5;      // J/kg
  double Eac_R = 5490.0;      // K
  double Ac1 = 5.56e4;        // 1/s
  double Ac2 = 1e-6;
  double alpha_c_inf = 0.695;
  double eta_c = 6.5;
  double a = 5.5;
  double b = 4.0;
  double Eas_R = 9620.0;      // K
  double As1 = 1.39e10;       // 1/s
  double As2 = 1e-6;
  double alpha_s_inf = 0.0;
  double eta_s = 9.5;
  double kvg_c = 0.2;
  double kvg_s = 0.36;
  double w0 = 104.0;          // kg/m^3
  double g1 = 1.5;
  double kappa_c = 0.253;
  double D0 = 6.0e-10;        // kg/(m s)
  double D1 = 7.0e-8;         // kg/(m s)
  double n = 3.0;
  double Ead_R = 2700.0;      // K
  double T0 = 293.15;         // K
};

struct HtcState {
  double alpha_c = 0.0;
  double alpha_s = 0.0;
};

/// Reaction rates (1/s) and their partial derivatives at fixed reaction degrees.
struct HtcRates {
  double alpha_c = 0.0;
  double alpha_s = 0.0;
  double dc_dH = 0.0;
  double dc_dT = 0.0;
  double ds_dT = 0.0;
};

HtcRates htc_rates(double H, double T, const HtcState& state, const HtcParams& p);

/// Humidity factor beta_H = 1 / (1 + (a - a H)^b) and its derivative.
double htc_beta_h(double H, const HtcParams& p);
double htc_beta_h_derivative(double H, const HtcParams& p);

/// Evaporable water content and partial derivatives.
struct Sorption {
  double we = 0.0;
  double dH = 0.0;
  double dac = 0.0;
  double das = 0.0;
  double dHH = 0.0;
  double dHac = 0.0;
  double dHas = 0.0;
};

Sorption htc_sorption(double H, const HtcState& state, const HtcParams& p);

struct MoisturePermeability {
  double value = 0.0;  // kg/(m s)
  double dH = 0.0;
  double dT = 0.0;
};

MoisturePermeability htc_moisture_permeability(double H, double T, const HtcParams& p);

struct HtcSources {
  double q_h = 0.0;  // moisture consumed by the reactions, kg/(m^3 s)
  double q_t = 0.0;  // heat released, W/m^3
};

HtcSources htc_sources(double H, const HtcState& state, const HtcRates& rates, const HtcParams& p);

/// Local terms of one Backward Euler step at a material point, with the reaction
/// degrees lagged at the start of the step. The rates are limited so that
/// alpha + rate * dt never exceeds its asymptote.
struct HtcPointResponse {
  double cap_h = 0.0;      // dwe/dH at (H, alpha_n)
  double dcap_h_dH = 0.0;
  double cap_t = 0.0;      // rho c_t
  double sink_h = 0.0;     // q_H
  double dsink_h_dH = 0.0;
  double dsink_h_dT = 0.0;
  double source_t = 0.0;   // q_T
  double dsource_t_dH = 0.0;
  double dsource_t_dT = 0.0;
  double rate_c = 0.0;     // effective rates used to advance the state
  double rate_s = 0.0;
};

HtcPointResponse htc_point_response(double H, double T, const HtcState& state_n, double dt, const HtcParams& p);

/// alpha_{n+1} = alpha_n + rate * dt, clamped to [alpha_n, alpha_inf].
HtcState htc_advance(const HtcState& state_n, const HtcPointResponse& response, double dt, const HtcParams& p);

}  // namespace lathom::constitutive
