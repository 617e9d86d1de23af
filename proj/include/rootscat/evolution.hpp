#pragma once
// Time-dependent wave packets: free, interacting, asymptotic and classical
// packets for a bump profile in one component of the regular sector, and the
// decay diagnostics comparing them over a time ladder.

#include "rootscat/scattering.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace rootscat {

struct WavePacketSpec {
  std::vector<double> center;   // spectral coordinates
  double radius = 0.4;          // coordinate distance, periodic
  int smoothness = 6;           // C^k transition
  double velocity_margin = 0.05;  // V_clas inflation, relative to max |grad E|
  double window_inflation = 0.5;
  int window_margin = 10;       // lattice sites added on every side (starting value)
  int max_window_margin = 640;
  int M0 = 0;                   // base grid; 0 picks 512 in rank one, 256 otherwise
  double leak_tol = 1e-6;
};

// A validated packet. phi_hat is the W-antisymmetric extension of a C^k bump
// (plateau of radius r/2), normalized to unit norm.
class WavePacket {
 public:
  // throws std::invalid_argument if the support leaves the component or the
  // velocity box touches a chamber wall
  WavePacket(const ScatteringContext& ctx, WavePacketSpec spec);

  const ScatteringContext& context() const { return ctx_; }
  const RootSystem& root_system() const { return ctx_.root_system(); }
  const WavePacketSpec& spec() const { return spec_; }
  const WeylElement& component_element() const { return w_hat_; }
  // velocity box V_clas in fundamental-weight coordinates
  const std::vector<double>& velocity_lo() const { return v_lo_; }
  const std::vector<double>& velocity_hi() const { return v_hi_; }
  // min over V_clas and simple coroots of <w_hat zeta, alpha^vee>
  double chamber_margin() const { return eps_; }
  double max_speed() const { return vmax_; }

  double bump(const std::vector<double>& x) const;  // normalized bump piece
  SpectralFunction phi_hat(int M) const;
  // phi_hat e^{-i t E}
  SpectralFunction evolved(double t, int M) const;
  int grid_size(double t) const;
  std::vector<IVec> window(double t, int margin) const;
  // margin doubled from spec().window_margin until the free packet leaks less
  // than leak_tol / 10; throws LeakageError past max_window_margin
  std::vector<IVec> window(double t) const;
  // w_hat for t > 0, w0 w_hat for t < 0
  WeylElement direction(double t) const;
  bool in_classical_support(const IVec& lambda, double t) const;

  // the packet with center -xi_c
  WavePacket reflected() const;

 private:
  ScatteringContext ctx_;
  WavePacketSpec spec_;
  WeylElement w_hat_;
  std::vector<double> v_lo_, v_hi_;
  double eps_ = 0, vmax_ = 0, amp_ = 1;
};

// empty window means packet.window(t)
LatticeFunction free_packet(const WavePacket& packet, double t, std::vector<IVec> window = {});
LatticeFunction interacting_packet(const WavePacket& packet, int sign, double t, const WaveTable& table,
                                   std::vector<IVec> window = {});
LatticeFunction asymptotic_packet(const WavePacket& packet, int sign, double t, std::vector<IVec> window = {});
// throws std::invalid_argument for t = 0
LatticeFunction classical_packet(const WavePacket& packet, double t);
std::vector<IVec> classical_support(const WavePacket& packet, double t);
LatticeFunction classical_projection(const LatticeFunction& phi, const WavePacket& packet, double t);

// dominant weights covering every window of the ladder, and a table on them
std::vector<IVec> wave_table_weights(const WavePacket& packet, const std::vector<double>& times);
int wave_table_budget(const RootSystem& rs);
WaveTable wave_table_for(const WavePacket& packet, const std::vector<double>& times);

// least-squares fits of log-norm against log|t| (power) and |t| (exponential)
struct DecayFit {
  LinearFit power, exponential;
  double aic_power = 0, aic_exponential = 0;
  std::size_t points = 0;
};
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& norms, double floor = 1e-300);

struct EvolutionRow {
  double t = 0;
  int M = 0;
  std::size_t window = 0;
  double norm_free = 0, norm_interacting = 0, norm_asymptotic = 0;
  double int_free = 0;          // |phi_s(t) - phi0(t)|
  double free_clas = 0;         // |phi0(t) - phi_clas(t)|
  double asym_clas = 0;         // |phi_inf(t) - phi_clas(t)|
  double int_asym = 0;          // |phi_s(t) - phi_inf(t)|
  double int_asym_projected = 0;  // |P_t (phi_s(t) - phi_inf(t))|
  double free_outside = 0;      // |(1 - P_t) phi0(t)|
  double leakage_free = 0, leakage_interacting = 0;
};

struct EvolutionReport {
  std::string system;
  int sign = 1;
  std::vector<EvolutionRow> rows;
  DecayFit total, free_clas, asym_clas, projected, outside;
  bool decreasing = false;
  bool telescope = false;
  bool unitary = false;   // all unitarity norms within 1e-6 of 1
  bool valid = true;      // false if a leakage or depth error aborted the run
  bool success = false;
  std::string error;
};

// times are taken as sign * |t|
EvolutionReport run_scattering_diagnostic(const WavePacket& packet, int sign, const std::vector<double>& ladder,
                                          const WaveTable* table = nullptr);
void write_json(std::ostream& os, const EvolutionReport& r);
void write_csv(std::ostream& os, const EvolutionReport& r);

}  // namespace rootscat
