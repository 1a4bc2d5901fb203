#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "wavesys/errors.hpp"
#include "wavesys/profiles.hpp"
#include "wavesys/weights.hpp"

namespace wavesys {

// Square characteristic-aligned lattice: shared spacing h in t and r, so the
// kernel arguments r +/- (t - s) of node-valued (t, r, s) land on nodes.
struct CharacteristicGrid {
  double h = 0.0;
  int n_t = 0;
  int n_r = 0;

  static CharacteristicGrid make(double h, int n_t, int n_r);
  // n_t = round(t_max/h); n_r sized so the cone t_max + support closes.
  static CharacteristicGrid for_horizon(double h, double t_max,
                                        double support_radius);

  double t_max() const { return n_t * h; }
  double r_max() const { return n_r * h; }
};

// Field arrays at one time level; index j corresponds to r = j h. All fields
// extend evenly to negative r; dv stores r * d(v)/dr.
struct FieldState {
  int level = 0;
  double h = 0.0;
  Eigen::ArrayXd u, v, w, dv;

  double t() const { return level * h; }
};

enum class Outcome { CompletedHorizon, BlowupDetected, NumericalDivergence };

const char* to_string(Outcome o);

struct NormTriple {
  double N1 = 0.0, N2 = 0.0, N3 = 0.0;
};

struct FGQuad {
  double F = 0.0, G = 0.0, vq = 0.0, wp = 0.0;
};

struct SolveReport {
  Outcome outcome = Outcome::CompletedHorizon;
  CharacteristicGrid grid;
  std::vector<double> ts;
  std::vector<NormTriple> norm_history;
  std::vector<FGQuad> fg_history;
  double t_low = 0.0, t_high = 0.0;  // blow-up bracket when BlowupDetected
  bool bracket_confirmed = false;
  std::map<int, FieldState> snapshots;
  FieldState final_state;
};

struct MarchOptions {
  // Weight exponent; NaN resolves to mu_window(p,q) midpoint when admissible,
  // 0.75 otherwise.
  double mu = std::numeric_limits<double>::quiet_NaN();
  bool nonlinearity = true;  // test hook: false marches the free field alone
  bool track_norms = true;
  bool track_fg = true;
  bool confirm_bracket = false;  // rerun at h/2 to refine a blow-up bracket
  std::vector<int> snapshot_levels;
};

// Exact O(1)-per-node streaming reformulation of the nested-trapezoid kernel
// operators. Feed one time level at a time:
//   begin_level();                 // advances to level k, exposes L of rows < k
//   set_row(F_k, phi0);            // exposes K+/K- including row k
//   end_level(&phirow);            // folds row k into the diagonal sums
// L_row/L_axis give L[F](t_k, .); Kp_row/Km_row give K+-[F](t_k, .);
// rinv_Kp_axis gives lim_{r->0} K+[F]/r, for which phi0 and phirow must carry
// F + (t-s) dF/drho along the characteristic (see march for the pattern).
class KernelSweep {
 public:
  // active_pad < 0 disables the moving support window (all n_r+1 nodes live).
  KernelSweep(int n_r, double h, int n_t, int active_pad = -1);

  void begin_level();
  void set_row(const Eigen::ArrayXd& source, double phi0 = 0.0);
  void end_level(const Eigen::ArrayXd* phirow = nullptr);

  int level() const { return k_; }
  int active() const;  // highest node index updated at the current level

  const Eigen::ArrayXd& L_row() const { return Lrow_; }
  double L_axis() const { return L0_; }
  const Eigen::ArrayXd& Kp_row() const { return Kp_; }
  const Eigen::ArrayXd& Km_row() const { return Km_; }
  double rinv_Kp_axis() const { return rinvK0_; }

 private:
  int n_r_, n_t_, pad_;
  double h_;
  int k_ = -1;
  int phase_ = 0;  // 0: expect begin_level, 1: expect set_row, 2: expect end_level
  Eigen::ArrayXd Uprev_, Ucur_, Unew_, A_, B_, Anew_, Bnew_;
  Eigen::ArrayXd Mprev_, Mnew_, Lrow_, Kp_, Km_;
  Eigen::VectorXd PM_, Pphi_;
  double L0_ = 0.0, rinvK0_ = 0.0;
};

// Grid-sampled source F(s, rho) for the literal kernel evaluators; reads use
// the even extension in rho and zero beyond n_r.
class GridSource {
 public:
  explicit GridSource(int n_r) : n_r_(n_r) {}

  void push_level(const Eigen::ArrayXd& row);
  double at(int level, int m) const;
  int levels() const { return static_cast<int>(rows_.size()); }
  int n_r() const { return n_r_; }

 private:
  int n_r_;
  std::vector<Eigen::ArrayXd> rows_;
};

// Free radial wave field for even data (f, g) in three dimensions; returns
// (value, time derivative) with the r -> 0 limit taken analytically.
std::pair<double, double> free_field(const RadialProfile& f,
                                     const RadialProfile& g, double t,
                                     double r);

// d/dr (r V0) for data (f, g); regular through r = 0.
double free_field_drv(const RadialProfile& f, const RadialProfile& g, double t,
                      double r);

// Literal nested-trapezoid evaluation of L[F](t_k, r_j); r = 0 uses the
// analytic limit. Requires the source to hold all levels <= k.
double apply_L(const GridSource& source, double h, int k, int j);

// Literal trapezoid along the two characteristics; sgn is +1 or -1.
double apply_K(int sgn, const GridSource& source, double h, int k, int j);

// Explicit time marching of the coupled integral system
//   u = eps U0 + L|v|^q,  w = eps dU0/dt + K+|v|^q / r,
//   v = eps V0 + L|w|^p,  r dv/dr = eps d(r V0)/dr + K-|w|^p - v,
// with per-level weighted norms, F/G functionals, and blow-up detection at
// max(|w|, |v|) > blowup_threshold * max(eps, 1e-8).
SolveReport march(double eps, const DataSet& data,
                  const CharacteristicGrid& grid, double p, double q,
                  double blowup_threshold, const MarchOptions& opt = {});

NormTriple weighted_norms(const FieldState& state, const WeightSet& weights);

// (F, G, ||v||_q^q, ||w||_p^p) with the radial 3-D measure 4 pi r^2 dr by
// trapezoid at the state's level.
FGQuad functionals_FG(const FieldState& state, double p, double q);

struct PicardReport {
  std::vector<double> diffs;   // weighted norms of consecutive-iterate gaps
  std::vector<double> ratios;  // diffs[m+1] / diffs[m]
  bool diverged = false;
  // final iterate, level-major (index k holds the row at t = k h)
  std::vector<Eigen::ArrayXd> w, v, dv;
};

// Picard iteration of (w, v) -> (eps dU0/dt + K+|v|^q / r, eps V0 + L|w|^p)
// on the full space-time box, starting from the free pair.
PicardReport picard_run(double eps, const DataSet& data,
                        const CharacteristicGrid& grid, double p, double q,
                        int n_iters,
                        double mu = std::numeric_limits<double>::quiet_NaN());

// CSV snapshot of one stored level: columns t, r, u, v, w, dv.
void write_snapshot_csv(const SolveReport& report, int level,
                        std::ostream& os);

}  // namespace wavesys
