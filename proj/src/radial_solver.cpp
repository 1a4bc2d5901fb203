#include "wavesys/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>

#include "wavesys/analytics.hpp"

namespace wavesys {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double pow_abs(double x, double e) {
  if (e == 2.0) return x * x;
  if (e == 3.0) {
    const double ax = std::abs(x);
    return ax * ax * ax;
  }
  return std::pow(std::abs(x), e);
}

// d/dx |x|^e = e |x|^(e-1) sgn(x)
inline double pow_abs_d(double x, double e) {
  if (e == 2.0) return 2.0 * x;
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  return e * std::pow(ax, e - 1.0) * (x > 0.0 ? 1.0 : -1.0);
}

double resolve_mu(double mu_opt, double p, double q) {
  if (std::isfinite(mu_opt)) return mu_opt;
  try {
    return mu_window(p, q).chosen_mu;
  } catch (const DomainError&) {
    return 0.75;
  }
}

double free_value(const RadialProfile& f, const RadialProfile& g, double t,
                  double r) {
  if (r <= 0.0) return f.value(t) + t * f.d1(t) + t * g.value(t);
  const double rp = r + t, rm = r - t;
  return ((rp * f.value(rp) + rm * f.value(rm)) +
          (g.moment(rp) - g.moment(rm))) /
         (2.0 * r);
}

double free_dt(const RadialProfile& f, const RadialProfile& g, double t,
               double r) {
  if (r <= 0.0)
    return 2.0 * f.d1(t) + t * f.d2(t) + g.value(t) + t * g.d1(t);
  const double rp = r + t, rm = r - t;
  return (f.value(rp) + rp * f.d1(rp) - f.value(rm) - rm * f.d1(rm) +
          rp * g.value(rp) + rm * g.value(rm)) /
         (2.0 * r);
}

double free_drv_impl(const RadialProfile& f, const RadialProfile& g, double t,
                     double r) {
  const double rp = r + t, rm = r - t;
  return 0.5 * (f.value(rp) + rp * f.d1(rp) + f.value(rm) + rm * f.d1(rm)) +
         0.5 * (rp * g.value(rp) - rm * g.value(rm));
}

NormTriple norms_arrays(const Eigen::ArrayXd& w, const Eigen::ArrayXd& v,
                        const Eigen::ArrayXd& dv, int a, double t, double h,
                        const WeightSet& W) {
  NormTriple n;
  for (int j = 0; j <= a; ++j) {
    const double r = j * h;
    n.N1 = std::max(n.N1, W.w1(t, r) * std::abs(w(j)));
    n.N2 = std::max(n.N2, W.w2(t, r) * std::abs(v(j)));
    n.N3 = std::max(n.N3, W.w3(t, r) * std::abs(dv(j)));
  }
  return n;
}

FGQuad fg_arrays(const Eigen::ArrayXd& u, const Eigen::ArrayXd& v,
                 const Eigen::ArrayXd& w, int a, double h, double p,
                 double q) {
  double F = 0.0, G = 0.0, vq = 0.0, wp = 0.0;
  for (int j = 0; j <= a; ++j) {
    const double r2 = (j * h) * (j * h);
    const double wt = (j == 0 || j == a) ? 0.5 : 1.0;
    F += wt * u(j) * r2;
    G += wt * v(j) * r2;
    vq += wt * pow_abs(v(j), q) * r2;
    wp += wt * pow_abs(w(j), p) * r2;
  }
  const double c = 4.0 * kPi * h;
  return {c * F, c * G, c * vq, c * wp};
}

}  // namespace

CharacteristicGrid CharacteristicGrid::make(double h, int n_t, int n_r) {
  if (!(h > 0.0)) throw DomainError("CharacteristicGrid: h must be > 0");
  if (n_t < 1 || n_r < 1)
    throw DomainError("CharacteristicGrid: n_t and n_r must be >= 1");
  return {h, n_t, n_r};
}

CharacteristicGrid CharacteristicGrid::for_horizon(double h, double t_max,
                                                   double support_radius) {
  if (!(h > 0.0) || !(t_max > 0.0) || !(support_radius > 0.0))
    throw DomainError("CharacteristicGrid: h, t_max, support must be > 0");
  const int n_t = std::max(1, static_cast<int>(std::lround(t_max / h)));
  const int n_r =
      static_cast<int>(std::ceil((n_t * h + support_radius) / h)) + 2;
  return {h, n_t, n_r};
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::CompletedHorizon:
      return "CompletedHorizon";
    case Outcome::BlowupDetected:
      return "BlowupDetected";
    case Outcome::NumericalDivergence:
      return "NumericalDivergence";
  }
  return "NumericalDivergence";
}

KernelSweep::KernelSweep(int n_r, double h, int n_t, int active_pad)
    : n_r_(n_r), n_t_(n_t), pad_(active_pad), h_(h) {
  if (n_r < 2 || n_t < 1 || !(h > 0.0))
    throw DomainError("KernelSweep: invalid grid sizes");
  Uprev_ = Eigen::ArrayXd::Zero(n_r + 1);
  Ucur_ = Eigen::ArrayXd::Zero(n_r + 1);
  Unew_ = Eigen::ArrayXd::Zero(n_r + 1);
  A_ = Eigen::ArrayXd::Zero(n_r + 1);
  B_ = Eigen::ArrayXd::Zero(n_r + 1);
  Anew_ = Eigen::ArrayXd::Zero(n_r + 1);
  Bnew_ = Eigen::ArrayXd::Zero(n_r + 1);
  Mprev_ = Eigen::ArrayXd::Zero(n_r + 1);
  Mnew_ = Eigen::ArrayXd::Zero(n_r + 1);
  Lrow_ = Eigen::ArrayXd::Zero(n_r + 1);
  Kp_ = Eigen::ArrayXd::Zero(n_r + 1);
  Km_ = Eigen::ArrayXd::Zero(n_r + 1);
  PM_ = Eigen::VectorXd::Zero(n_t + 2);
  Pphi_ = Eigen::VectorXd::Zero(n_t + 2);
}

int KernelSweep::active() const {
  if (k_ < 0) throw SequencingError("KernelSweep: no level begun");
  if (pad_ < 0) return n_r_;
  return std::min(n_r_, k_ + pad_);
}

void KernelSweep::begin_level() {
  if (phase_ != 0) throw SequencingError("KernelSweep: level not finished");
  if (k_ + 1 > n_t_) throw SequencingError("KernelSweep: beyond last level");
  ++k_;
  phase_ = 1;
  if (k_ == 0) {
    L0_ = 0.0;
    return;
  }
  const int a = active();
  // Mprev holds (rho * F) at the previous level; odd extension through 0,
  // zero beyond the lattice.
  auto M = [&](int m) -> double {
    if (m < 0) return -Mprev_(-m);
    if (m > n_r_) return 0.0;
    return Mprev_(m);
  };
  if (k_ == 1) {
    for (int j = 0; j <= a; ++j)
      Unew_(j) = 0.5 * h_ * h_ * (0.5 * M(j - 1) + M(j) + 0.5 * M(j + 1));
  } else {
    auto U = [&](int m) -> double {
      if (m < 0) return -Ucur_(-m);
      if (m > n_r_) return 0.0;
      return Ucur_(m);
    };
    for (int j = 0; j <= a; ++j)
      Unew_(j) = U(j + 1) + U(j - 1) - Uprev_(j) +
                 h_ * h_ * (0.5 * M(j - 1) + M(j) + 0.5 * M(j + 1));
  }
  std::swap(Uprev_, Ucur_);
  std::swap(Ucur_, Unew_);
  Lrow_(0) = 0.0;
  for (int j = 1; j <= a; ++j) Lrow_(j) = Ucur_(j) / (2.0 * j * h_);
  L0_ = h_ * PM_(k_);
}

void KernelSweep::set_row(const Eigen::ArrayXd& source, double phi0) {
  if (phase_ != 1) throw SequencingError("KernelSweep: begin_level first");
  phase_ = 2;
  const int a = active();
  if (source.size() < a + 1)
    throw DomainError("KernelSweep: source row too short");
  for (int j = 0; j <= a; ++j) Mnew_(j) = (j * h_) * source(j);
  if (k_ == 0) {
    A_.head(a + 1).setZero();
    B_.head(a + 1).setZero();
  } else {
    for (int j = 0; j <= a; ++j) {
      const double Ap1 = (j + 1 <= n_r_) ? A_(j + 1) : 0.0;
      const double Mp1 = (j + 1 <= n_r_) ? Mprev_(j + 1) : 0.0;
      Anew_(j) = Ap1 + 0.5 * h_ * (Mp1 + Mnew_(j));
      const double Bm1 = (j == 0) ? -A_(1) : B_(j - 1);
      const double Mm1 = (j == 0) ? -Mprev_(1) : Mprev_(j - 1);
      Bnew_(j) = Bm1 + 0.5 * h_ * (Mm1 + Mnew_(j));
    }
    std::swap(A_, Anew_);
    std::swap(B_, Bnew_);
  }
  Pphi_(k_) += 0.5 * phi0;
  for (int j = 0; j <= a; ++j) {
    Kp_(j) = 0.5 * (A_(j) + B_(j));
    Km_(j) = 0.5 * (A_(j) - B_(j));
  }
  rinvK0_ = h_ * Pphi_(k_);
}

void KernelSweep::end_level(const Eigen::ArrayXd* phirow) {
  if (phase_ != 2) throw SequencingError("KernelSweep: set_row first");
  const int a = active();
  if (phirow != nullptr && phirow->size() < a + 1)
    throw DomainError("KernelSweep: phirow too short");
  const double wgt = (k_ == 0) ? 0.5 : 1.0;
  const int mmax = std::min(a, n_t_ + 1 - k_);
  for (int m = 1; m <= mmax; ++m) {
    PM_(k_ + m) += wgt * Mnew_(m);
    if (phirow != nullptr) Pphi_(k_ + m) += wgt * (*phirow)(m);
  }
  std::swap(Mprev_, Mnew_);
  phase_ = 0;
}

void GridSource::push_level(const Eigen::ArrayXd& row) {
  if (row.size() != n_r_ + 1)
    throw DomainError("GridSource: row size must be n_r + 1");
  rows_.push_back(row);
}

double GridSource::at(int level, int m) const {
  if (level < 0 || level >= levels())
    throw SequencingError("GridSource: level not pushed yet");
  if (m < 0) m = -m;
  if (m > n_r_) return 0.0;
  return rows_[level](m);
}

std::pair<double, double> free_field(const RadialProfile& f,
                                     const RadialProfile& g, double t,
                                     double r) {
  if (t < 0.0) throw DomainError("free_field: t must be >= 0");
  if (r < 0.0) throw DomainError("free_field: r must be >= 0");
  return {free_value(f, g, t, r), free_dt(f, g, t, r)};
}

double free_field_drv(const RadialProfile& f, const RadialProfile& g, double t,
                      double r) {
  if (t < 0.0) throw DomainError("free_field_drv: t must be >= 0");
  if (r < 0.0) throw DomainError("free_field_drv: r must be >= 0");
  return free_drv_impl(f, g, t, r);
}

double apply_L(const GridSource& source, double h, int k, int j) {
  if (!(h > 0.0)) throw DomainError("apply_L: h must be > 0");
  if (k < 0 || j < 0) throw DomainError("apply_L: negative node index");
  if (k >= source.levels())
    throw SequencingError("apply_L: source lacks requested levels");
  if (j == 0) {
    double tot = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double wo = (i == 0 || i == k) ? 0.5 : 1.0;
      tot += wo * ((k - i) * h) * source.at(i, k - i);
    }
    return h * tot;
  }
  double tot = 0.0;
  for (int i = 0; i <= k; ++i) {
    const int l = k - i;
    if (l == 0) continue;  // inner interval degenerates at s = t
    const int mlo = std::abs(j - l), mhi = j + l;
    double inner = 0.0;
    for (int m = mlo; m <= mhi; ++m) {
      const double wgt = (m == mlo || m == mhi) ? 0.5 : 1.0;
      inner += wgt * (m * h) * source.at(i, m);
    }
    const double wo = (i == 0 || i == k) ? 0.5 : 1.0;
    tot += wo * inner * h;
  }
  return tot * h / (2.0 * j * h);
}

double apply_K(int sgn, const GridSource& source, double h, int k, int j) {
  if (sgn != 1 && sgn != -1) throw DomainError("apply_K: sign must be +-1");
  if (!(h > 0.0)) throw DomainError("apply_K: h must be > 0");
  if (k < 0 || j < 0) throw DomainError("apply_K: negative node index");
  if (k >= source.levels())
    throw SequencingError("apply_K: source lacks requested levels");
  if (k == 0) return 0.0;  // zero-width time interval
  double tot = 0.0;
  for (int i = 0; i <= k; ++i) {
    const int l = k - i;
    const int xp = j + l, xm = j - l;
    const double vp = (xp * h) * source.at(i, xp);
    const double vm = (xm * h) * source.at(i, xm);
    const double wo = (i == 0 || i == k) ? 0.5 : 1.0;
    tot += wo * (vp + sgn * vm);
  }
  return 0.5 * h * tot;
}

SolveReport march(double eps, const DataSet& data,
                  const CharacteristicGrid& grid, double p, double q,
                  double blowup_threshold, const MarchOptions& opt) {
  if (eps < 0.0) throw DomainError("march: eps must be >= 0");
  if (!(p > 1.0) || !(q > 1.0)) throw DomainError("march: need p, q > 1");
  if (!(blowup_threshold > 0.0))
    throw DomainError("march: blowup_threshold must be > 0");
  const double support = data.max_support();
  if (grid.n_r * grid.h + 1e-12 < grid.n_t * grid.h + support)
    throw DomainError("march: grid does not close over the data cone");

  const double h = grid.h;
  const int nt = grid.n_t, nr = grid.n_r;
  const int pad = static_cast<int>(std::ceil(support / h)) + 6;
  const double mu = resolve_mu(opt.mu, p, q);
  const WeightSet W(mu, p);
  const double floor_ = blowup_threshold * std::max(eps, 1e-8);
  const std::set<int> snaps(opt.snapshot_levels.begin(),
                            opt.snapshot_levels.end());

  KernelSweep sv(nr, h, nt, pad);  // carries |v|^q: feeds u and w
  KernelSweep sw(nr, h, nt, pad);  // carries |w|^p: feeds v and dv
  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(nr + 1);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(nr + 1);
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(nr + 1);
  Eigen::ArrayXd dv = Eigen::ArrayXd::Zero(nr + 1);
  Eigen::ArrayXd srcv = Eigen::ArrayXd::Zero(nr + 1);
  Eigen::ArrayXd srcw = Eigen::ArrayXd::Zero(nr + 1);
  Eigen::ArrayXd phirow = Eigen::ArrayXd::Zero(nr + 1);

  SolveReport rep;
  rep.grid = grid;
  rep.outcome = Outcome::CompletedHorizon;
  const bool nonlin = opt.nonlinearity;
  int last_level = 0;

  for (int k = 0; k <= nt; ++k) {
    const double t = k * h;
    const int a = (pad < 0) ? nr : std::min(nr, k + pad);
    sv.begin_level();
    sw.begin_level();

    if (k == 0) {
      for (int j = 0; j <= a; ++j) {
        u(j) = eps * data.f.value(j * h);
        v(j) = eps * data.ft.value(j * h);
      }
    } else {
      u(0) = eps * free_value(data.f, data.g, t, 0.0) +
             (nonlin ? sv.L_axis() : 0.0);
      v(0) = eps * free_value(data.ft, data.gt, t, 0.0) +
             (nonlin ? sw.L_axis() : 0.0);
      for (int j = 1; j <= a; ++j) {
        const double r = j * h;
        u(j) = eps * free_value(data.f, data.g, t, r) +
               (nonlin ? sv.L_row()(j) : 0.0);
        v(j) = eps * free_value(data.ft, data.gt, t, r) +
               (nonlin ? sw.L_row()(j) : 0.0);
      }
    }

    if (nonlin)
      for (int j = 0; j <= a; ++j) srcv(j) = pow_abs(v(j), q);
    sv.set_row(srcv, srcv(0));

    if (k == 0) {
      for (int j = 0; j <= a; ++j) w(j) = eps * data.g.value(j * h);
    } else {
      w(0) = eps * free_dt(data.f, data.g, t, 0.0) +
             (nonlin ? sv.rinv_Kp_axis() : 0.0);
      for (int j = 1; j <= a; ++j) {
        w(j) = eps * free_dt(data.f, data.g, t, j * h) +
               (nonlin ? sv.Kp_row()(j) / (j * h) : 0.0);
      }
    }

    if (nonlin)
      for (int j = 0; j <= a; ++j) srcw(j) = pow_abs(w(j), p);
    sw.set_row(srcw);

    dv(0) = 0.0;
    for (int j = 1; j <= a; ++j) {
      dv(j) = eps * free_drv_impl(data.ft, data.gt, t, j * h) +
              (nonlin ? sw.Km_row()(j) : 0.0) - v(j);
    }

    if (nonlin) {
      for (int j = 0; j <= a; ++j)
        phirow(j) = srcv(j) + pow_abs_d(v(j), q) * dv(j);
      sv.end_level(&phirow);
    } else {
      sv.end_level(nullptr);
    }
    sw.end_level(nullptr);

    last_level = k;
    rep.ts.push_back(t);
    if (opt.track_norms)
      rep.norm_history.push_back(norms_arrays(w, v, dv, a, t, h, W));
    if (opt.track_fg) rep.fg_history.push_back(fg_arrays(u, v, w, a, h, p, q));
    if (snaps.count(k)) {
      FieldState st;
      st.level = k;
      st.h = h;
      st.u = u.head(a + 1);
      st.v = v.head(a + 1);
      st.w = w.head(a + 1);
      st.dv = dv.head(a + 1);
      rep.snapshots.emplace(k, std::move(st));
    }

    double mx = 0.0;
    for (int j = 0; j <= a; ++j)
      mx = std::max(mx, std::max(std::abs(w(j)), std::abs(v(j))));
    if (!std::isfinite(mx)) {
      rep.outcome = Outcome::NumericalDivergence;
      rep.t_low = rep.t_high = t;
      break;
    }
    if (mx > floor_) {
      rep.outcome = Outcome::BlowupDetected;
      rep.t_low = std::max(0.0, t - h);
      rep.t_high = t;
      break;
    }
  }

  {
    const int a = (pad < 0) ? nr : std::min(nr, last_level + pad);
    rep.final_state.level = last_level;
    rep.final_state.h = h;
    rep.final_state.u = u.head(a + 1);
    rep.final_state.v = v.head(a + 1);
    rep.final_state.w = w.head(a + 1);
    rep.final_state.dv = dv.head(a + 1);
  }

  if (rep.outcome == Outcome::BlowupDetected && opt.confirm_bracket) {
    CharacteristicGrid fine =
        CharacteristicGrid::make(h / 2.0, nt * 2, nr * 2);
    MarchOptions o2;
    o2.mu = mu;
    o2.nonlinearity = opt.nonlinearity;
    o2.track_norms = false;
    o2.track_fg = false;
    SolveReport fine_rep = march(eps, data, fine, p, q, blowup_threshold, o2);
    if (fine_rep.outcome == Outcome::BlowupDetected) {
      const double mid1 = 0.5 * (rep.t_low + rep.t_high);
      const double mid2 = 0.5 * (fine_rep.t_low + fine_rep.t_high);
      rep.bracket_confirmed = std::abs(mid2 - mid1) <= 2.0 * h;
      rep.t_low = fine_rep.t_low;
      rep.t_high = fine_rep.t_high;
    }
  }
  return rep;
}

NormTriple weighted_norms(const FieldState& state, const WeightSet& weights) {
  const int a = static_cast<int>(state.w.size()) - 1;
  if (a < 0 || state.v.size() != a + 1 || state.dv.size() != a + 1)
    throw DomainError("weighted_norms: inconsistent state arrays");
  return norms_arrays(state.w, state.v, state.dv, a, state.t(), state.h,
                      weights);
}

FGQuad functionals_FG(const FieldState& state, double p, double q) {
  const int a = static_cast<int>(state.u.size()) - 1;
  if (a < 0 || state.v.size() != a + 1 || state.w.size() != a + 1)
    throw DomainError("functionals_FG: inconsistent state arrays");
  return fg_arrays(state.u, state.v, state.w, a, state.h, p, q);
}

PicardReport picard_run(double eps, const DataSet& data,
                        const CharacteristicGrid& grid, double p, double q,
                        int n_iters, double mu_opt) {
  if (n_iters < 2) throw DomainError("picard_run: n_iters must be >= 2");
  if (eps < 0.0) throw DomainError("picard_run: eps must be >= 0");
  if (!(p > 1.0) || !(q > 1.0)) throw DomainError("picard_run: need p, q > 1");
  const double support = data.max_support();
  if (grid.n_r * grid.h + 1e-12 < grid.n_t * grid.h + support)
    throw DomainError("picard_run: grid does not close over the data cone");

  const double h = grid.h;
  const int nt = grid.n_t, nr = grid.n_r;
  const int pad = static_cast<int>(std::ceil(support / h)) + 6;
  const double mu = resolve_mu(mu_opt, p, q);
  const WeightSet W(mu, p);
  auto act = [&](int k) { return std::min(nr, k + pad); };

  // Frozen free-field tables over the box.
  std::vector<Eigen::ArrayXd> W0(nt + 1), V0(nt + 1), D0(nt + 1);
  for (int k = 0; k <= nt; ++k) {
    const double t = k * h;
    const int a = act(k);
    W0[k] = Eigen::ArrayXd::Zero(nr + 1);
    V0[k] = Eigen::ArrayXd::Zero(nr + 1);
    D0[k] = Eigen::ArrayXd::Zero(nr + 1);
    if (k == 0) {
      for (int j = 0; j <= a; ++j) {
        W0[k](j) = eps * data.g.value(j * h);
        V0[k](j) = eps * data.ft.value(j * h);
        D0[k](j) = eps * free_drv_impl(data.ft, data.gt, t, j * h);
      }
    } else {
      for (int j = 0; j <= a; ++j) {
        W0[k](j) = eps * free_dt(data.f, data.g, t, j * h);
        V0[k](j) = eps * free_value(data.ft, data.gt, t, j * h);
        D0[k](j) = eps * free_drv_impl(data.ft, data.gt, t, j * h);
      }
    }
  }

  std::vector<Eigen::ArrayXd> cur_w = W0, cur_v = V0;
  std::vector<Eigen::ArrayXd> prev_w, prev_v, prev_dv;
  std::vector<Eigen::ArrayXd> next_w(nt + 1), next_v(nt + 1), dv_m(nt + 1);

  PicardReport rep;
  for (int m = 0; m <= n_iters; ++m) {
    KernelSweep sv(nr, h, nt, pad), sw(nr, h, nt, pad);
    Eigen::ArrayXd srcv = Eigen::ArrayXd::Zero(nr + 1);
    Eigen::ArrayXd srcw = Eigen::ArrayXd::Zero(nr + 1);
    Eigen::ArrayXd phirow = Eigen::ArrayXd::Zero(nr + 1);
    bool finite = true;
    for (int k = 0; k <= nt; ++k) {
      const int a = act(k);
      sv.begin_level();
      sw.begin_level();
      for (int j = 0; j <= a; ++j) {
        srcv(j) = pow_abs(cur_v[k](j), q);
        srcw(j) = pow_abs(cur_w[k](j), p);
      }
      sv.set_row(srcv, srcv(0));
      sw.set_row(srcw);
      dv_m[k] = Eigen::ArrayXd::Zero(nr + 1);
      dv_m[k](0) = 0.0;
      for (int j = 1; j <= a; ++j)
        dv_m[k](j) = D0[k](j) + sw.Km_row()(j) - cur_v[k](j);
      next_w[k] = Eigen::ArrayXd::Zero(nr + 1);
      next_v[k] = Eigen::ArrayXd::Zero(nr + 1);
      next_w[k](0) = W0[k](0) + sv.rinv_Kp_axis();
      next_v[k](0) = V0[k](0) + sw.L_axis();
      for (int j = 1; j <= a; ++j) {
        next_w[k](j) = W0[k](j) + sv.Kp_row()(j) / (j * h);
        next_v[k](j) = V0[k](j) + sw.L_row()(j);
      }
      for (int j = 0; j <= a; ++j)
        phirow(j) = srcv(j) + pow_abs_d(cur_v[k](j), q) * dv_m[k](j);
      sv.end_level(&phirow);
      sw.end_level(nullptr);
      if (!next_w[k].allFinite() || !next_v[k].allFinite()) finite = false;
    }

    if (m >= 1) {
      double d1 = 0.0, d2 = 0.0, d3 = 0.0;
      for (int k = 0; k <= nt; ++k) {
        const double t = k * h;
        const int a = act(k);
        for (int j = 0; j <= a; ++j) {
          const double r = j * h;
          d1 = std::max(d1, W.w1(t, r) * std::abs(cur_w[k](j) - prev_w[k](j)));
          d2 = std::max(d2, W.w2(t, r) * std::abs(cur_v[k](j) - prev_v[k](j)));
          d3 = std::max(d3,
                        W.w3(t, r) * std::abs(dv_m[k](j) - prev_dv[k](j)));
        }
      }
      const double diff = d1 + d2 + d3;
      rep.diffs.push_back(diff);
      if (!std::isfinite(diff)) {
        rep.diverged = true;
        break;
      }
    }

    prev_w = cur_w;
    prev_v = cur_v;
    prev_dv = dv_m;
    if (!finite) {
      // one more difference entry against the non-finite iterate would be
      // meaningless; flag and stop
      rep.diverged = true;
      break;
    }
    if (m < n_iters) {
      cur_w = next_w;
      cur_v = next_v;
    }
  }

  for (std::size_t i = 0; i + 1 < rep.diffs.size(); ++i)
    rep.ratios.push_back(rep.diffs[i] > 0.0 ? rep.diffs[i + 1] / rep.diffs[i]
                                            : 0.0);
  int rises = 0;
  for (std::size_t i = 0; i + 1 < rep.diffs.size(); ++i) {
    rises = rep.diffs[i + 1] > rep.diffs[i] ? rises + 1 : 0;
    if (rises >= 3) rep.diverged = true;
  }
  rep.w = cur_w;
  rep.v = cur_v;
  rep.dv = dv_m;
  return rep;
}

void write_snapshot_csv(const SolveReport& report, int level,
                        std::ostream& os) {
  auto it = report.snapshots.find(level);
  if (it == report.snapshots.end())
    throw DomainError("write_snapshot_csv: level was not captured");
  const FieldState& st = it->second;
  os << "t,r,u,v,w,dv\n";
  os << std::setprecision(17);
  for (int j = 0; j < st.u.size(); ++j) {
    os << st.t() << ',' << j * st.h << ',' << st.u(j) << ',' << st.v(j) << ','
       << st.w(j) << ',' << st.dv(j) << '\n';
  }
}

}  // namespace wavesys
