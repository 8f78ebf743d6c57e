#include "dstsp/reeds_shepp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dstsp::rs {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
constexpr double zero = 1e-10;

constexpr Seg L = Seg::Left, S = Seg::Straight, R = Seg::Right, N = Seg::None;

constexpr std::array<std::array<Seg, 5>, 18> kTypes{{
    {L, R, L, N, N}, {R, L, R, N, N}, {L, R, L, R, N}, {R, L, R, L, N}, {L, R, S, L, N}, {R, L, S, R, N},
    {L, S, R, L, N}, {R, S, L, R, N}, {L, R, S, R, N}, {R, L, S, L, N}, {R, S, R, L, N}, {L, S, L, R, N},
    {L, S, R, N, N}, {R, S, L, N, N}, {L, S, L, N, N}, {R, S, R, N, N}, {L, R, S, L, R}, {R, L, S, R, L},
}};

struct V2 {
  double x, y;
};

double mod2pi(double x) {
  double v = std::fmod(x, two_pi);
  if (v < -pi) {
    v += two_pi;
  } else if (v > pi) {
    v -= two_pi;
  }
  return v;
}

void polar(double x, double y, double& r, double& theta) {
  r = std::sqrt(x * x + y * y);
  theta = std::atan2(y, x);
}

// Solves xi = a sin t + b cos t, eta = b sin t - a cos t for t.
void solve_heading(double a, double b, double xi, double eta, double& t) {
  t = mod2pi(std::atan2(a * xi + b * eta, b * xi - a * eta));
}

bool lp_sp_lp(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  polar(p.x - cs.y, p.y - 1.0 + cs.x, u, t);
  if (t >= -zero) {
    v = mod2pi(phi - t);
    if (v >= -zero) return true;
  }
  return false;
}

bool lp_sp_rp(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double t1, u1;
  polar(p.x + cs.y, p.y - 1.0 - cs.x, u1, t1);
  u1 = u1 * u1;
  if (u1 >= 4.0) {
    u = std::sqrt(u1 - 4.0);
    double theta = std::atan2(2.0, u);
    t = mod2pi(t1 + theta);
    v = mod2pi(t - phi);
    return t >= -zero && v >= -zero;
  }
  return false;
}

bool lp_rm_l(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double xi = p.x - cs.y, eta = p.y - 1.0 + cs.x, u1, theta;
  polar(xi, eta, u1, theta);
  if (u1 <= 4.0) {
    u = -2.0 * std::asin(0.25 * u1);
    t = mod2pi(theta + 0.5 * u + pi);
    v = mod2pi(phi - t + u);
    return t >= -zero && u <= zero;
  }
  return false;
}

bool lp_rup_lum_rm(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double xi = p.x + cs.y, eta = p.y - 1.0 - cs.x, rho = 0.25 * (2.0 + std::sqrt(xi * xi + eta * eta));
  if (rho <= 1.0) {
    u = std::acos(rho);
    solve_heading(2.0 * (1.0 - std::cos(u) + std::cos(2.0 * u)), 2.0 * (std::sin(u) - std::sin(2.0 * u)), xi, eta, t);
    v = mod2pi(t - 2.0 * u - phi);
    return t >= -zero && v <= zero;
  }
  return false;
}

bool lp_rum_lum_rp(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double xi = p.x + cs.y, eta = p.y - 1.0 - cs.x, rho = (20.0 - xi * xi - eta * eta) / 16.0;
  if (rho >= 0 && rho <= 1) {
    u = -std::acos(rho);
    if (u >= -0.5 * pi) {
      solve_heading(4.0 - 2.0 * std::cos(u), 2.0 * std::sin(u), xi, eta, t);
      v = mod2pi(t - phi);
      return t >= -zero && v >= -zero;
    }
  }
  return false;
}

bool lp_rm_sm_lm(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double xi = p.x - cs.y, eta = p.y - 1.0 + cs.x, rho, theta;
  polar(xi, eta, rho, theta);
  if (rho >= 2.0) {
    double r = std::sqrt(rho * rho - 4.0);
    u = 2.0 - r;
    t = mod2pi(theta + std::atan2(r, -2.0));
    v = mod2pi(phi - 0.5 * pi - t);
    return t >= -zero && u <= zero && v <= zero;
  }
  return false;
}

bool lp_rm_sm_rm(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double xi = p.x + cs.y, eta = p.y - 1.0 - cs.x, rho, theta;
  polar(-eta, xi, rho, theta);
  if (rho >= 2.0) {
    t = theta;
    u = 2.0 - rho;
    v = mod2pi(t + 0.5 * pi - phi);
    return t >= -zero && u <= zero && v <= zero;
  }
  return false;
}

bool lp_rm_s_lm_rp(V2 p, V2 cs, double phi, double& t, double& u, double& v) {
  double xi = p.x + cs.y, eta = p.y - 1.0 - cs.x, rho, theta;
  polar(xi, eta, rho, theta);
  if (rho >= 2.0) {
    u = 4.0 - std::sqrt(rho * rho - 4.0);
    if (u <= zero) {
      t = mod2pi(std::atan2((4.0 - u) * xi - 2.0 * eta, -2.0 * xi + (u - 4.0) * eta));
      v = mod2pi(t - phi);
      return t >= -zero && v >= -zero;
    }
  }
  return false;
}

class Search {
 public:
  Word best;

  Search() { best.total = std::numeric_limits<double>::infinity(); }

  void set(int type, double a, double b = 0, double c = 0, double d = 0, double e = 0) {
    best.types = kTypes[type];
    best.lengths = {a, b, c, d, e};
    best.total = std::fabs(a) + std::fabs(b) + std::fabs(c) + std::fabs(d) + std::fabs(e);
  }

  // The four symmetric variants of a formula: identity, timeflip, reflect,
  // timeflip + reflect.
  template <class F, class Emit>
  void variants(F formula, V2 p, V2 cs, double phi, double extra, Emit emit, double u_weight = 1.0) {
    const V2 flip{-p.x, p.y}, refl{p.x, -p.y}, both{-p.x, -p.y}, cs_neg{cs.x, -cs.y};
    double t, u, v;
    if (formula(p, cs, phi, t, u, v)) try_emit(t, u_weight * u, v, extra, emit, u, false, false);
    if (formula(flip, cs_neg, -phi, t, u, v)) try_emit(t, u_weight * u, v, extra, emit, u, true, false);
    if (formula(refl, cs_neg, -phi, t, u, v)) try_emit(t, u_weight * u, v, extra, emit, u, false, true);
    if (formula(both, cs, phi, t, u, v)) try_emit(t, u_weight * u, v, extra, emit, u, true, true);
  }

 private:
  template <class Emit>
  void try_emit(double t, double u_len, double v, double extra, Emit emit, double u, bool timeflip, bool reflect) {
    double len = std::fabs(t) + std::fabs(u_len) + std::fabs(v) + extra;
    if (len < best.total) emit(timeflip, reflect, t, u, v);
  }
};

void csc(Search& s, V2 p, V2 cs, double phi) {
  s.variants(lp_sp_lp, p, cs, phi, 0.0, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 15 : 14, g * t, g * u, g * v);
  });
  s.variants(lp_sp_rp, p, cs, phi, 0.0, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 13 : 12, g * t, g * u, g * v);
  });
}

void ccc(Search& s, V2 p, V2 cs, double phi) {
  s.variants(lp_rm_l, p, cs, phi, 0.0, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 1 : 0, g * t, g * u, g * v);
  });
  const V2 back{p.x * cs.x + p.y * cs.y, p.x * cs.y - p.y * cs.x};
  s.variants(lp_rm_l, back, cs, phi, 0.0, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 1 : 0, g * v, g * u, g * t);
  });
}

void cccc(Search& s, V2 p, V2 cs, double phi) {
  s.variants(lp_rup_lum_rm, p, cs, phi, 0.0, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 3 : 2, g * t, g * u, -g * u, g * v);
  }, 2.0);
  s.variants(lp_rum_lum_rp, p, cs, phi, 0.0, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 3 : 2, g * t, g * u, g * u, g * v);
  }, 2.0);
}

// Length accounting for CCSC and CCSCC: the extra count covers the fixed
// quarter turns, which the formulas do not return.
void ccsc(Search& s, V2 p, V2 cs, double phi) {
  const double h = 0.5 * pi;
  s.variants(lp_rm_sm_lm, p, cs, phi, h, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 5 : 4, g * t, -g * h, g * u, g * v);
  });
  s.variants(lp_rm_sm_rm, p, cs, phi, h, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 9 : 8, g * t, -g * h, g * u, g * v);
  });
  const V2 back{p.x * cs.x + p.y * cs.y, p.x * cs.y - p.y * cs.x};
  s.variants(lp_rm_sm_lm, back, cs, phi, h, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 7 : 6, g * v, g * u, -g * h, g * t);
  });
  s.variants(lp_rm_sm_rm, back, cs, phi, h, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 11 : 10, g * v, g * u, -g * h, g * t);
  });
}

void ccscc(Search& s, V2 p, V2 cs, double phi) {
  const double h = 0.5 * pi;
  s.variants(lp_rm_s_lm_rp, p, cs, phi, pi, [&](bool tf, bool rf, double t, double u, double v) {
    double g = tf ? -1.0 : 1.0;
    s.set(rf ? 17 : 16, g * t, -g * h, g * u, -g * h, g * v);
  });
}

}  // namespace

Word shortest(double x, double y, double phi) {
  Search s;
  const V2 p{x, y}, cs{std::cos(phi), std::sin(phi)};
  csc(s, p, cs, phi);
  ccc(s, p, cs, phi);
  cccc(s, p, cs, phi);
  ccsc(s, p, cs, phi);
  ccscc(s, p, cs, phi);
  return s.best;
}

}  // namespace dstsp::rs
