#include "pucci/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pucci {

namespace {

std::size_t knot_segment(const std::vector<double>& r_knots, double r) {
  auto it = std::upper_bound(r_knots.begin(), r_knots.end(), r);
  std::size_t k = static_cast<std::size_t>(it - r_knots.begin());
  if (k == 0) k = 1;
  if (k >= r_knots.size()) k = r_knots.size() - 1;
  return k - 1;
}

double hermite(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double w = x1 - x0;
  const double t = (x - x0) / w;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * w * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * w * d1;
}

}  // namespace

double RadialProfile::g(double r) const {
  r = std::clamp(r, 0.0, R);
  if (r <= head_r0 || r_knots.size() < 2)
    return 1.0 - head_c * std::pow(r, head_q);
  const std::size_t k = knot_segment(r_knots, r);
  return hermite(r_knots[k], r_knots[k + 1], g_knots[k], g_knots[k + 1], gp_knots[k],
                 gp_knots[k + 1], r);
}

double RadialProfile::gp(double r) const {
  r = std::clamp(r, 0.0, R);
  if (r <= head_r0 || r_knots.size() < 2)
    return -head_c * head_q * std::pow(r, head_q - 1.0);
  const std::size_t k = knot_segment(r_knots, r);
  return hermite(r_knots[k], r_knots[k + 1], gp_knots[k], gp_knots[k + 1], gpp_knots[k],
                 gpp_knots[k + 1], r);
}

double RadialProfile::gpp(double r) const {
  r = std::clamp(r, 0.0, R);
  if (have_equation && r > 1e-9 * R) {
    const double gg = g(r), vv = gp(r);
    const double gpos = std::max(gg, 0.0);
    const double av = std::max(std::abs(vv), 1e-300);
    double S = -eq_lambda * std::pow(gpos, 1.0 + eq_alpha) / std::pow(av, eq_alpha);
    if (dim > 1) {
      const double t = vv / r;
      const double w = eq_plus ? (t < 0.0 ? eq_a : eq_A) : (t < 0.0 ? eq_A : eq_a);
      S -= (dim - 1) * w * t;
    }
    const double w_neg = eq_plus ? eq_a : eq_A;
    const double w_pos = eq_plus ? eq_A : eq_a;
    return S < 0.0 ? S / w_neg : S / w_pos;
  }
  if (r <= head_r0 || r_knots.size() < 2)
    return -head_c * head_q * (head_q - 1.0) * std::pow(r, head_q - 2.0);
  const std::size_t k = knot_segment(r_knots, r);
  const double t = (r - r_knots[k]) / (r_knots[k + 1] - r_knots[k]);
  return (1.0 - t) * gpp_knots[k] + t * gpp_knots[k + 1];
}

double radial_F(const OperatorSpec& op, int dim, double r, double gp, double gpp) {
  op.validate();
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(r > 0.0)) throw std::domain_error("radial evaluation has a pole at r = 0");
  const bool plus = op.sign == ExtremalSign::Plus;
  auto phi = [&](double t) {
    if (plus) return t < 0.0 ? op.a * t : op.A * t;
    return t < 0.0 ? op.A * t : op.a * t;
  };
  const double bracket = phi(gpp) + (dim - 1) * phi(gp / r);
  const double ag = std::abs(gp);
  if (op.alpha == 0.0) return bracket;
  if (ag == 0.0) {
    if (op.alpha > 0.0) return 0.0;
    throw std::domain_error("gradient factor is singular at g' = 0 for alpha < 0");
  }
  return std::pow(ag, op.alpha) * bracket;
}

double eigen_upper_bound(const OperatorSpec& op, int dim, double R) {
  op.validate();
  if (!(R > 0.0)) throw std::invalid_argument("radius must be > 0");
  const double alpha = op.alpha;
  const double q = (alpha + 2.0) / (alpha + 1.0);

  auto sigma = [&](double r) {
    const double d = std::pow(r, q) - std::pow(R, q);
    return d * d / (2.0 * q);
  };
  auto sigma_p = [&](double r) {
    return std::pow(r, 2.0 * q - 1.0) - std::pow(r, q - 1.0) * std::pow(R, q);
  };
  auto sigma_pp = [&](double r) {
    return (2.0 * q - 1.0) * std::pow(r, 2.0 * q - 2.0) -
           (q - 1.0) * std::pow(r, q - 2.0) * std::pow(R, q);
  };
  auto ratio = [&](double r) {
    return -radial_F(op, dim, r, sigma_p(r), sigma_pp(r)) / std::pow(sigma(r), 1.0 + alpha);
  };

  constexpr int kSamples = 2048;
  double best = -std::numeric_limits<double>::infinity();
  int arg = 1;
  for (int k = 1; k <= kSamples; ++k) {
    const double r = R * k / (kSamples + 1.0);
    const double v = ratio(r);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  // golden-section polish on the bracketing samples
  double lo = R * std::max(arg - 1, 1) / (kSamples + 1.0);
  double hi = R * std::min(arg + 1, kSamples) / (kSamples + 1.0);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double t1 = hi - gr * (hi - lo), t2 = lo + gr * (hi - lo);
  double f1 = ratio(t1), f2 = ratio(t2);
  for (int it = 0; it < 120 && (hi - lo) > 1e-10 * R; ++it) {
    if (f1 > f2) {
      hi = t2; t2 = t1; f2 = f1;
      t1 = hi - gr * (hi - lo);
      f1 = ratio(t1);
    } else {
      lo = t1; t1 = t2; f1 = f2;
      t2 = lo + gr * (hi - lo);
      f2 = ratio(t2);
    }
  }
  return std::max(best, std::max(f1, f2));
}

namespace {

struct RadialOde {
  double a, A, alpha, lambda;
  int dim;
  bool plus;

  double weight_at_origin() const { return plus ? a : A; }

  // w(g'') g'' = -lambda g^(1+alpha)/|g'|^alpha - (dim-1) phi(g'/r)
  double rhs_S(double r, double g, double v) const {
    const double gpos = std::max(g, 0.0);
    const double g1a = std::pow(gpos, 1.0 + alpha);
    const double av = std::max(std::abs(v), 1e-300);
    double S = -lambda * g1a / std::pow(av, alpha);
    if (dim > 1) {
      const double t = v / r;
      const double w = plus ? (t < 0.0 ? a : A) : (t < 0.0 ? A : a);
      S -= (dim - 1) * w * t;
    }
    return S;
  }

  double gpp_from_S(double S) const {
    const double w_neg = plus ? a : A;
    const double w_pos = plus ? A : a;
    return S < 0.0 ? S / w_neg : S / w_pos;
  }

  void eval(double r, const double y[2], double dydr[2]) const {
    dydr[0] = y[1];
    dydr[1] = gpp_from_S(rhs_S(r, y[0], y[1]));
  }
};

struct ShootOutcome {
  bool feasible = false;  // reached r = R with g > 0
  std::vector<double> r, g, v;
};

// Dormand-Prince 5(4) step
void dopri_step(const RadialOde& ode, double r, const double y[2], double dt, double out[2],
                double err[2]) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2];
  ode.eval(r, y, k1);
  for (int i = 0; i < 2; ++i) yt[i] = y[i] + dt * (1.0 / 5) * k1[i];
  ode.eval(r + c2 * dt, yt, k2);
  for (int i = 0; i < 2; ++i) yt[i] = y[i] + dt * (3.0 / 40 * k1[i] + 9.0 / 40 * k2[i]);
  ode.eval(r + c3 * dt, yt, k3);
  for (int i = 0; i < 2; ++i)
    yt[i] = y[i] + dt * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
  ode.eval(r + c4 * dt, yt, k4);
  for (int i = 0; i < 2; ++i)
    yt[i] = y[i] + dt * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] +
                         64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
  ode.eval(r + c5 * dt, yt, k5);
  for (int i = 0; i < 2; ++i)
    yt[i] = y[i] + dt * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] + 46732.0 / 5247 * k3[i] +
                         49.0 / 176 * k4[i] - 5103.0 / 18656 * k5[i]);
  ode.eval(r + dt, yt, k6);
  for (int i = 0; i < 2; ++i)
    out[i] = y[i] + dt * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                          2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
  ode.eval(r + dt, out, k7);
  // difference against the embedded 4th-order solution
  const double b1 = 35.0 / 384 - 5179.0 / 57600, b3 = 500.0 / 1113 - 7571.0 / 16695,
               b4 = 125.0 / 192 - 393.0 / 640, b5 = -2187.0 / 6784 + 92097.0 / 339200,
               b6 = 11.0 / 84 - 187.0 / 2100, b7 = -1.0 / 40;
  for (int i = 0; i < 2; ++i)
    err[i] = dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i] + b7 * k7[i]);
}

ShootOutcome integrate_profile(const RadialOde& ode, double R, double r0_frac, double rel_tol,
                               double abs_tol, bool store) {
  ShootOutcome out;
  // dense knots on stored runs keep the profile interpolants accurate
  const double dt_max = store ? R / 1024.0 : R;
  const double qq = (ode.alpha + 2.0) / (ode.alpha + 1.0);
  const double w0 = ode.weight_at_origin();
  const double c =
      std::pow(ode.lambda / (w0 * (ode.dim + qq - 2.0)), 1.0 / (1.0 + ode.alpha)) / qq;

  const double r0 = r0_frac * R;
  double r = r0;
  double y[2] = {1.0 - c * std::pow(r0, qq), -c * qq * std::pow(r0, qq - 1.0)};

  if (store) {
    out.r.push_back(r);
    out.g.push_back(y[0]);
    out.v.push_back(y[1]);
  }

  double dt = 1e-2 * R;
  const double dt_min = 1e-13 * R;
  int guard = 0;
  while (r < R && ++guard < 2000000) {
    dt = std::min({dt, R - r, dt_max});
    double ynew[2], err[2];
    dopri_step(ode, r, y, dt, ynew, err);
    const double sc0 = abs_tol + rel_tol * std::max(std::abs(y[0]), std::abs(ynew[0]));
    const double sc1 = abs_tol + rel_tol * std::max(std::abs(y[1]), std::abs(ynew[1]));
    const double e = std::sqrt(0.5 * ((err[0] / sc0) * (err[0] / sc0) +
                                      (err[1] / sc1) * (err[1] / sc1)));
    if (e > 1.0 && dt > dt_min) {
      dt = std::max(dt * std::max(0.2, 0.9 * std::pow(e, -0.25)), dt_min);
      continue;
    }
    // locate the weight switch (sign change of S) by shrinking the step
    const double S0 = ode.rhs_S(r, y[0], y[1]);
    const double S1 = ode.rhs_S(r + dt, ynew[0], ynew[1]);
    if (S0 != 0.0 && S1 != 0.0 && ((S0 < 0.0) != (S1 < 0.0)) && dt > 64.0 * dt_min) {
      dt *= 0.5;
      continue;
    }
    // zero crossing of g: bisect the step to the crossing and stop
    if (ynew[0] <= 0.0) {
      double lo = 0.0, hi = dt;
      double ycross[2] = {ynew[0], ynew[1]};
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        double ymid[2], edum[2];
        dopri_step(ode, r, y, mid, ymid, edum);
        if (ymid[0] > 0.0) lo = mid;
        else {
          hi = mid;
          ycross[0] = ymid[0];
          ycross[1] = ymid[1];
        }
      }
      r += hi;
      y[0] = ycross[0];
      y[1] = ycross[1];
      if (store) {
        out.r.push_back(r);
        out.g.push_back(y[0]);
        out.v.push_back(y[1]);
      }
      out.feasible = false;
      return out;
    }
    r += dt;
    y[0] = ynew[0];
    y[1] = ynew[1];
    if (store) {
      out.r.push_back(r);
      out.g.push_back(y[0]);
      out.v.push_back(y[1]);
    }
    if (e > 1e-30) dt *= std::min(5.0, 0.9 * std::pow(e, -0.2));
  }
  out.feasible = y[0] > 0.0;
  if (!store) {
    out.r.assign(1, r);
    out.g.assign(1, y[0]);
    out.v.assign(1, y[1]);
  }
  return out;
}

}  // namespace

EigenResult shoot_eigenvalue(const OperatorSpec& op, int dim, double R, double tol,
                             const ShootOptions& opts) {
  op.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(R > 0.0)) throw std::invalid_argument("radius must be > 0");
  const double bound = eigen_upper_bound(op, dim, R);

  auto feasible = [&](double lambda) {
    if (lambda <= 0.0) return true;  // g stays at 1
    RadialOde ode{op.a, op.A, op.alpha, lambda, dim, op.sign == ExtremalSign::Plus};
    return integrate_profile(ode, R, opts.series_fraction, opts.ode_rel_tol, opts.ode_abs_tol,
                             false)
        .feasible;
  };

  double lo = 0.0, hi = 2.0 * bound;
  if (feasible(hi)) throw std::runtime_error("eigenvalue bracket failure: upper endpoint feasible");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) lo = mid;
    else hi = mid;
  }

  EigenResult res;
  res.lambda_lo = lo;
  res.lambda_hi = hi;
  res.lambda_hat = 0.5 * (lo + hi);

  // profile from the feasible endpoint: positive on [0, R)
  const double lam_prof = lo > 0.0 ? lo : res.lambda_hat;
  RadialOde ode{op.a, op.A, op.alpha, lam_prof, dim, op.sign == ExtremalSign::Plus};
  ShootOutcome sh = integrate_profile(ode, R, opts.series_fraction, opts.ode_rel_tol,
                                      opts.ode_abs_tol, true);

  RadialProfile prof;
  prof.R = R;
  prof.dim = dim;
  prof.head_q = (op.alpha + 2.0) / (op.alpha + 1.0);
  prof.head_c = std::pow(lam_prof / (ode.weight_at_origin() * (dim + prof.head_q - 2.0)),
                         1.0 / (1.0 + op.alpha)) /
                prof.head_q;
  prof.head_r0 = opts.series_fraction * R;
  prof.r_knots = std::move(sh.r);
  prof.g_knots = std::move(sh.g);
  prof.gp_knots = std::move(sh.v);
  prof.gpp_knots.resize(prof.r_knots.size());
  for (std::size_t k = 0; k < prof.r_knots.size(); ++k)
    prof.gpp_knots[k] = ode.gpp_from_S(ode.rhs_S(prof.r_knots[k], prof.g_knots[k], prof.gp_knots[k]));
  prof.have_equation = true;
  prof.eq_a = op.a;
  prof.eq_A = op.A;
  prof.eq_alpha = op.alpha;
  prof.eq_lambda = lam_prof;
  prof.eq_plus = op.sign == ExtremalSign::Plus;

  // sampled equation residual |F + lambda_hat g^(1+alpha)| away from the ends
  double resid = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double r = R * k / 1000.0;
    const double val = radial_F(op, dim, r, prof.gp(r), prof.gpp(r)) +
                       res.lambda_hat * std::pow(std::max(prof.g(r), 0.0), 1.0 + op.alpha);
    resid = std::max(resid, std::abs(val));
  }
  res.residual = resid;
  res.eigenfunction = std::move(prof);
  return res;
}

}  // namespace pucci
