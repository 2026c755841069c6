// L1 sparsification of the AND/OR split.
//
// The loss sum_T |I^and_T| + |I^or_T| is linear in (gamma, delta) under an
// absolute value, so it is solved as the equivalent problem over the effects
// themselves:
//
//   min |a|_1 + |o|_1   s.t.   |K(a, o) - y|_inf <= zeta,
//
// with a = AND effects (T != empty), o = OR effects (|T| >= 2; an order-1 OR
// effect is the same function as the order-1 AND effect), y = v - v(x_empty),
// and K(a, o)[S] = sum_{0 != T subset S} a_T + sum_{T cap S != 0} o_T. Any
// feasible (a, o) maps back to a decomposition with u^and = v(x_empty) +
// zeta(a) and delta = y - K(a, o) clipped to the box.
//
// The solver is a diagonally preconditioned primal-dual iteration; the dual
// variable lives on the 2^n - 1 table entries and K, K^T cost four
// subset-sum transforms per step. At each checkpoint the current iterate and
// a least-squares refit on its support are mapped back to decompositions,
// re-extracted in closed form, and scored; the best one is kept.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "andor/errors.hpp"
#include "andor/extraction.hpp"

namespace andor {

namespace {

constexpr std::size_t kMaxPolishSupport = 160;
constexpr int kMaxPolishVariables = 14;

class EffectSpaceSolver {
 public:
  EffectSpaceSolver(const ValueTable& v, double zeta, double step)
      : v_(v),
        n_(v.n()),
        size_(table_size(n_)),
        full_(full_mask(n_)),
        zeta_(zeta),
        y_(size_),
        tau_and_(size_, 0.0),
        tau_or_(size_, 0.0),
        sigma_(size_, 0.0),
        inv_sigma_(size_, 0.0),
        or_weight_(size_, 0.0),
        scratch_(size_),
        scratch2_(size_) {
    const double v0 = v.empty_output();
    for (std::size_t s = 1; s < size_; ++s) y_[s] = v.values[static_cast<Mask>(s)] - v0;
    y_[0] = 0.0;
    for (std::size_t t = 1; t < size_; ++t) or_weight_[t] = or_variable(t) ? 1.0 : 0.0;
    set_step(step);
  }

  // Rescales primal steps by `step` and dual steps by 1 / step.
  void set_step(double step) {
    step_ = step;
    const double all = std::ldexp(1.0, n_);
    for (std::size_t t = 1; t < size_; ++t) {
      const int k = order_of(static_cast<Mask>(t));
      const double col_and = std::ldexp(1.0, n_ - k);
      const double col_or = all - col_and;
      tau_and_[t] = step / col_and;
      if (k >= 2) tau_or_[t] = step / col_or;
      const double row = (std::ldexp(1.0, k) - 1.0) + (all - std::ldexp(1.0, n_ - k) - k);
      inv_sigma_[t] = step * row;
      sigma_[t] = 1.0 / inv_sigma_[t];
    }
  }
  double step() const { return step_; }

  bool or_variable(std::size_t t) const { return order_of(static_cast<Mask>(t)) >= 2; }

  // out = K(a, o)
  void apply(const std::vector<double>& a, const std::vector<double>& o, std::vector<double>& out) {
    out = a;
    out[0] = 0.0;
    kernels::subset_zeta(out, n_);
    scratch_ = o;
    scratch_[0] = 0.0;
    double total = 0.0;
    for (double x : scratch_) total += x;
    kernels::subset_zeta(scratch_, n_);
    for (std::size_t s = 0; s < size_; ++s) out[s] += total - scratch_[full_ - s];
    out[0] = 0.0;
  }

  // (ga, go) = K^T lambda, zero on fixed entries.
  void adjoint(const std::vector<double>& lambda, std::vector<double>& ga, std::vector<double>& go) {
    ga = lambda;
    ga[0] = 0.0;
    kernels::superset_zeta(ga, n_);
    scratch_ = lambda;
    scratch_[0] = 0.0;
    double total = 0.0;
    for (double x : scratch_) total += x;
    kernels::subset_zeta(scratch_, n_);
    go.resize(size_);
    for (std::size_t t = 0; t < size_; ++t) {
      go[t] = or_weight_[t] * (total - scratch_[full_ - t]);
    }
    ga[0] = 0.0;
  }

  // Decomposition reproducing AND effects `a`, with delta absorbing as much of
  // the residual as the box allows; the OR part takes the rest.
  Decomposition decomposition_for(const std::vector<double>& a, const std::vector<double>& o) {
    std::vector<double> fitted;
    apply(a, o, fitted);
    std::vector<double> delta(size_, 0.0);
    for (std::size_t s = 1; s < size_; ++s) delta[s] = std::clamp(y_[s] - fitted[s], -zeta_, zeta_);

    scratch2_ = a;
    scratch2_[0] = 0.0;
    kernels::subset_zeta(scratch2_, n_);
    const double v0 = v_.empty_output();
    std::vector<double> gamma(size_);
    for (std::size_t s = 0; s < size_; ++s) {
      const double u_and = v0 + scratch2_[s];
      gamma[s] = u_and - 0.5 * (v_.values[static_cast<Mask>(s)] - delta[s]);
    }
    gamma[0] = 0.5 * v0;
    return {LatticeVector(n_, std::move(gamma)), LatticeVector(n_, std::move(delta)), zeta_};
  }

  // Least-squares refit of y on the columns where |x| is clearly nonzero.
  // Returns false when the support is too large or the refit is infeasible.
  bool polish(const std::vector<double>& a, const std::vector<double>& o, std::vector<double>& pa,
              std::vector<double>& po, std::vector<std::size_t>& last_support) {
    if (n_ > kMaxPolishVariables) return false;
    double peak = 0.0;
    for (std::size_t t = 1; t < size_; ++t) peak = std::max({peak, std::abs(a[t]), std::abs(o[t])});
    if (peak == 0.0) return false;
    const double cut = 1e-3 * peak;
    std::vector<std::size_t> support;  // t for AND, size_ + t for OR
    for (std::size_t t = 1; t < size_; ++t) {
      if (std::abs(a[t]) > cut) support.push_back(t);
    }
    for (std::size_t t = 1; t < size_; ++t) {
      if (or_variable(t) && std::abs(o[t]) > cut) support.push_back(size_ + t);
    }
    if (support.empty() || support.size() > kMaxPolishSupport || support == last_support) {
      return false;
    }
    last_support = support;

    const auto rows = static_cast<Eigen::Index>(size_ - 1);
    const auto cols = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      const bool is_or = support[j] >= size_;
      const Mask t = static_cast<Mask>(is_or ? support[j] - size_ : support[j]);
      for (std::size_t s = 1; s < size_; ++s) {
        const Mask m = static_cast<Mask>(s);
        const bool hit = is_or ? (m & t) != 0 : (m & t) == t;
        if (hit) design(static_cast<Eigen::Index>(s - 1), j) = 1.0;
      }
    }
    Eigen::VectorXd target(rows);
    for (std::size_t s = 1; s < size_; ++s) target(static_cast<Eigen::Index>(s - 1)) = y_[s];
    // Smallest correction of the iterate that fits y on this support.
    Eigen::VectorXd fit(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      fit(j) = support[j] >= size_ ? o[support[j] - size_] : a[support[j]];
    }
    fit += design.completeOrthogonalDecomposition().solve(target - design * fit);
    const Eigen::VectorXd residual = target - design * fit;
    const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    if (!fit.allFinite() || residual.cwiseAbs().maxCoeff() > zeta_ + 1e-9 * scale) return false;
    purify(design, fit, scale);

    pa.assign(size_, 0.0);
    po.assign(size_, 0.0);
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (support[j] >= size_) {
        po[support[j] - size_] = fit(j);
      } else {
        pa[support[j]] = fit(j);
      }
    }
    return true;
  }

  // Walks along null directions of the design, which leave the fit unchanged,
  // never increasing |fit|_1, until the nonzero columns are independent.
  static void purify(const Eigen::MatrixXd& design, Eigen::VectorXd& fit, double scale) {
    const double zero = 1e-12 * scale;
    const Eigen::MatrixXd gram = design.transpose() * design;
    for (Eigen::Index guard = 0; guard <= fit.size(); ++guard) {
      std::vector<Eigen::Index> live;
      for (Eigen::Index j = 0; j < fit.size(); ++j) {
        if (std::abs(fit(j)) > zero) {
          live.push_back(j);
        } else {
          fit(j) = 0.0;
        }
      }
      if (live.empty()) return;
      // Gram entries are small integer counts, so the kernel is exact.
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram(live, live));
      if (lu.rank() == static_cast<Eigen::Index>(live.size())) return;
      Eigen::VectorXd d = lu.kernel().col(0);
      double slope = 0.0;
      for (std::size_t j = 0; j < live.size(); ++j) {
        slope += (fit(live[j]) > 0.0 ? 1.0 : -1.0) * d(static_cast<Eigen::Index>(j));
      }
      // Largest step in direction `sign` before some entry reaches zero.
      auto reach = [&](double sign) {
        double t = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < live.size(); ++j) {
          const double dj = sign * d(static_cast<Eigen::Index>(j));
          const double x = fit(live[j]);
          if (dj != 0.0 && (x > 0.0) != (dj > 0.0)) t = std::min(t, std::abs(x / dj));
        }
        return t;
      };
      double sign;
      if (std::abs(slope) > 1e-9) {
        sign = slope > 0.0 ? -1.0 : 1.0;
      } else {
        sign = reach(1.0) <= reach(-1.0) ? 1.0 : -1.0;
      }
      const double t = reach(sign);
      if (!std::isfinite(t)) return;
      for (std::size_t j = 0; j < live.size(); ++j) {
        fit(live[j]) += sign * t * d(static_cast<Eigen::Index>(j));
      }
    }
  }

  const std::vector<double>& target() const { return y_; }
  const std::vector<double>& tau_and() const { return tau_and_; }
  const std::vector<double>& tau_or() const { return tau_or_; }
  const std::vector<double>& sigma() const { return sigma_; }
  const std::vector<double>& inv_sigma() const { return inv_sigma_; }
  double zeta() const { return zeta_; }
  std::size_t size() const { return size_; }

 private:
  const ValueTable& v_;
  int n_;
  std::size_t size_;
  Mask full_;
  double zeta_;
  double step_ = 1.0;
  std::vector<double> y_;
  std::vector<double> tau_and_;
  std::vector<double> tau_or_;
  std::vector<double> sigma_;
  std::vector<double> inv_sigma_;
  // 1 where an OR variable exists, else 0.
  std::vector<double> or_weight_;
  std::vector<double> scratch_;
  std::vector<double> scratch2_;
};

double soft_threshold(double x, double t) { return x - std::clamp(x, -t, t); }

constexpr long kRestartInterval = 64;
constexpr double kSufficientDecay = 0.2;
constexpr double kNecessaryDecay = 0.8;
constexpr double kArtificialRestart = 0.36;
constexpr double kWeightSmoothing = 0.5;

struct Iterate {
  std::vector<double> a, o, lambda;

  static Iterate zeros(std::size_t size) {
    return {std::vector<double>(size, 0.0), std::vector<double>(size, 0.0),
            std::vector<double>(size, 0.0)};
  }
  void add(const Iterate& x) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] += x.a[i];
      o[i] += x.o[i];
      lambda[i] += x.lambda[i];
    }
  }
  Iterate scaled(double f) const {
    Iterate out = *this;
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.a[i] *= f;
      out.o[i] *= f;
      out.lambda[i] *= f;
    }
    return out;
  }
};

std::size_t nonzero_count(const InteractionSet& set, double zero) {
  std::size_t c = 0;
  for (std::size_t t = 1; t < set.i_and.size(); ++t) {
    const Mask m = static_cast<Mask>(t);
    c += (std::abs(set.i_and[m]) > zero) + (std::abs(set.i_or[m]) > zero);
  }
  return c;
}

struct Workspace {
  std::vector<double> ga, go, fitted;
};

double primal_distance(const Iterate& x, const Iterate& z) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    sq += (x.a[i] - z.a[i]) * (x.a[i] - z.a[i]) + (x.o[i] - z.o[i]) * (x.o[i] - z.o[i]);
  }
  return std::sqrt(sq);
}

double dual_distance(const Iterate& x, const Iterate& z) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.lambda.size(); ++i) {
    sq += (x.lambda[i] - z.lambda[i]) * (x.lambda[i] - z.lambda[i]);
  }
  return std::sqrt(sq);
}

double dual_objective(const std::vector<double>& y, const std::vector<double>& lambda, double zeta) {
  double dual = 0.0;
  for (std::size_t s = 1; s < y.size(); ++s) dual -= y[s] * lambda[s] + zeta * std::abs(lambda[s]);
  return dual;
}

// Lower bound on the optimum from lambda scaled so that |K^T lambda|_inf <= 1.
double dual_bound(EffectSpaceSolver& solver, const std::vector<double>& lambda, Workspace& ws) {
  solver.adjoint(lambda, ws.ga, ws.go);
  double reach = 0.0;
  for (std::size_t t = 1; t < solver.size(); ++t) {
    reach = std::max({reach, std::abs(ws.ga[t]), std::abs(ws.go[t])});
  }
  return dual_objective(solver.target(), lambda, solver.zeta()) / std::max(1.0, reach);
}

// Euclidean norm of primal infeasibility, dual infeasibility and the gap.
double kkt_error(EffectSpaceSolver& solver, const Iterate& x, Workspace& ws) {
  const auto& y = solver.target();
  const double zeta = solver.zeta();
  solver.apply(x.a, x.o, ws.fitted);
  solver.adjoint(x.lambda, ws.ga, ws.go);
  double primal = 0.0;
  for (std::size_t s = 1; s < solver.size(); ++s) {
    const double r = ws.fitted[s] - std::clamp(ws.fitted[s], y[s] - zeta, y[s] + zeta);
    primal += r * r;
  }
  auto residual = [](double x_t, double g) {
    if (x_t > 0.0) return g + 1.0;
    if (x_t < 0.0) return g - 1.0;
    return std::max(std::abs(g) - 1.0, 0.0);
  };
  double dual = 0.0;
  double l1 = 0.0;
  for (std::size_t t = 1; t < solver.size(); ++t) {
    const double ra = residual(x.a[t], ws.ga[t]);
    dual += ra * ra;
    l1 += std::abs(x.a[t]) + std::abs(x.o[t]);
    if (solver.or_variable(t)) {
      const double ro = residual(x.o[t], ws.go[t]);
      dual += ro * ro;
    }
  }
  const double gap = l1 - dual_objective(y, x.lambda, zeta);
  return std::sqrt(primal + dual + gap * gap);
}

void check_config(const SparsifyConfig& cfg) {
  if (cfg.max_iters < 0) throw ArgumentError("max_iters must be non-negative");
  if (!(cfg.step_size > 0.0)) throw ArgumentError("step_size must be positive");
  if (!(cfg.zeta_fraction >= 0.0)) throw ArgumentError("zeta_fraction must be non-negative");
  if (!(cfg.convergence_eps >= 0.0)) throw ArgumentError("convergence_eps must be non-negative");
  if (cfg.check_interval < 1) throw ArgumentError("check_interval must be at least 1");
}

}  // namespace

SparsifyResult sparsify(const ValueTable& v, const SparsifyConfig& cfg) {
  check_variable_count(v.n(), config::kMaxSparsifyVariables);
  check_config(cfg);

  Decomposition start = Decomposition::even_split(v);
  InteractionSet start_set = extract(v, start);
  SparsifyResult result{std::move(start), std::move(start_set), {}, 0, false};
  double best = result.interactions.l1();
  result.loss_history.push_back(best);
  if (!std::isfinite(best)) throw NumericalError("non-finite loss at initialization", 0);
  if (cfg.max_iters == 0) return result;

  const double zeta =
      cfg.denoise ? cfg.zeta_fraction * std::abs(v.full_output() - v.empty_output()) : 0.0;
  EffectSpaceSolver solver(v, zeta, cfg.step_size);
  const std::size_t size = solver.size();
  const auto& y = solver.target();

  // Start from the even split with order-1 OR effects folded into AND.
  Iterate cur;
  cur.a.assign(result.interactions.i_and.values().begin(), result.interactions.i_and.values().end());
  cur.o.assign(result.interactions.i_or.values().begin(), result.interactions.i_or.values().end());
  for (std::size_t t = 1; t < size; ++t) {
    if (!solver.or_variable(t)) {
      cur.a[t] += cur.o[t];
      cur.o[t] = 0.0;
    }
  }
  cur.a[0] = cur.o[0] = 0.0;
  cur.lambda.assign(size, 0.0);

  Workspace ws;
  std::vector<double> a_next(size), o_next(size), bar_a(size), bar_o(size);
  std::vector<double> pa, po;
  std::vector<std::size_t> last_support;
  double best_dual = -std::numeric_limits<double>::infinity();
  std::size_t best_count = nonzero_count(result.interactions, 1e-9 * std::max(1.0, best));

  auto consider = [&](const std::vector<double>& a, const std::vector<double>& o) {
    Decomposition d = solver.decomposition_for(a, o);
    InteractionSet set = extract(v, d);
    const double loss = set.l1();
    const double tie = 1e-9 * std::max(1.0, best);
    const std::size_t count = nonzero_count(set, tie);
    if (loss < best - tie || (loss <= best + tie && count < best_count)) {
      best_count = count;
      best = std::min(best, loss);
      result.decomposition = std::move(d);
      result.interactions = std::move(set);
    }
  };

  // Restart bookkeeping: running average since the last restart, and the KKT
  // error at that restart.
  Iterate sum = Iterate::zeros(size);
  Iterate anchor = cur;
  long averaged = 0;
  long since_restart = 0;
  double kkt_anchor = kkt_error(solver, anchor, ws);
  double kkt_previous = std::numeric_limits<double>::infinity();

  long it = 0;
  while (it < cfg.max_iters) {
    const auto& tau_and = solver.tau_and();
    const auto& tau_or = solver.tau_or();
    const auto& sigma = solver.sigma();
    const auto& inv_sigma = solver.inv_sigma();
    solver.adjoint(cur.lambda, ws.ga, ws.go);
    for (std::size_t t = 1; t < size; ++t) {
      a_next[t] = soft_threshold(cur.a[t] - tau_and[t] * ws.ga[t], tau_and[t]);
      // tau_or and go vanish where no OR variable exists, keeping o at 0.
      o_next[t] = soft_threshold(cur.o[t] - tau_or[t] * ws.go[t], tau_or[t]);
      bar_a[t] = 2.0 * a_next[t] - cur.a[t];
      bar_o[t] = 2.0 * o_next[t] - cur.o[t];
    }
    a_next[0] = o_next[0] = bar_a[0] = bar_o[0] = 0.0;
    solver.apply(bar_a, bar_o, ws.fitted);
    for (std::size_t s = 1; s < size; ++s) {
      const double p = cur.lambda[s] + sigma[s] * ws.fitted[s];
      const double projected = std::clamp(p * inv_sigma[s], y[s] - zeta, y[s] + zeta);
      cur.lambda[s] = p - sigma[s] * projected;
    }
    std::swap(cur.a, a_next);
    std::swap(cur.o, o_next);
    sum.add(cur);
    ++averaged;
    ++since_restart;
    ++it;

    if (it % kRestartInterval == 0) {
      Iterate average = sum.scaled(1.0 / static_cast<double>(averaged));
      const double kkt_cur = kkt_error(solver, cur, ws);
      const double kkt_avg = kkt_error(solver, average, ws);
      const bool use_average = kkt_avg < kkt_cur;
      const double kkt_candidate = std::min(kkt_cur, kkt_avg);
      if (!std::isfinite(kkt_candidate)) throw NumericalError("non-finite iterate", it);
      const bool restart =
          kkt_candidate <= kSufficientDecay * kkt_anchor ||
          (kkt_candidate <= kNecessaryDecay * kkt_anchor && kkt_candidate > kkt_previous) ||
          static_cast<double>(since_restart) >= kArtificialRestart * static_cast<double>(it);
      kkt_previous = kkt_candidate;
      if (restart) {
        if (use_average) cur = std::move(average);
        const double dx = primal_distance(cur, anchor);
        const double dl = dual_distance(cur, anchor);
        if (dx > 1e-10 && dl > 1e-10) {
          const double ratio = std::sqrt(dx / dl);
          solver.set_step(std::clamp(std::exp(kWeightSmoothing * std::log(solver.step()) +
                                              (1.0 - kWeightSmoothing) * std::log(ratio)),
                                     1e-4 * cfg.step_size, 1e4 * cfg.step_size));
        }
        anchor = cur;
        kkt_anchor = kkt_candidate;
        kkt_previous = std::numeric_limits<double>::infinity();
        sum = Iterate::zeros(size);
        averaged = 0;
        since_restart = 0;
      }
    }

    if (it % cfg.check_interval != 0 && it != cfg.max_iters) continue;

    consider(cur.a, cur.o);
    if (solver.polish(cur.a, cur.o, pa, po, last_support)) consider(pa, po);
    if (!std::isfinite(best)) throw NumericalError("non-finite loss", it);

    const double dual = dual_bound(solver, cur.lambda, ws);
    if (!std::isfinite(dual)) throw NumericalError("non-finite dual iterate", it);
    best_dual = std::max(best_dual, dual);
    result.loss_history.push_back(best);
    if (best - best_dual <= cfg.convergence_eps * std::max(1.0, best)) {
      result.converged = true;
      break;
    }
  }
  result.iterations = it;
  return result;
}

}  // namespace andor
