#include "spinal/exponents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinal/normal.hpp"

namespace spinal::exponents {

namespace {

// The only place natural logs enter.
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLog2E = 1.44269504088896340736;

constexpr double kDistTolerance = 1e-12;
constexpr double kInvPhi = 0.61803398874989484820;

double xlog2x_over(double x, double y) {
  // x log2(x / y) with 0 log 0 = 0.
  if (x == 0.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return x * std::log2(x / y);
}

// Maximizes a unimodal f on [lo, hi] by golden-section search.
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Root of a decreasing function on [lo, hi] by bisection.
template <typename F>
double bisect_decreasing(F f, double lo, double hi, double tol) {
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(what) + ": probability outside [0, 1]");
}

}  // namespace

void DmcSpec::validate() const {
  if (input_dist.empty()) throw std::invalid_argument("dmc: empty input alphabet");
  if (transition.size() != input_dist.size()) throw std::invalid_argument("dmc: Q and P dimensions differ");
  double total = 0.0;
  for (double q : input_dist) {
    if (!(q >= 0.0)) throw std::invalid_argument("dmc: negative input probability");
    total += q;
  }
  if (std::fabs(total - 1.0) > kDistTolerance) throw std::invalid_argument("dmc: Q does not sum to 1");
  std::size_t outputs = transition.front().size();
  if (outputs == 0) throw std::invalid_argument("dmc: empty output alphabet");
  for (const auto& row : transition) {
    if (row.size() != outputs) throw std::invalid_argument("dmc: ragged transition matrix");
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw std::invalid_argument("dmc: negative transition probability");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kDistTolerance) throw std::invalid_argument("dmc: transition row does not sum to 1");
  }
}

DmcSpec DmcSpec::bsc(double p) {
  check_probability(p, "DmcSpec::bsc");
  return DmcSpec{{0.5, 0.5}, {{1.0 - p, p}, {p, 1.0 - p}}};
}

double entropy(double p) {
  check_probability(p, "entropy");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double capacity_bsc(double p) { return 1.0 - entropy(p); }

double capacity_awgn(double power, double sigma2) {
  if (!(power > 0.0) || !(sigma2 > 0.0)) throw std::domain_error("capacity_awgn: P and sigma2 must be positive");
  return 0.5 * std::log2(1.0 + power / sigma2);
}

double kl_bernoulli(double q, double p) {
  check_probability(q, "kl_bernoulli");
  check_probability(p, "kl_bernoulli");
  double d = xlog2x_over(q, p) + xlog2x_over(1.0 - q, 1.0 - p);
  return d < 0.0 ? 0.0 : d;
}

double kappa_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("kappa_p: p must be in (0, 1)");
  double lr = std::log2((1.0 - p) / p);
  if (lr == 0.0) throw std::domain_error("kappa_p: singular at p = 1/2");
  return 1.0 / (p * (1.0 - p) * 2.0 * kLn2 * lr * lr);
}

double crossover_for_rate(double rate, double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::domain_error("crossover_for_rate: p must be in (0, 1/2)");
  double c = capacity_bsc(p);
  if (!(rate >= 0.0) || rate >= c) throw std::domain_error("crossover_for_rate: rate must be in [0, C)");
  return bisect_decreasing([&](double q) { return 1.0 - entropy(q) - rate; }, p, 0.5, 1e-16);
}

double bsc_case_threshold(double p) {
  check_probability(p, "bsc_case_threshold");
  double a = std::sqrt(p);
  return a / (a + std::sqrt(1.0 - p));
}

BscBound bsc_error_bound(double code_length, double rate, double p) {
  if (!(code_length > 0.0)) throw std::domain_error("bsc_error_bound: T must be positive");
  if (!(p > 0.0 && p < 0.5)) throw std::domain_error("bsc_error_bound: p must be in (0, 1/2)");
  if (rate >= capacity_bsc(p)) throw std::domain_error("bsc_error_bound: rate at or above capacity");
  BscBound out;
  out.q = crossover_for_rate(rate, p);
  if (out.q <= bsc_case_threshold(p)) {
    out.which = BoundCase::divergence;
    out.exponent = kl_bernoulli(out.q, p);
  } else {
    out.which = BoundCase::cutoff;
    out.exponent = 1.0 - rate - 2.0 * std::log2(std::sqrt(p) + std::sqrt(1.0 - p));
  }
  out.log2_bound = -code_length * out.exponent;
  return out;
}

double gallager_e0(double rho, const DmcSpec& dmc) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("gallager_e0: rho must be in (0, 1]");
  dmc.validate();
  double power = 1.0 / (1.0 + rho);
  double total = 0.0;
  std::size_t outputs = dmc.transition.front().size();
  for (std::size_t j = 0; j < outputs; ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < dmc.input_dist.size(); ++i) {
      double pij = dmc.transition[i][j];
      if (pij > 0.0) inner += dmc.input_dist[i] * std::pow(pij, power);
    }
    total += std::pow(inner, 1.0 + rho);
  }
  double e0 = -std::log2(total);
  return e0 < 0.0 ? 0.0 : e0;
}

E0Optimum optimize_e0(const DmcSpec& dmc, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("optimize_e0: rate must be nonnegative");
  dmc.validate();
  auto objective = [&](double rho) { return rho <= 0.0 ? 0.0 : -rho * rate + gallager_e0(rho, dmc); };
  double rho = golden_max(objective, 0.0, 1.0, 1e-9);
  E0Optimum best{rho, objective(rho)};
  double at_one = objective(1.0);
  if (at_one >= best.exponent) best = {1.0, at_one};
  if (best.exponent < 0.0) best = {0.0, 0.0};
  return best;
}

double truncation_mass(double beta) { return 2.0 * normal_upper_tail(beta); }

double constellation_spacing(double beta, int c, double power) {
  return beta * std::sqrt(power) * std::exp(0.5 * beta * beta) / std::ldexp(1.0, c - 1);
}

double awgn_e_prime(double zeta, double beta, int c, double power, double sigma2) {
  if (!(zeta > 1.0)) throw std::domain_error("awgn_e_prime: zeta must exceed 1");
  if (!(beta > 0.0) || !(power > 0.0) || !(sigma2 > 0.0) || c < 1) {
    throw std::domain_error("awgn_e_prime: parameters must be positive");
  }
  double shrink = 1.0 + 1.0 / zeta;
  double delta = constellation_spacing(beta, c, power);
  return 0.5 * std::log2(1.0 + power / (sigma2 * shrink * shrink)) - 2.0 * truncation_mass(beta) / kLn2 -
         (2.0 * zeta + 1.0) * delta * delta * kLog2E / (4.0 * sigma2);
}

EPrimeOptimum optimize_awgn_e_prime(double beta, int c, double power, double sigma2) {
  constexpr double kMaxZeta = 1e9;
  auto objective = [&](double t) { return awgn_e_prime(std::exp(t), beta, c, power, sigma2); };
  // zeta = 1 itself is excluded; start just above it.
  double lo = 1e-12;
  double hi = std::log(kMaxZeta);
  double t = golden_max(objective, lo, hi, 1e-10);
  EPrimeOptimum best{std::exp(t), objective(t)};
  double at_hi = objective(hi);
  if (at_hi > best.value) best = {kMaxZeta, at_hi};
  return best;
}

AwgnSelection select_awgn_params(double epsilon, double power, double sigma2, double sigma_min2) {
  if (!(power > 0.0) || !(sigma2 > 0.0) || !(sigma_min2 > 0.0)) {
    throw std::domain_error("select_awgn_params: P, sigma2, sigma_min2 must be positive");
  }
  if (sigma2 < sigma_min2) throw std::domain_error("select_awgn_params: sigma2 below sigma_min2");
  double cap = capacity_awgn(power, sigma2);
  if (!(epsilon > 0.0) || epsilon >= cap) throw std::domain_error("select_awgn_params: epsilon must be in (0, C)");

  AwgnSelection sel;
  sel.zeta = 9.0 * (power / sigma2) / epsilon;
  double target_mass = epsilon * kLn2 / 6.0;
  sel.beta = bisect_decreasing([&](double b) { return truncation_mass(b) - target_mass; }, 0.0, 40.0, 1e-12);
  sel.r_beta = truncation_mass(sel.beta);

  double target_spacing = 2.0 * epsilon * sigma_min2 / (9.0 * std::sqrt(power));
  double ratio = sel.beta * std::sqrt(power) * std::exp(0.5 * sel.beta * sel.beta) / target_spacing;
  int c = std::max(1, static_cast<int>(std::ceil(1.0 + std::log2(ratio))));
  while (c > 1 && constellation_spacing(sel.beta, c - 1, power) <= target_spacing) --c;
  while (constellation_spacing(sel.beta, c, power) > target_spacing) ++c;
  sel.c = c;
  sel.delta = constellation_spacing(sel.beta, c, power);

  sel.e_prime = optimize_awgn_e_prime(sel.beta, sel.c, power, sigma2).value;
  sel.meets_target = sel.e_prime >= cap - epsilon;
  return sel;
}

int choose_pass_count(int k, double capacity) {
  if (!(capacity > 0.0)) throw std::domain_error("choose_pass_count: capacity must be positive");
  if (k < 1 || capacity > k) throw std::domain_error("choose_pass_count: capacity must not exceed k");
  // Smallest L with k < C (L - 1); then k >= C (L - 2) holds automatically.
  int L = std::max(2, static_cast<int>(std::floor(k / capacity)));
  while (L > 2 && k < capacity * (L - 2)) --L;
  while (!(k < capacity * (L - 1))) ++L;
  return L;
}

int theorem_nu(double n, int /*k*/, int passes, double i_star) {
  if (!(n > 0.0) || passes < 1 || !(i_star > 0.0)) throw std::domain_error("theorem_nu: arguments must be positive");
  double bits = i_star * passes + 2.0 * passes + std::log2(i_star) + 6.0 * std::log2(n);
  return static_cast<int>(std::ceil(bits - 1e-9));
}

ExponentReport report_bsc(double p, double rate) {
  ExponentReport r;
  r.channel = "bsc";
  r.parameter = p;
  r.capacity = capacity_bsc(p);
  r.rate = rate;
  r.gap = r.capacity - rate;
  r.kappa = kappa_p(p);
  if (rate >= 0.0 && rate < r.capacity) {
    r.has_bound = true;
    r.bound = bsc_error_bound(1.0, rate, p);
    r.q = r.bound.q;
    r.divergence = kl_bernoulli(r.q, p);
  }
  r.e0 = optimize_e0(DmcSpec::bsc(p), std::max(rate, 0.0));
  return r;
}

ExponentReport report_awgn(double power, double sigma2, double sigma_min2, double epsilon, double rate) {
  ExponentReport r;
  r.channel = "awgn";
  r.parameter = power / sigma2;
  r.capacity = capacity_awgn(power, sigma2);
  r.rate = rate;
  r.gap = r.capacity - rate;
  r.awgn = select_awgn_params(epsilon, power, sigma2, sigma_min2);
  r.has_bound = rate < r.awgn.e_prime;
  return r;
}

}  // namespace spinal::exponents
