#pragma once

#include <string>
#include <vector>

// Closed-form analysis for spinal codes. All logarithms are base 2; the
// natural-log conversions live in exponents.cpp.
namespace spinal::exponents {

// Discrete memoryless channel with a fixed input distribution.
struct DmcSpec {
  std::vector<double> input_dist;               // Q(i)
  std::vector<std::vector<double>> transition;  // P[i][j], rows sum to 1

  // Throws std::invalid_argument unless Q and every row are distributions
  // (tolerance 1e-12) with matching dimensions.
  void validate() const;

  static DmcSpec bsc(double p);  // uniform input
};

double entropy(double p);
double capacity_bsc(double p);
double capacity_awgn(double power, double sigma2);

// D(q || p) in bits; +infinity when q puts mass where p has none.
double kl_bernoulli(double q, double p);

// Second-order constant with D(q||p) ~ kappa_p (C - R)^2 near capacity:
// kappa_p = 1 / (p (1-p) ln 4 log2((1-p)/p)^2). Singular at p = 1/2.
double kappa_p(double p);

// q in (p, 1/2) with 1 - H(q) = R.
double crossover_for_rate(double rate, double p);

// sqrt(p) / (sqrt(p) + sqrt(1-p)): the boundary between the two bound cases.
double bsc_case_threshold(double p);

enum class BoundCase { divergence, cutoff };

struct BscBound {
  double q = 0.0;
  double exponent = 0.0;      // per-symbol exponent
  double log2_bound = 0.0;    // log2 of the error bound, -T * exponent
  BoundCase which = BoundCase::divergence;
};

// Error bound for a pairwise-independent code of length T and rate R on
// BSC(p). Case (a): D(q||p) while q <= threshold; case (b): 1 - R -
// 2 log2(sqrt p + sqrt(1-p)). Throws std::domain_error for R >= C.
BscBound bsc_error_bound(double code_length, double rate, double p);

// Gallager's E_o(rho, Q) = -log2 sum_j (sum_i Q(i) P_ij^{1/(1+rho)})^{1+rho}.
double gallager_e0(double rho, const DmcSpec& dmc);

struct E0Optimum {
  double rho = 0.0;
  double exponent = 0.0;  // max over rho in (0, 1] of -rho R + E_o(rho)
};

// Golden-section search over rho to 1e-9; the boundary rho = 1 is compared
// explicitly.
E0Optimum optimize_e0(const DmcSpec& dmc, double rate);

// 2 (1 - Phi(beta)): mass of N(0,1) outside [-beta, beta].
double truncation_mass(double beta);

// beta sqrt(P) exp(beta^2/2) / 2^{c-1}: bound on adjacent constellation spacing.
double constellation_spacing(double beta, int c, double power);

// Inner expression of the AWGN exponent E' for one zeta > 1.
double awgn_e_prime(double zeta, double beta, int c, double power, double sigma2);

struct EPrimeOptimum {
  double zeta = 0.0;
  double value = 0.0;
};

// Maximizes awgn_e_prime over zeta in (1, 1e9] (golden section on log zeta).
EPrimeOptimum optimize_awgn_e_prime(double beta, int c, double power, double sigma2);

struct AwgnSelection {
  double zeta = 0.0;
  double beta = 0.0;
  int c = 0;
  double delta = 0.0;
  double r_beta = 0.0;
  double e_prime = 0.0;      // optimized over zeta at the selected beta, c
  bool meets_target = false; // e_prime >= C_awgn - epsilon
};

// zeta = 9 SNR / eps; beta solves 2(1 - Phi(beta)) = eps ln2 / 6; c is the
// smallest integer with spacing <= 2 eps sigma_min^2 / (9 sqrt P).
AwgnSelection select_awgn_params(double epsilon, double power, double sigma2, double sigma_min2);

// Smallest L with k/(L-2) >= C > k/(L-1).
int choose_pass_count(int k, double capacity);

// ceil(i* L + 2L + log2 i* + 6 log2 n). Advisory spine width at theorem scale.
int theorem_nu(double n, int k, int passes, double i_star);

struct ExponentReport {
  std::string channel;
  double parameter = 0.0;  // p for BSC, SNR for AWGN
  double capacity = 0.0;
  double rate = 0.0;
  double gap = 0.0;
  // BSC
  double q = 0.0;
  double divergence = 0.0;
  double kappa = 0.0;
  bool has_bound = false;
  BscBound bound;
  E0Optimum e0;
  // AWGN
  AwgnSelection awgn;
};

ExponentReport report_bsc(double p, double rate);
ExponentReport report_awgn(double power, double sigma2, double sigma_min2, double epsilon, double rate);

}  // namespace spinal::exponents
