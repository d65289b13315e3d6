#include "arblobo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "arblobo/errors.hpp"

namespace arblobo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// 1/(1+e^{−x}) for extended x.
double logistic(double x) {
  if (x == kNegInf) return 0.0;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_std_gaussian(std::span<const double> x) {
  return -0.5 * static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi) - 0.5 * dot(x, x);
}

void check_nonreversible(const AcceptanceRule& rule, const TargetDensity& target,
                         const ProposalFamily& proposal) {
  if (target.kind() != TargetKind::Gaussian || !target.strong_convexity()) {
    throw InvalidArgument("non-reversible CN rule requires a N(0, σ²I) target");
  }
  const double s2 = *target.strong_convexity();
  if (std::abs(s2 - rule.sigma2) > 1e-12 * rule.sigma2) {
    throw InvalidArgument("non-reversible CN rule: target variance " + std::to_string(s2) +
                          " differs from rule variance " + std::to_string(rule.sigma2));
  }
  if (proposal.kind() != ProposalKind::CrankNicolson) {
    throw InvalidArgument("non-reversible CN rule requires a Crank-Nicolson proposal");
  }
}

double log_vorticity_scale(const AcceptanceRule& rule, std::size_t d) {
  return -static_cast<double>(d) * std::log(2.0 * std::sqrt(rule.sigma2));
}

}  // namespace

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::MetropolisHastings: return "mh";
    case RuleKind::Barker: return "barker";
    case RuleKind::PortkeyBarker: return "portkey";
    case RuleKind::NonReversibleCN: return "nonreversible-cn";
  }
  return "unknown";
}

AcceptanceRule AcceptanceRule::portkey_barker(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("portkey: δ must be ≥ 0");
  return {RuleKind::PortkeyBarker, delta, 0.0};
}

AcceptanceRule AcceptanceRule::nonreversible_cn(double sigma2) {
  if (!(sigma2 > 1.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("non-reversible CN rule requires σ² > 1");
  }
  return {RuleKind::NonReversibleCN, 0.0, sigma2};
}

double accept_from_logs(const AcceptanceRule& rule, double log_forward, double log_reverse) {
  if (std::isnan(log_forward) || std::isnan(log_reverse)) {
    throw NonFinite("accept_from_logs: NaN log density");
  }
  switch (rule.kind) {
    case RuleKind::MetropolisHastings:
      if (log_forward == kNegInf) return 1.0;
      if (log_reverse == kNegInf) return 0.0;
      return std::min(1.0, std::exp(log_reverse - log_forward));
    case RuleKind::Barker:
    case RuleKind::PortkeyBarker: {
      const double scale = 1.0 / (1.0 + rule.delta);
      if (log_forward == kNegInf) return log_reverse == kNegInf ? 0.0 : scale;
      if (log_reverse == kNegInf) return 0.0;
      return scale * logistic(log_reverse - log_forward);
    }
    case RuleKind::NonReversibleCN:
      throw InvalidArgument("accept_from_logs: the non-reversible rule needs the full densities");
  }
  return 0.0;
}

double nonreversible_vorticity(const AcceptanceRule& rule, const TargetDensity& target,
                               const ProposalFamily& proposal, std::span<const double> theta,
                               std::span<const double> theta_next) {
  check_nonreversible(rule, target, proposal);
  const double log_c = log_vorticity_scale(rule, target.dim());
  return std::exp(log_c + log_std_gaussian(theta) + proposal.log_q(theta, theta_next)) -
         std::exp(log_c + log_std_gaussian(theta_next) + proposal.log_q(theta_next, theta));
}

double accept_prob(const AcceptanceRule& rule, const TargetDensity& target,
                   const ProposalFamily& proposal, std::span<const double> theta,
                   std::span<const double> theta_next) {
  const double log_pi = target.log_density(theta);
  const double log_pi_next = target.log_density(theta_next);
  const double log_forward = log_pi + proposal.log_q(theta, theta_next);
  const double log_reverse = log_pi_next + proposal.log_q(theta_next, theta);
  if (rule.kind != RuleKind::NonReversibleCN) return accept_from_logs(rule, log_forward, log_reverse);

  check_nonreversible(rule, target, proposal);
  if (log_forward == kNegInf) return 1.0;
  // (γ + π'q')/(πq) = cρ(θ)/π(θ) + (π'q'/πq)·(1 − cρ(θ')/π(θ')); both terms are
  // nonnegative since cρ/π ≤ 2^{−d}.
  const double log_c = log_vorticity_scale(rule, target.dim());
  const double own = std::exp(log_c + log_std_gaussian(theta) - log_pi);
  const double log_keep = std::log1p(-std::exp(log_c + log_std_gaussian(theta_next) - log_pi_next));
  const double ratio = own + std::exp(log_reverse - log_forward + log_keep);
  return std::clamp(ratio, 0.0, 1.0);
}

ArbKernel::ArbKernel(TargetDensity target, ProposalFamily proposal, AcceptanceRule rule)
    : target_(std::move(target)), proposal_(std::move(proposal)), rule_(rule) {
  if (target_.dim() != proposal_.dim()) {
    throw DimensionMismatch("ArbKernel: target dimension " + std::to_string(target_.dim()) +
                            " differs from proposal dimension " + std::to_string(proposal_.dim()));
  }
  if (rule_.kind == RuleKind::NonReversibleCN) check_nonreversible(rule_, target_, proposal_);
}

double ArbKernel::accept_prob(std::span<const double> theta, std::span<const double> theta_next) const {
  return arblobo::accept_prob(rule_, target_, proposal_, theta, theta_next);
}

StepResult step(const ArbKernel& kernel, std::span<const double> theta, RandomStream& stream) {
  StepResult r;
  r.proposal = kernel.proposal().sample(theta, stream);
  const double a = kernel.accept_prob(theta, r.proposal);
  r.accepted = stream.uniform() < a;
  r.next = r.accepted ? r.proposal : Vector(theta.begin(), theta.end());
  return r;
}

AcceptanceEstimate mc_acceptance(const ArbKernel& kernel, std::span<const double> theta,
                                 std::size_t n, RandomStream& stream) {
  if (n < 2) throw InvalidArgument("mc_acceptance: need at least 2 samples");
  AcceptanceEstimate est;
  est.samples = n;
  est.seed = stream.seed();
  est.stream_id = stream.stream_id();
  // Welford running moments.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector proposal = kernel.proposal().sample(theta, stream);
    const double a = kernel.accept_prob(theta, proposal);
    const double delta = a - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (a - mean);
  }
  est.mean = std::clamp(mean, 0.0, 1.0);
  est.std_err = std::sqrt(std::max(m2, 0.0) / static_cast<double>(n - 1) / static_cast<double>(n));
  return est;
}

RandomScanKernel::RandomScanKernel(std::size_t dim, std::vector<ComponentUpdater> components,
                                   std::vector<double> probabilities)
    : dim_(dim), components_(std::move(components)), probabilities_(std::move(probabilities)) {
  if (components_.empty()) throw InvalidArgument("RandomScanKernel: no components");
  if (components_.size() != probabilities_.size()) {
    throw DimensionMismatch("RandomScanKernel: one selection probability per component required");
  }
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("RandomScanKernel: probabilities must lie in (0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("RandomScanKernel: probabilities must sum to 1");
  for (const auto& c : components_) {
    if (c.block.empty() || !c.kernel_for) throw InvalidArgument("RandomScanKernel: empty component");
    for (std::size_t i : c.block)
      if (i >= dim_) throw InvalidArgument("RandomScanKernel: block index out of range");
  }
}

Vector RandomScanKernel::block_values(std::size_t k, std::span<const double> state) const {
  Vector v;
  v.reserve(components_.at(k).block.size());
  for (std::size_t i : components_[k].block) v.push_back(state[i]);
  return v;
}

ArbKernel RandomScanKernel::component_kernel(std::size_t k, std::span<const double> state) const {
  if (state.size() != dim_) throw DimensionMismatch("RandomScanKernel: state dimension");
  ArbKernel kernel = components_.at(k).kernel_for(state);
  if (kernel.dim() != components_[k].block.size()) {
    throw DimensionMismatch("RandomScanKernel: component kernel dimension differs from block size");
  }
  return kernel;
}

RsStepResult rs_step(const RandomScanKernel& kernel, std::span<const double> theta,
                     RandomStream& stream) {
  const double u = stream.uniform();
  std::size_t k = 0;
  double cumulative = kernel.probabilities()[0];
  while (u >= cumulative && k + 1 < kernel.size()) cumulative += kernel.probabilities()[++k];

  const ArbKernel component = kernel.component_kernel(k, theta);
  const Vector block = kernel.block_values(k, theta);
  const StepResult s = step(component, block, stream);

  RsStepResult r;
  r.component = k;
  r.accepted = s.accepted;
  r.next.assign(theta.begin(), theta.end());
  const auto& idx = kernel.component(k).block;
  for (std::size_t j = 0; j < idx.size(); ++j) r.next[idx[j]] = s.next[j];
  return r;
}

RsAcceptance rs_component_acceptances(const RandomScanKernel& kernel, std::span<const double> theta,
                                      std::size_t n, RandomStream& stream) {
  RsAcceptance out;
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    RandomStream sub = stream.substream(k);
    const ArbKernel component = kernel.component_kernel(k, theta);
    out.components.push_back(mc_acceptance(component, kernel.block_values(k, theta), n, sub));
    out.combined += kernel.probabilities()[k] * out.components.back().mean;
  }
  out.combined = std::clamp(out.combined, 0.0, 1.0);
  return out;
}

RandomScanKernel make_subexponential_rs_kernel(double h, std::vector<double> probabilities) {
  if (!(h > 0.0)) throw InvalidArgument("make_subexponential_rs_kernel: h must be positive");
  const TargetDensity joint = make_subexponential_2d();
  const Matrix one = Matrix::identity(1);
  std::vector<ComponentUpdater> parts;
  for (std::size_t k = 0; k < 2; ++k) {
    const int fixed_index = k == 0 ? 2 : 1;
    const std::size_t other = 1 - k;
    parts.push_back({{k}, [=](std::span<const double> state) {
                       return ArbKernel(conditional_1d(joint, fixed_index, state[other]),
                                        make_rw_gaussian(h, one),
                                        AcceptanceRule::metropolis_hastings());
                     }});
  }
  return RandomScanKernel(2, std::move(parts), std::move(probabilities));
}

}  // namespace arblobo
