#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "arblobo/linalg.hpp"
#include "arblobo/proposals.hpp"
#include "arblobo/random.hpp"
#include "arblobo/targets.hpp"

namespace arblobo {

enum class RuleKind { MetropolisHastings, Barker, PortkeyBarker, NonReversibleCN };

std::string_view to_string(RuleKind kind);

/// Acceptance function a(θ,θ') of an accept-reject kernel.
///
/// Portkey Barker uses the symmetric penalty d(θ,θ') = δ·(π(θ)q(θ,θ') +
/// π(θ')q(θ',θ)), which makes it Barker scaled by 1/(1+δ). The
/// non-reversible rule is the Crank-Nicolson construction for a N(0, σ²I)
/// target with σ² > 1.
struct AcceptanceRule {
  RuleKind kind = RuleKind::MetropolisHastings;
  double delta = 0.0;
  double sigma2 = 0.0;

  static AcceptanceRule metropolis_hastings() { return {RuleKind::MetropolisHastings}; }
  static AcceptanceRule barker() { return {RuleKind::Barker}; }
  static AcceptanceRule portkey_barker(double delta);
  static AcceptanceRule nonreversible_cn(double sigma2);
};

/// a(θ,θ') for the MH/Barker/portkey rules, from log(π(θ)q(θ,θ')) and
/// log(π(θ')q(θ',θ)). A zero forward term means acceptance 1 for MH and the
/// limiting value 1/(1+δ) for the Barker family.
double accept_from_logs(const AcceptanceRule& rule, double log_forward, double log_reverse);

double accept_prob(const AcceptanceRule& rule, const TargetDensity& target,
                   const ProposalFamily& proposal, std::span<const double> theta,
                   std::span<const double> theta_next);

/// γ(θ,θ') = c[ρ(θ)q(θ,θ') − ρ(θ')q(θ',θ)] of the non-reversible
/// Crank-Nicolson rule, with ρ the standard Gaussian and c = (2σ)^{−d}.
double nonreversible_vorticity(const AcceptanceRule& rule, const TargetDensity& target,
                               const ProposalFamily& proposal, std::span<const double> theta,
                               std::span<const double> theta_next);

/// Accept-reject-based Markov kernel.
class ArbKernel {
 public:
  /// Throws DimensionMismatch or InvalidArgument for incompatible parts.
  ArbKernel(TargetDensity target, ProposalFamily proposal, AcceptanceRule rule);

  const TargetDensity& target() const { return target_; }
  const ProposalFamily& proposal() const { return proposal_; }
  const AcceptanceRule& rule() const { return rule_; }
  std::size_t dim() const { return target_.dim(); }

  double accept_prob(std::span<const double> theta, std::span<const double> theta_next) const;

 private:
  TargetDensity target_;
  ProposalFamily proposal_;
  AcceptanceRule rule_;
};

struct StepResult {
  Vector next;
  bool accepted = false;
  Vector proposal;
};

StepResult step(const ArbKernel& kernel, std::span<const double> theta, RandomStream& stream);

/// Monte Carlo estimate of A(θ) = ∫ a(θ,θ') q(θ,θ') dθ'.
struct AcceptanceEstimate {
  double mean = 0.0;
  /// Sample standard deviation / √N.
  double std_err = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

AcceptanceEstimate mc_acceptance(const ArbKernel& kernel, std::span<const double> theta,
                                 std::size_t n, RandomStream& stream);

/// One coordinate block of a random-scan kernel. `kernel_for` builds the
/// kernel on the block given the full current state.
struct ComponentUpdater {
  std::vector<std::size_t> block;
  std::function<ArbKernel(std::span<const double> state)> kernel_for;
};

class RandomScanKernel {
 public:
  /// Throws InvalidArgument unless every probability is in (0,1] and they sum
  /// to 1 within 1e-12, and the blocks are valid indices of a `dim`-vector.
  RandomScanKernel(std::size_t dim, std::vector<ComponentUpdater> components,
                   std::vector<double> probabilities);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return components_.size(); }
  const ComponentUpdater& component(std::size_t k) const { return components_[k]; }
  const std::vector<double>& probabilities() const { return probabilities_; }

  /// Kernel of component k at `state`, with the block value extracted.
  ArbKernel component_kernel(std::size_t k, std::span<const double> state) const;
  Vector block_values(std::size_t k, std::span<const double> state) const;

 private:
  std::size_t dim_;
  std::vector<ComponentUpdater> components_;
  std::vector<double> probabilities_;
};

struct RsStepResult {
  Vector next;
  std::size_t component = 0;
  bool accepted = false;
};

RsStepResult rs_step(const RandomScanKernel& kernel, std::span<const double> theta,
                     RandomStream& stream);

struct RsAcceptance {
  std::vector<AcceptanceEstimate> components;
  /// Σ λ_k Â_k.
  double combined = 0.0;
};

RsAcceptance rs_component_acceptances(const RandomScanKernel& kernel, std::span<const double> theta,
                                      std::size_t n, RandomStream& stream);

/// Random-scan random-walk MH on the sub-exponential 2-D target, with
/// N(θ_k, h) proposals on each exact full conditional.
RandomScanKernel make_subexponential_rs_kernel(double h, std::vector<double> probabilities = {0.5, 0.5});

}  // namespace arblobo
