#include "investsim/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "investsim/errors.hpp"

namespace investsim {

namespace {

constexpr double kWeightRenormCap = 1e100;

void check_feedback(int num_arms, int arm, double utility) {
  if (arm < 0 || arm >= num_arms)
    throw ContractViolation("learner feedback: arm index out of range");
  if (!(utility >= 0.0 && utility <= 1.0))
    throw ContractViolation(
        "learner feedback: utility must be normalized to [0,1], got " +
        std::to_string(utility));
}

}  // namespace

Exp3Learner::Exp3Learner(int num_arms, int horizon) {
  if (num_arms < 1)
    throw std::invalid_argument("exp3: at least one arm required");
  if (horizon < 1) throw std::invalid_argument("exp3: horizon must be >= 1");
  weights_.assign(num_arms, 1.0);
  const double k = static_cast<double>(num_arms);
  gamma_ = std::min(
      1.0, std::sqrt(k * std::log(k) / ((std::numbers::e - 1.0) * horizon)));
}

Exp3Learner::Exp3Learner(std::vector<double> weights, double gamma)
    : weights_(std::move(weights)), gamma_(gamma) {
  if (weights_.empty())
    throw std::invalid_argument("exp3: at least one arm required");
  for (double w : weights_)
    if (!(w > 0.0)) throw std::invalid_argument("exp3: weights must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("exp3: gamma must lie in [0,1]");
}

std::vector<double> Exp3Learner::probabilities() const {
  const double k = static_cast<double>(weights_.size());
  double sum = 0.0;
  for (double w : weights_) sum += w;
  std::vector<double> probs(weights_.size());
  for (size_t i = 0; i < weights_.size(); ++i)
    probs[i] = (1.0 - gamma_) * weights_[i] / sum + gamma_ / k;
  return probs;
}

int Exp3Learner::choose(int, Rng& rng) {
  const std::vector<double> probs = probabilities();
  return static_cast<int>(rng.sample_discrete(probs));
}

void Exp3Learner::observe(int, int arm, double utility) {
  check_feedback(num_arms(), arm, utility);
  const std::vector<double> probs = probabilities();
  const double k = static_cast<double>(weights_.size());
  weights_[arm] *= std::exp(gamma_ * utility / (k * probs[arm]));
  const double top = *std::max_element(weights_.begin(), weights_.end());
  if (top > kWeightRenormCap) {
    // Probabilities are scale-invariant; keep the weights finite.
    for (double& w : weights_) w /= top;
  }
}

FixedArmLearner::FixedArmLearner(int num_arms, int arm)
    : num_arms_(num_arms), arm_(arm), id_("fixed:" + std::to_string(arm)) {
  if (arm < 0 || arm >= num_arms)
    throw std::invalid_argument("fixed learner: arm out of range");
}

void FixedArmLearner::observe(int, int arm, double utility) {
  check_feedback(num_arms_, arm, utility);
}

UniformRandomLearner::UniformRandomLearner(int num_arms) : num_arms_(num_arms) {
  if (num_arms < 1)
    throw std::invalid_argument("uniform learner: at least one arm required");
}

void UniformRandomLearner::observe(int, int arm, double utility) {
  check_feedback(num_arms_, arm, utility);
}

EpsilonGreedyLearner::EpsilonGreedyLearner(int num_arms)
    : sums_(num_arms, 0.0), counts_(num_arms, 0) {
  if (num_arms < 1)
    throw std::invalid_argument("eps-greedy: at least one arm required");
}

int EpsilonGreedyLearner::leader() const {
  for (size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i] == 0) return static_cast<int>(i);
  int best = 0;
  double best_mean = sums_[0] / static_cast<double>(counts_[0]);
  for (size_t i = 1; i < counts_.size(); ++i) {
    const double mean = sums_[i] / static_cast<double>(counts_[i]);
    if (mean > best_mean) {
      best_mean = mean;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int EpsilonGreedyLearner::choose(int round, Rng& rng) {
  const double eps =
      std::min(1.0, static_cast<double>(num_arms()) / std::max(round, 1));
  if (rng.next_double() < eps)
    return static_cast<int>(rng.next_below(num_arms()));
  return leader();
}

void EpsilonGreedyLearner::observe(int, int arm, double utility) {
  check_feedback(num_arms(), arm, utility);
  sums_[arm] += utility;
  counts_[arm] += 1;
}

FollowTheLeaderLearner::FollowTheLeaderLearner(int num_arms)
    : sums_(num_arms, 0.0), counts_(num_arms, 0) {
  if (num_arms < 1)
    throw std::invalid_argument("ftl: at least one arm required");
}

int FollowTheLeaderLearner::choose(int, Rng&) {
  for (size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i] == 0) return static_cast<int>(i);
  int best = 0;
  double best_mean = sums_[0] / static_cast<double>(counts_[0]);
  for (size_t i = 1; i < counts_.size(); ++i) {
    const double mean = sums_[i] / static_cast<double>(counts_[i]);
    if (mean > best_mean) {
      best_mean = mean;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void FollowTheLeaderLearner::observe(int, int arm, double utility) {
  check_feedback(num_arms(), arm, utility);
  sums_[arm] += utility;
  counts_[arm] += 1;
}

std::unique_ptr<Learner> make_learner(std::string_view id, int num_arms,
                                      int horizon) {
  if (id == "exp3") return std::make_unique<Exp3Learner>(num_arms, horizon);
  if (id == "uniform") return std::make_unique<UniformRandomLearner>(num_arms);
  if (id == "eps-greedy")
    return std::make_unique<EpsilonGreedyLearner>(num_arms);
  if (id == "ftl") return std::make_unique<FollowTheLeaderLearner>(num_arms);
  if (id.starts_with("fixed:")) {
    const int arm = std::stoi(std::string(id.substr(6)));
    return std::make_unique<FixedArmLearner>(num_arms, arm);
  }
  throw std::invalid_argument("unknown learner id: " + std::string(id));
}

}  // namespace investsim
