#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "investsim/rng.hpp"

namespace investsim {

// Bandit-feedback learner over a fixed arm set. choose() at round t may use
// only past observations, the arm count, the horizon, and the rng it is
// handed; observe() receives the chosen arm's utility scaled to [0, 1].
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string_view id() const = 0;
  virtual int num_arms() const = 0;
  virtual int choose(int round, Rng& rng) = 0;
  virtual void observe(int round, int arm, double utility) = 0;
};

// Exponential-weights bandit learner. Mixing rate
// gamma = min(1, sqrt(K ln K / ((e - 1) T))), weights start at 1, and the
// chosen arm's weight is multiplied by exp(gamma * u / (K * p[arm])).
class Exp3Learner : public Learner {
 public:
  Exp3Learner(int num_arms, int horizon);
  // Direct state injection, for replay and formula checks.
  Exp3Learner(std::vector<double> weights, double gamma);

  std::string_view id() const override { return "exp3"; }
  int num_arms() const override { return static_cast<int>(weights_.size()); }
  int choose(int round, Rng& rng) override;
  void observe(int round, int arm, double utility) override;

  double gamma() const { return gamma_; }
  const std::vector<double>& weights() const { return weights_; }
  // Sampling distribution: (1 - gamma) q/sum(q) + gamma/K. Sums to 1 within
  // 1e-12 and every entry is at least gamma/K.
  std::vector<double> probabilities() const;

 private:
  std::vector<double> weights_;
  double gamma_ = 0.0;
};

class FixedArmLearner : public Learner {
 public:
  FixedArmLearner(int num_arms, int arm);
  std::string_view id() const override { return id_; }
  int num_arms() const override { return num_arms_; }
  int choose(int, Rng&) override { return arm_; }
  void observe(int, int, double utility) override;

 private:
  int num_arms_;
  int arm_;
  std::string id_;
};

class UniformRandomLearner : public Learner {
 public:
  explicit UniformRandomLearner(int num_arms);
  std::string_view id() const override { return "uniform"; }
  int num_arms() const override { return num_arms_; }
  int choose(int, Rng& rng) override {
    return static_cast<int>(rng.next_below(num_arms_));
  }
  void observe(int, int, double utility) override;

 private:
  int num_arms_;
};

// Explore with probability eps_t = min(1, K/t), otherwise lead by observed
// mean (unpulled arms first, then lowest index on ties).
class EpsilonGreedyLearner : public Learner {
 public:
  explicit EpsilonGreedyLearner(int num_arms);
  std::string_view id() const override { return "eps-greedy"; }
  int num_arms() const override { return static_cast<int>(counts_.size()); }
  int choose(int round, Rng& rng) override;
  void observe(int round, int arm, double utility) override;

 private:
  int leader() const;
  std::vector<double> sums_;
  std::vector<int64_t> counts_;
};

// Plays the arm with the best observed mean so far (its own bandit feedback
// only); unpulled arms are tried first in index order.
class FollowTheLeaderLearner : public Learner {
 public:
  explicit FollowTheLeaderLearner(int num_arms);
  std::string_view id() const override { return "ftl"; }
  int num_arms() const override { return static_cast<int>(counts_.size()); }
  int choose(int round, Rng& rng) override;
  void observe(int round, int arm, double utility) override;

 private:
  std::vector<double> sums_;
  std::vector<int64_t> counts_;
};

// Ids: "exp3", "uniform", "eps-greedy", "ftl", "fixed:<k>".
std::unique_ptr<Learner> make_learner(std::string_view id, int num_arms,
                                      int horizon);

}  // namespace investsim
