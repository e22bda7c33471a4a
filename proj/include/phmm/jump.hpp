#ifndef PHMM_JUMP_HPP_
#define PHMM_JUMP_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phmm/parallel.hpp"
#include "phmm/rng.hpp"
#include "phmm/trajectory.hpp"

namespace phmm {

/// Density-scaled Markov jump process on the nonnegative orthant:
///
///   X(t) = X(0) + sum_k eps N_k(eps^-1 int_0^t a_k(X(s)) ds) nu_k
///
/// with unit-rate Poisson processes N_k. Reactions whose jump would leave
/// the orthant get propensity 0.
class JumpModel {
 public:
  using Propensity = std::function<double(ConstVectorRef)>;

  struct Reaction {
    Propensity propensity;
    Vector stoichiometry;
    std::string name;
  };

  JumpModel(Eigen::Index dim, double eps);

  JumpModel& add_reaction(Propensity a, Vector nu, std::string name = {});

  Eigen::Index dim() const { return dim_; }
  double eps() const { return eps_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }

  /// Guarded propensities at x into `out` (one entry per reaction); returns
  /// their sum. Throws DomainError for negative values and IntegrationError
  /// for non-finite ones.
  double propensities(ConstVectorRef x, std::vector<double>& out) const;

  /// Relaxation time used to express tau in natural units (1 if unset).
  double relaxation_time = 1.0;

 private:
  Eigen::Index dim_;
  double eps_;
  std::vector<Reaction> reactions_;
};

/// Immigration at rate b and death at rate d x; stationary mean b/d,
/// stationary variance eps b/d. d = 0 gives a pure birth process.
JumpModel birth_death_model(double b, double d, double eps);

struct JumpRun {
  Trajectory path{1};
  bool absorbed = false;
  std::int64_t events = 0;
};

/// Gillespie direct method on [0, T]. Records the initial state, every
/// event (unless record_events is false) and the state at T. If the total
/// propensity vanishes the run halts with `absorbed` set and no further
/// records.
JumpRun ssa_run(const JumpModel& model, ConstVectorRef x0, double T, RngStream& stream,
                bool record_events = true);

/// Tau-leaping with leaps of length tau (the last one shortened to end at
/// T). Jump counts are drawn for all reactions from the propensities at the
/// start of the leap and applied in reaction order, each capped so that no
/// component goes negative.
JumpRun tau_leap_run(const JumpModel& model, ConstVectorRef x0, double T, double tau,
                     RngStream& stream, bool record_leaps = true);

/// X(T) of `runs` independent runs, run i drawing from stream key (i, 0).
/// tau <= 0 selects the SSA.
std::vector<Vector> jump_final_states(const JumpModel& model, ConstVectorRef x0, double T,
                                      double tau, std::int64_t runs, std::uint64_t root_seed,
                                      WorkerPool* pool = nullptr);

}  // namespace phmm

#endif  // PHMM_JUMP_HPP_
