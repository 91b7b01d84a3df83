#ifndef HITRUN_SAMPLER_HPP
#define HITRUN_SAMPLER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "hitrun/bodies.hpp"
#include "hitrun/rng.hpp"

namespace hitrun {

struct ChainConfig {
    long steps = 0;      // total iterations
    long burn_in = 0;    // discarded prefix
    long thin = 1;       // keep every thin-th state after burn-in
    std::uint64_t seed = 0;
    std::optional<Rvec> start;  // default: body center

    long retained() const { return (steps - burn_in) / thin; }
    void validate() const;
};

// Conservative default: 10 * d steps.
long default_burn_in(int dim);

// One hit-and-run update: uniform direction on S^{d-1}, chord through the
// current point, uniform t on the chord.
Rvec hit_and_run_step(const ConvexBody& body, const Rvec& position, Rng& rng);

// Sequential chain with checkpoint/resume support.  The checkpoint JSON
// holds {body, config, step, rng_state, position} and restores a chain
// that continues byte-identically.
class Chain {
public:
    Chain(const ConvexBody& body, const ChainConfig& config);
    static Chain restore(const ConvexBody& body, const nlohmann::json& checkpoint);

    const Rvec& position() const { return position_; }
    long step_index() const { return step_index_; }
    const ChainConfig& config() const { return config_; }
    bool done() const { return step_index_ >= config_.steps; }

    // Advances one step; returns true if the new state is retained.
    bool advance();

    nlohmann::json checkpoint() const;

private:
    Chain(const ConvexBody& body, const ChainConfig& config, Rvec position,
          long step_index, const std::string& rng_state);

    const ConvexBody& body_;
    ChainConfig config_;
    Rvec position_;
    long step_index_;
    Rng rng_;
};

// Runs a chain to completion, feeding retained samples to the sink.
void run_chain(const ConvexBody& body, const ChainConfig& config,
               const std::function<void(const Rvec&)>& sink);
std::vector<Rvec> run_chain(const ConvexBody& body, const ChainConfig& config);

// Independent chains with seeds derived as
// splitmix64(base_seed ^ splitmix64(chain_index)); output is the
// concatenation of per-chain outputs in chain-index order.
std::vector<Rvec> run_chains_parallel(const ConvexBody& body,
                                      const ChainConfig& base_config,
                                      int num_chains);

}  // namespace hitrun

#endif
