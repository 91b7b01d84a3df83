#include "hitrun/sampler.hpp"

#include <thread>

namespace hitrun {

void ChainConfig::validate() const {
    if (burn_in < 0) throw std::invalid_argument("ChainConfig: burn_in must be >= 0");
    if (steps <= burn_in) throw std::invalid_argument("ChainConfig: steps must exceed burn_in");
    if (thin < 1) throw std::invalid_argument("ChainConfig: thin must be >= 1");
}

long default_burn_in(int dim) { return 10L * dim; }

Rvec hit_and_run_step(const ConvexBody& body, const Rvec& position, Rng& rng) {
    Rvec e(body.dim());
    for (int i = 0; i < e.size(); ++i) e(i) = rng.gaussian();
    e.normalize();
    const Chord c = body.chord(position, e);  // throws if position is outside
    const double t = c.t_min + rng.uniform01() * (c.t_max - c.t_min);
    return position + t * e;
}

Chain::Chain(const ConvexBody& body, const ChainConfig& config)
    : body_(body),
      config_(config),
      position_(config.start.value_or(body.center())),
      step_index_(0),
      rng_(config.seed) {
    config_.validate();
    if (position_.size() != body.dim())
        throw std::invalid_argument("Chain: start point dimension mismatch");
    if (!body.contains(position_, 1e-9))
        throw std::invalid_argument("Chain: start point not inside body");
}

Chain::Chain(const ConvexBody& body, const ChainConfig& config, Rvec position,
             long step_index, const std::string& rng_state)
    : body_(body), config_(config), position_(std::move(position)),
      step_index_(step_index), rng_(0) {
    rng_.set_state(rng_state);
}

bool Chain::advance() {
    if (done()) throw std::logic_error("Chain::advance: chain already finished");
    position_ = hit_and_run_step(body_, position_, rng_);
    ++step_index_;
    return step_index_ > config_.burn_in &&
           (step_index_ - config_.burn_in) % config_.thin == 0;
}

nlohmann::json Chain::checkpoint() const {
    nlohmann::json j;
    j["body"] = body_.descriptor();
    j["config"] = {{"steps", config_.steps},
                   {"burn_in", config_.burn_in},
                   {"thin", config_.thin},
                   {"seed", config_.seed}};
    j["step"] = step_index_;
    j["rng_state"] = rng_.state();
    j["position"] = std::vector<double>(position_.data(), position_.data() + position_.size());
    return j;
}

Chain Chain::restore(const ConvexBody& body, const nlohmann::json& checkpoint) {
    if (checkpoint.at("body") != body.descriptor())
        throw std::invalid_argument("Chain::restore: checkpoint was written for a different body");
    ChainConfig cfg;
    const auto& jc = checkpoint.at("config");
    cfg.steps = jc.at("steps").get<long>();
    cfg.burn_in = jc.at("burn_in").get<long>();
    cfg.thin = jc.at("thin").get<long>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();
    cfg.validate();
    const auto pos = checkpoint.at("position").get<std::vector<double>>();
    Rvec position = Eigen::Map<const Rvec>(pos.data(), static_cast<long>(pos.size()));
    return Chain(body, cfg, std::move(position), checkpoint.at("step").get<long>(),
                 checkpoint.at("rng_state").get<std::string>());
}

void run_chain(const ConvexBody& body, const ChainConfig& config,
               const std::function<void(const Rvec&)>& sink) {
    Chain chain(body, config);
    while (!chain.done())
        if (chain.advance()) sink(chain.position());
}

std::vector<Rvec> run_chain(const ConvexBody& body, const ChainConfig& config) {
    config.validate();
    std::vector<Rvec> out;
    out.reserve(static_cast<std::size_t>(config.retained()));
    run_chain(body, config, [&](const Rvec& p) { out.push_back(p); });
    return out;
}

std::vector<Rvec> run_chains_parallel(const ConvexBody& body,
                                      const ChainConfig& base_config,
                                      int num_chains) {
    if (num_chains < 1) throw std::invalid_argument("run_chains_parallel: num_chains >= 1");
    base_config.validate();
    if (num_chains == 1) return run_chain(body, base_config);
    std::vector<std::vector<Rvec>> parts(num_chains);
    std::vector<std::thread> workers;
    workers.reserve(num_chains);
    for (int c = 0; c < num_chains; ++c) {
        workers.emplace_back([&, c] {
            ChainConfig cfg = base_config;
            cfg.seed = derive_seed(base_config.seed, static_cast<std::uint64_t>(c));
            parts[c] = run_chain(body, cfg);
        });
    }
    for (auto& w : workers) w.join();
    std::vector<Rvec> merged;
    merged.reserve(static_cast<std::size_t>(base_config.retained()) * num_chains);
    for (auto& part : parts)
        merged.insert(merged.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    return merged;
}

}  // namespace hitrun
