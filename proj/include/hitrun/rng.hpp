#ifndef HITRUN_RNG_HPP
#define HITRUN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <sstream>
#include <string>

namespace hitrun {

// Finalizer of the splitmix64 generator; used to derive per-chain seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream) {
    return splitmix64(base_seed ^ splitmix64(stream));
}

// mt19937_64 wrapped with deterministic variate generation.  All variates
// are produced from raw 64-bit draws (no std::*_distribution), so output is
// byte-identical across standard library implementations.  The full engine
// state round-trips through a string for checkpointing.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // uniform on [0,1), 53-bit resolution
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // uniform on (0,1]; safe as a log() argument
    double uniform01_open_left() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; stateless (one value per call)
    double gaussian() {
        const double u1 = uniform01_open_left();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::string state() const {
        std::ostringstream os;
        os << gen_;
        return os.str();
    }

    void set_state(const std::string& s) {
        std::istringstream is(s);
        is >> gen_;
        if (!is) throw std::invalid_argument("Rng::set_state: malformed state string");
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace hitrun

#endif
