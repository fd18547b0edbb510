#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <map>

namespace slicesim {

// Deterministic RNG with hand-rolled distributions so that every draw is
// reproducible bit-for-bit from the seed alone.
class Rng {
  public:
    Rng() : engine_(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire-style rejection to avoid modulo bias.
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // standard normal via polar Box-Muller, no cached spare
    double normal() {
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

  private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Registry of named RNG streams, all derived from three root seeds. Nothing
// in the simulator may draw entropy from anywhere else. Copyable so that a
// whole simulation state can be snapshotted and replayed.
class RngRegistry {
  public:
    RngRegistry() : RngRegistry(0, 0, 0) {}
    RngRegistry(std::uint64_t scenario_seed, std::uint64_t agent_seed,
                std::uint64_t trace_seed)
        : scenario_seed_(scenario_seed),
          agent_seed_(agent_seed),
          trace_seed_(trace_seed) {}

    // Stream names are namespaced: "scenario.*", "agent.*", "trace.*".
    // The prefix selects the root seed; unknown prefixes fold into scenario.
    Rng& stream(const std::string& name) {
        auto it = streams_.find(name);
        if (it != streams_.end()) return it->second;
        std::uint64_t root = scenario_seed_;
        if (name.rfind("agent.", 0) == 0) root = agent_seed_;
        else if (name.rfind("trace.", 0) == 0) root = trace_seed_;
        std::uint64_t seed = splitmix64(root ^ splitmix64(fnv1a64(name)));
        return streams_.emplace(name, Rng(seed)).first->second;
    }

    std::uint64_t scenario_seed() const { return scenario_seed_; }
    std::uint64_t agent_seed() const { return agent_seed_; }
    std::uint64_t trace_seed() const { return trace_seed_; }

  private:
    std::uint64_t scenario_seed_;
    std::uint64_t agent_seed_;
    std::uint64_t trace_seed_;
    std::map<std::string, Rng> streams_;
};

}  // namespace slicesim
