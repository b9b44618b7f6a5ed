#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leadcache/coefficients.hpp"
#include "leadcache/lp.hpp"
#include "leadcache/network.hpp"
#include "leadcache/reward.hpp"

namespace leadcache {

// phi(y) = sum theta+ (1 - prod_{j in N(i)} (1 - y^j_f)) and
// L(y) = sum theta+ min(1, sum_{j in N(i)} y^j_f) over a fractional y.
class SurrogateEvaluator {
public:
    SurrogateEvaluator(std::span<const Coefficient> theta_plus, const BipartiteNetwork& net);

    double phi(const FractionalAllocation& y) const;
    double L(const FractionalAllocation& y) const;
    // 1 - (1 - 1/Delta)^Delta, 1 when Delta <= 1.
    double alpha() const;

    const BipartiteNetwork& network() const noexcept { return *net_; }
    std::span<const Coefficient> coefficients() const noexcept { return theta_; }

private:
    template <class Term>
    double accumulate(const FractionalAllocation& y, Term term) const;

    const BipartiteNetwork* net_;
    std::vector<Coefficient> theta_;  // positive entries only, sorted
};

double approximation_factor(int max_user_degree);

// Pipage rounding with cache-wise pairing. When phi_trace is given, phi of
// the starting point and of every iterate is appended to it.
CacheConfiguration pipage_round(const FractionalAllocation& frac, const SurrogateEvaluator& eval,
                                std::vector<double>* phi_trace = nullptr);

// Systematic sampling of exactly C indices with inclusion probabilities p.
std::vector<int> madow_sample(std::span<const double> p, int count, double u);

struct RoundedAction {
    CacheConfiguration config;
    VirtualAction z;  // over the (user, file) pairs of frac.z
};

// Each cache sampled independently from its own uniform, derived from
// (seed, cache); the dummy mass takes part and is dropped afterwards.
RoundedAction madow_round(const FractionalAllocation& frac, const BipartiteNetwork& net,
                          std::uint64_t seed);

// C independent draws per cache with P(f) = y^j_f / C. Probability left to
// the dummy mass yields nothing.
RoundedAction replacement_round(const FractionalAllocation& frac, const BipartiteNetwork& net,
                                std::uint64_t seed);

// Configuration of the coordinates equal to one (within 1e-9).
CacheConfiguration integral_part(const FractionalAllocation& frac);

}  // namespace leadcache
