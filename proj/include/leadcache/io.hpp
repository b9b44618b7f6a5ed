#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "leadcache/coefficients.hpp"
#include "leadcache/lp.hpp"
#include "leadcache/reward.hpp"

namespace leadcache {

struct MetricRow {
    std::size_t t;
    std::string policy;
    int hits;
    int fetches;
    long long cum_hits;
    long long cum_fetches;
};

// `t,policy,hits,fetches,cum_hits,cum_fetches`
void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows);

// `user_id,file_id,value`
void write_theta_csv(std::ostream& out, const std::vector<Coefficient>& theta);
std::vector<Coefficient> read_theta_csv(std::istream& in);

// `kind,entity_id,file_id,value` with kinds y (cache, file), slack (cache),
// z (user, file) and objective. Unused ids are -1.
void write_fractional_csv(std::ostream& out, const FractionalAllocation& frac);
FractionalAllocation read_fractional_csv(std::istream& in);

// `cache_id,file_id`
void write_configuration_csv(std::ostream& out, const CacheConfiguration& y);
CacheConfiguration read_configuration_csv(std::istream& in, int num_caches, int capacity);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace leadcache
