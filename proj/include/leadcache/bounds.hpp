#pragma once

#include <cstddef>

#include "leadcache/network.hpp"

namespace leadcache {

// eta_{T+1} m C sqrt(2d(ln(N/C)+1)) + (n^{3/2}/2) sum_{t=1}^T 1/eta_t, with
// the integral learning rate.
double upper_bound(int n, int m, int C, int d, int N, std::size_t T);

// max(sqrt(mnCT/2pi), d sqrt(mCT/2pi)); the vanishing correction is omitted.
double lower_bound(int n, int m, int C, int d, double T);

struct BoundReport {
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    double alpha = 1.0;  // 1 - (1 - 1/Delta)^Delta

    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

BoundReport bound_report(const BipartiteNetwork& net, int capacity, int catalog_size,
                         std::size_t T);

}  // namespace leadcache
