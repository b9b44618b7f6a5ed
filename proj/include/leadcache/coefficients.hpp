#pragma once

#include <span>
#include <vector>

#include "leadcache/types.hpp"

namespace leadcache {

// One (user, file) objective weight: a request count, a perturbed count, or
// its positive part.
struct Coefficient {
    UserId user;
    FileId file;
    double value;

    friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

// Distinct files carrying a strictly positive weight, ascending.
std::vector<FileId> positive_support(std::span<const Coefficient> theta);

}  // namespace leadcache
