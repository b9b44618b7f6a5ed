#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leadcache/types.hpp"

namespace leadcache {

// Requests over T slots for n users. Slot t holds one entry per user: the
// requested file id, or kNoRequest. At most one file per user per slot is
// structural here.
class RequestTrace {
public:
    RequestTrace() = default;
    RequestTrace(int catalog_size, int num_users, std::size_t num_slots = 0);

    int catalog_size() const noexcept { return catalog_; }
    int num_users() const noexcept { return n_; }
    std::size_t length() const noexcept { return slots_; }

    std::span<const FileId> slot(std::size_t t) const
    {
        return {requests_.data() + t * n_, static_cast<std::size_t>(n_)};
    }
    std::span<FileId> slot(std::size_t t)
    {
        return {requests_.data() + t * n_, static_cast<std::size_t>(n_)};
    }

    // Appends an all-idle slot and returns it.
    std::span<FileId> append_slot();

    // Slots [begin, end) as a standalone trace.
    RequestTrace subrange(std::size_t begin, std::size_t end) const;

    std::size_t num_requests() const;

    // Every entry is kNoRequest or in [0, N).
    bool valid() const;

    friend bool operator==(const RequestTrace&, const RequestTrace&) = default;

private:
    int catalog_ = 0;
    int n_ = 0;
    std::size_t slots_ = 0;
    std::vector<FileId> requests_;
};

enum class Assignment { round_robin, by_column };

// Raw rows `seq,file_id[,size]` (round_robin: row k goes to user k mod n,
// one slot per n rows) or assigned rows `t,user_id,file_id` (by_column).
// File ids are arbitrary tokens, densified in first-appearance order. A
// non-numeric first line is treated as a header. catalog_size == 0 means
// "size the catalog to the distinct ids".
RequestTrace load_trace(const std::string& path, int num_users, Assignment assignment,
                        int catalog_size);
RequestTrace parse_trace(std::istream& in, int num_users, Assignment assignment,
                         int catalog_size);

// Writes the assigned format `t,user_id,file_id`; idle entries are omitted.
void write_trace(const RequestTrace& trace, std::ostream& out);
void save_trace(const RequestTrace& trace, const std::string& path);

// P(file k) proportional to (k+1)^-alpha, i.i.d. across users and slots.
RequestTrace gen_zipf(int catalog_size, double alpha, int num_users, std::size_t slots,
                      std::uint64_t seed);

std::vector<double> zipf_weights(int catalog_size, double alpha);

enum class InterArrival { geometric, uniform_range };

struct RenewalParams {
    InterArrival kind = InterArrival::geometric;
    // geometric: per-user rows of per-file request rates p^i_f (a single row is
    // shared by every user). Each user draws one categorical outcome per slot,
    // so each (user, file) stream is Bernoulli(p^i_f) with geometric gaps.
    std::vector<std::vector<double>> rates;
    // uniform_range: per-file inclusive gap range [lo, hi] >= 1, shared by
    // every user. Simultaneous renewals of one user are deferred to its next
    // idle slot, lowest file id first.
    std::vector<std::pair<int, int>> gaps;
};

RequestTrace gen_renewal(int catalog_size, int num_users, std::size_t slots,
                         const RenewalParams& params, std::uint64_t seed);

// Catalog 2k; each slot draws one file uniformly and every user requests it.
RequestTrace gen_adversarial_uniform(int k, int num_users, std::size_t slots,
                                     std::uint64_t seed);

// Splits [0, T) into `parts` consecutive intervals of floor(T/parts) slots,
// the last one absorbing the remainder.
std::vector<std::pair<std::size_t, std::size_t>> split_intervals(std::size_t length, int parts);

// Histogram of recall distances: the position gap, in slot-major and user-id
// order, between successive requests of the same file (adjacent = 1).
std::vector<std::pair<std::size_t, std::size_t>> recall_distance_histogram(const RequestTrace& trace);

}  // namespace leadcache
