#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "leadcache/coefficients.hpp"
#include "leadcache/kernels.hpp"
#include "leadcache/network.hpp"

namespace leadcache {

// LP relaxation of the placement problem:
//   max  sum_k coef_k z_k
//   s.t. z_k <= sum_{j in N(user_k)} y^j_{file_k}     (coverage, one row per pair)
//        sum_f y^j_f + slack_j = C                      (capacity, equality form)
//        0 <= y, z <= 1,  0 <= slack_j <= C
// The per-cache slack carries the mass of the zero-value dummy files.
struct LpInstance {
    struct Pair {
        UserId user;
        std::size_t file_index;  // into files
        double coef;             // >= 0
    };

    int num_users = 0;
    int num_caches = 0;
    int capacity = 0;
    std::vector<FileId> files;         // ascending
    std::vector<Pair> pairs;           // sorted by (user, file)
    std::vector<std::vector<CacheId>> user_caches;  // copy of the adjacency

    // y, dummy slack and z variables.
    std::size_t num_structural_variables() const
    {
        return static_cast<std::size_t>(num_caches) * (files.size() + 1) + pairs.size();
    }
};

// Restricts variables to files with some positive coefficient (or every
// given file when keep_zero is set) and one z per listed (user, file).
LpInstance build_lp(std::span<const Coefficient> theta_plus, const BipartiteNetwork& net,
                    int capacity, bool keep_zero = false);

struct FractionalAllocation {
    int num_caches = 0;
    int capacity = 0;
    std::vector<FileId> files;     // ascending
    std::vector<double> y;         // num_caches x files.size(), row-major
    std::vector<double> slack;     // dummy mass per cache
    std::vector<Coefficient> z;    // (user, file, value), sorted
    double objective = 0.0;

    double y_at(CacheId j, std::size_t l) const { return y[j * files.size() + l]; }
    double& y_at(CacheId j, std::size_t l) { return y[j * files.size() + l]; }
    // Fractional y of one file, or 0 when the file is outside the support.
    double y_of(CacheId j, FileId f) const;
    double mass(CacheId j) const;
};

// Bounds, capacity equalities and (given the instance) coverage rows, all
// within tol. Returns the worst violation found.
double max_violation(const FractionalAllocation& frac, const LpInstance& inst);

struct LpOptions {
    double tol = 1e-6;
    std::size_t max_iterations = 0;  // 0: derived from the instance size
    bool parallel = true;
    // Rebuild the tableau from the slack basis after this many warm solves.
    std::size_t refactor_interval = 256;
};

// Bounded-variable primal simplex on a dense tableau, starting from the all
// slack basis. The tableau is kept between calls so that objective changes
// and appended files/pairs are warm-started from the last optimal basis.
class LpSolver {
public:
    LpSolver(int num_users, int num_caches, int capacity,
             std::vector<std::vector<CacheId>> user_caches, LpOptions options = {});
    explicit LpSolver(const LpInstance& instance, LpOptions options = {});

    // Appends a file column per cache if the file is new.
    void add_file(FileId f);
    // Appends a coverage row; the file is added first if needed.
    void add_pair(UserId user, FileId f, double coef);
    bool has_pair(UserId user, FileId f) const;
    void set_coefficient(UserId user, FileId f, double coef);
    // Every (user, file) pair currently in the LP, sorted.
    std::vector<std::pair<UserId, FileId>> pairs() const;

    FractionalAllocation solve();

    std::size_t num_rows() const noexcept { return rows_.size(); }
    std::size_t num_columns() const noexcept { return cols_.size(); }
    std::size_t last_pivots() const noexcept { return last_pivots_; }
    std::size_t total_pivots() const noexcept { return total_pivots_; }
    std::size_t refactorizations() const noexcept { return refactors_; }

    // The instance currently represented, in canonical (sorted) order.
    LpInstance instance() const;

private:
    enum class Kind : std::uint8_t { z, y, cover_slack, cap_slack };
    enum class Status : std::uint8_t { basic, lower, upper };

    struct Column {
        Kind kind;
        std::int32_t a;   // z/cover_slack: pair index; y/cap_slack: cache
        std::int32_t b;   // y: file index
        double lb, ub, cost;
    };

    struct PairRec {
        UserId user;
        std::size_t file;
        std::size_t z_col;
    };

    std::size_t add_column(Column c);
    std::size_t y_col(CacheId j, std::size_t file) const { return y_cols_[file][j]; }
    void reset_to_slack_basis();
    void run_simplex();
    double value_of(std::size_t col) const;
    FractionalAllocation extract() const;
    double residual() const;

    int n_, m_, capacity_;
    std::vector<std::vector<CacheId>> user_caches_;
    LpOptions opt_;

    std::vector<FileId> file_ids_;  // insertion order
    std::vector<std::vector<std::size_t>> y_cols_;  // [file][cache]
    std::vector<PairRec> pairs_;
    std::map<std::pair<UserId, FileId>, std::size_t> pair_index_;

    std::vector<Column> cols_;
    std::vector<Status> status_;
    kernels::Rows rows_;
    std::vector<std::size_t> basis_;   // basic column per row
    std::vector<double> beta_;         // basic values
    std::vector<double> reduced_;
    std::vector<std::size_t> slack_of_row_;

    std::size_t solves_since_refactor_ = 0;
    std::size_t last_pivots_ = 0;
    std::size_t total_pivots_ = 0;
    std::size_t refactors_ = 0;
};

// Cold solve of one instance.
FractionalAllocation solve_lp(const LpInstance& instance, double tol = 1e-6);

}  // namespace leadcache
