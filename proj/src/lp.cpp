#include "leadcache/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace leadcache {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr std::size_t kBlandAfter = 50;

}  // namespace

LpInstance build_lp(std::span<const Coefficient> theta_plus, const BipartiteNetwork& net,
                    int capacity, bool keep_zero)
{
    if (capacity < 1)
        throw InvalidArgument("build_lp: capacity must be >= 1");
    std::map<std::pair<UserId, FileId>, double> merged;
    for (const auto& c : theta_plus) {
        if (c.value < 0.0 || !std::isfinite(c.value))
            throw InvalidArgument("build_lp: coefficients must be finite and >= 0");
        if (c.user < 0 || c.user >= net.num_users() || c.file < 0)
            throw InvalidArgument("build_lp: coefficient index out of range");
        if (c.value > 0.0 || keep_zero)
            merged[{c.user, c.file}] += c.value;
    }
    LpInstance inst;
    inst.num_users = net.num_users();
    inst.num_caches = net.num_caches();
    inst.capacity = capacity;
    for (const auto& [key, v] : merged)
        inst.files.push_back(key.second);
    std::sort(inst.files.begin(), inst.files.end());
    inst.files.erase(std::unique(inst.files.begin(), inst.files.end()), inst.files.end());
    for (const auto& [key, v] : merged) {
        const auto l = std::lower_bound(inst.files.begin(), inst.files.end(), key.second) -
                       inst.files.begin();
        inst.pairs.push_back({key.first, static_cast<std::size_t>(l), v});
    }
    inst.user_caches.resize(net.num_users());
    for (UserId i = 0; i < net.num_users(); ++i) {
        auto cs = net.user_caches(i);
        inst.user_caches[i].assign(cs.begin(), cs.end());
    }
    return inst;
}

double FractionalAllocation::y_of(CacheId j, FileId f) const
{
    auto it = std::lower_bound(files.begin(), files.end(), f);
    if (it == files.end() || *it != f)
        return 0.0;
    return y_at(j, static_cast<std::size_t>(it - files.begin()));
}

double FractionalAllocation::mass(CacheId j) const
{
    double s = slack[j];
    for (std::size_t l = 0; l < files.size(); ++l)
        s += y_at(j, l);
    return s;
}

double max_violation(const FractionalAllocation& frac, const LpInstance& inst)
{
    double worst = 0.0;
    auto bound = [&](double v, double lo, double hi) {
        worst = std::max({worst, lo - v, v - hi});
    };
    for (double v : frac.y)
        bound(v, 0.0, 1.0);
    for (double v : frac.slack)
        bound(v, 0.0, frac.capacity);
    for (CacheId j = 0; j < frac.num_caches; ++j)
        worst = std::max(worst, std::abs(frac.mass(j) - frac.capacity));
    for (const auto& zc : frac.z) {
        bound(zc.value, 0.0, 1.0);
        double cover = 0.0;
        for (CacheId j : inst.user_caches[zc.user])
            cover += frac.y_of(j, zc.file);
        worst = std::max(worst, zc.value - cover);
    }
    return worst;
}

LpSolver::LpSolver(int num_users, int num_caches, int capacity,
                   std::vector<std::vector<CacheId>> user_caches, LpOptions options)
    : n_(num_users), m_(num_caches), capacity_(capacity), user_caches_(std::move(user_caches)),
      opt_(options)
{
    if (capacity_ < 1)
        throw InvalidArgument("LpSolver: capacity must be >= 1");
    if (static_cast<int>(user_caches_.size()) != n_)
        throw InvalidArgument("LpSolver: adjacency size mismatch");
    for (CacheId j = 0; j < m_; ++j)
        add_column({Kind::cap_slack, j, 0, 0.0, static_cast<double>(capacity_), 0.0});
    reset_to_slack_basis();
}

LpSolver::LpSolver(const LpInstance& inst, LpOptions options)
    : LpSolver(inst.num_users, inst.num_caches, inst.capacity, inst.user_caches, options)
{
    for (FileId f : inst.files)
        add_file(f);
    for (const auto& p : inst.pairs)
        add_pair(p.user, inst.files[p.file_index], p.coef);
}

std::size_t LpSolver::add_column(Column c)
{
    const std::size_t idx = cols_.size();
    cols_.push_back(c);
    status_.push_back(Status::lower);
    for (auto& row : rows_)
        row.push_back(0.0);
    return idx;
}

double LpSolver::value_of(std::size_t col) const
{
    switch (status_[col]) {
    case Status::lower:
        return cols_[col].lb;
    case Status::upper:
        return cols_[col].ub;
    case Status::basic:
        break;
    }
    const auto it = std::find(basis_.begin(), basis_.end(), col);
    return beta_[static_cast<std::size_t>(it - basis_.begin())];
}

void LpSolver::add_file(FileId f)
{
    if (std::find(file_ids_.begin(), file_ids_.end(), f) != file_ids_.end())
        return;
    const std::size_t l = file_ids_.size();
    file_ids_.push_back(f);
    y_cols_.emplace_back(m_);
    for (CacheId j = 0; j < m_; ++j) {
        const std::size_t c =
            add_column({Kind::y, j, static_cast<std::int32_t>(l), 0.0, 1.0, 0.0});
        y_cols_[l][j] = c;
        // B^-1 a: the original column is the unit vector of capacity row j,
        // and the tableau columns of the row slacks hold B^-1.
        const std::size_t s = slack_of_row_[j];
        for (auto& row : rows_)
            row[c] = row[s];
    }
}

bool LpSolver::has_pair(UserId user, FileId f) const
{
    return pair_index_.count({user, f}) > 0;
}

void LpSolver::add_pair(UserId user, FileId f, double coef)
{
    if (user < 0 || user >= n_)
        throw InvalidArgument("LpSolver: user out of range");
    if (coef < 0.0)
        throw InvalidArgument("LpSolver: coefficients must be >= 0");
    if (has_pair(user, f))
        throw InvalidArgument("LpSolver: duplicate (user, file) pair");
    add_file(f);
    const std::size_t l =
        static_cast<std::size_t>(std::find(file_ids_.begin(), file_ids_.end(), f) - file_ids_.begin());
    const auto k = static_cast<std::int32_t>(pairs_.size());
    const std::size_t z = add_column({Kind::z, k, 0, 0.0, 1.0, coef});
    const std::size_t s = add_column({Kind::cover_slack, k, 0, 0.0, kInf, 0.0});
    pair_index_[{user, f}] = pairs_.size();
    pairs_.push_back({user, l, z});

    std::vector<double> row(cols_.size(), 0.0);
    row[z] = 1.0;
    row[s] = 1.0;
    double cover = 0.0;
    for (CacheId j : user_caches_[user]) {
        const std::size_t yc = y_col(j, l);
        row[yc] -= 1.0;
        cover += value_of(yc);
    }
    // Express the row in the current basis: cancel every basic y entry.
    for (CacheId j : user_caches_[user]) {
        const std::size_t yc = y_col(j, l);
        if (status_[yc] != Status::basic)
            continue;
        const auto r = static_cast<std::size_t>(std::find(basis_.begin(), basis_.end(), yc) -
                                                basis_.begin());
        const double f_ = row[yc];
        const auto& br = rows_[r];
        for (std::size_t c = 0; c < row.size(); ++c)
            if (br[c] != 0.0)
                row[c] -= f_ * br[c];
        row[yc] = 0.0;
    }
    rows_.push_back(std::move(row));
    basis_.push_back(s);
    beta_.push_back(std::max(0.0, cover));
    status_[s] = Status::basic;
    slack_of_row_.push_back(s);
}

void LpSolver::set_coefficient(UserId user, FileId f, double coef)
{
    if (coef < 0.0)
        throw InvalidArgument("LpSolver: coefficients must be >= 0");
    auto it = pair_index_.find({user, f});
    if (it == pair_index_.end())
        throw InvalidArgument("LpSolver: unknown (user, file) pair");
    cols_[pairs_[it->second].z_col].cost = coef;
}

std::vector<std::pair<UserId, FileId>> LpSolver::pairs() const
{
    std::vector<std::pair<UserId, FileId>> out;
    for (const auto& [key, k] : pair_index_)
        out.push_back(key);
    return out;
}

void LpSolver::reset_to_slack_basis()
{
    const std::size_t width = cols_.size();
    rows_.assign(static_cast<std::size_t>(m_) + pairs_.size(), std::vector<double>(width, 0.0));
    basis_.assign(rows_.size(), 0);
    beta_.assign(rows_.size(), 0.0);
    slack_of_row_.assign(rows_.size(), 0);
    std::fill(status_.begin(), status_.end(), Status::lower);
    for (CacheId j = 0; j < m_; ++j) {
        rows_[j][j] = 1.0;  // cap_slack columns come first
        basis_[j] = static_cast<std::size_t>(j);
        slack_of_row_[j] = static_cast<std::size_t>(j);
        beta_[j] = capacity_;
        status_[j] = Status::basic;
        for (auto& per_file : y_cols_)
            rows_[j][per_file[j]] = 1.0;
    }
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
        auto& row = rows_[m_ + k];
        const auto& p = pairs_[k];
        const std::size_t s = p.z_col + 1;
        row[p.z_col] = 1.0;
        row[s] = 1.0;
        for (CacheId j : user_caches_[p.user])
            row[y_col(j, p.file)] = -1.0;
        basis_[m_ + k] = s;
        slack_of_row_[m_ + k] = s;
        status_[s] = Status::basic;
    }
    solves_since_refactor_ = 0;
}

void LpSolver::run_simplex()
{
    const std::size_t R = rows_.size();
    const std::size_t V = cols_.size();
    double cmax = 1.0;
    std::vector<double> cost(V), basic_cost(R);
    for (std::size_t c = 0; c < V; ++c) {
        cost[c] = cols_[c].cost;
        cmax = std::max(cmax, std::abs(cost[c]));
    }
    for (std::size_t r = 0; r < R; ++r)
        basic_cost[r] = cost[basis_[r]];
    if (opt_.parallel)
        kernels::parallel::reduced_costs(rows_, cost, basic_cost, reduced_);
    else
        kernels::serial::reduced_costs(rows_, cost, basic_cost, reduced_);

    const double dtol = 1e-9 * cmax;
    const std::size_t limit = opt_.max_iterations ? opt_.max_iterations : 50 * (R + V) + 1000;
    std::size_t degenerate = 0;
    last_pivots_ = 0;

    for (std::size_t it = 0;; ++it) {
        if (it >= limit)
            throw SolverError("LP: iteration limit exceeded (" + std::to_string(limit) + ")");
        const bool bland = degenerate > kBlandAfter;
        std::size_t e = V;
        double best = 0.0;
        for (std::size_t c = 0; c < V; ++c) {
            double score;
            if (status_[c] == Status::lower)
                score = reduced_[c];
            else if (status_[c] == Status::upper)
                score = -reduced_[c];
            else
                continue;
            if (score <= dtol)
                continue;
            if (bland) {
                e = c;
                break;
            }
            if (score > best) {
                best = score;
                e = c;
            }
        }
        if (e == V)
            return;

        const double dir = status_[e] == Status::lower ? 1.0 : -1.0;
        double ratio = cols_[e].ub - cols_[e].lb;
        std::size_t leave = R;
        double leave_a = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            const double a = dir * rows_[r][e];
            if (std::abs(a) <= kPivotTol)
                continue;
            const auto& bc = cols_[basis_[r]];
            double lim;
            if (a > 0.0) {
                lim = (beta_[r] - bc.lb) / a;
            } else {
                if (!std::isfinite(bc.ub))
                    continue;
                lim = (bc.ub - beta_[r]) / (-a);
            }
            lim = std::max(lim, 0.0);
            bool take = lim < ratio - kTieTol;
            if (!take && leave != R && std::abs(lim - ratio) <= kTieTol)
                take = bland ? basis_[r] < basis_[leave] : std::abs(a) > std::abs(leave_a);
            if (take) {
                ratio = lim;
                leave = r;
                leave_a = a;
            }
        }
        if (!std::isfinite(ratio))
            throw SolverError("LP: unbounded direction");

        if (ratio != 0.0)
            for (std::size_t r = 0; r < R; ++r)
                if (rows_[r][e] != 0.0)
                    beta_[r] -= ratio * dir * rows_[r][e];
        degenerate = ratio <= kTieTol ? degenerate + 1 : 0;

        if (leave == R) {
            status_[e] = dir > 0 ? Status::upper : Status::lower;
            continue;
        }
        const std::size_t out = basis_[leave];
        status_[out] = leave_a > 0.0 ? Status::lower : Status::upper;
        beta_[leave] = dir > 0 ? cols_[e].lb + ratio : cols_[e].ub - ratio;
        basis_[leave] = e;
        status_[e] = Status::basic;
        if (opt_.parallel)
            kernels::parallel::pivot(rows_, reduced_, leave, e);
        else
            kernels::serial::pivot(rows_, reduced_, leave, e);
        ++last_pivots_;
        ++total_pivots_;
    }
}

double LpSolver::residual() const
{
    std::vector<double> x(cols_.size());
    for (std::size_t c = 0; c < cols_.size(); ++c)
        x[c] = status_[c] == Status::lower ? cols_[c].lb
               : status_[c] == Status::upper ? cols_[c].ub
                                             : 0.0;
    for (std::size_t r = 0; r < basis_.size(); ++r)
        x[basis_[r]] = beta_[r];
    double worst = 0.0;
    for (std::size_t c = 0; c < cols_.size(); ++c)
        worst = std::max({worst, cols_[c].lb - x[c], x[c] - cols_[c].ub});
    for (CacheId j = 0; j < m_; ++j) {
        double s = x[j];
        for (const auto& per_file : y_cols_)
            s += x[per_file[j]];
        worst = std::max(worst, std::abs(s - capacity_));
    }
    for (const auto& p : pairs_) {
        double s = x[p.z_col] + x[p.z_col + 1];
        for (CacheId j : user_caches_[p.user])
            s -= x[y_col(j, p.file)];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

FractionalAllocation LpSolver::solve()
{
    if (solves_since_refactor_ >= opt_.refactor_interval) {
        reset_to_slack_basis();
        ++refactors_;
    }
    run_simplex();
    if (residual() > 1e-7) {
        reset_to_slack_basis();
        ++refactors_;
        run_simplex();
        if (residual() > 1e-7)
            throw SolverError("LP: numerical breakdown (residual above 1e-7 after refactor)");
    }
    ++solves_since_refactor_;
    return extract();
}

FractionalAllocation LpSolver::extract() const
{
    std::vector<double> x(cols_.size());
    for (std::size_t c = 0; c < cols_.size(); ++c)
        x[c] = status_[c] == Status::upper ? cols_[c].ub : cols_[c].lb;
    for (std::size_t r = 0; r < basis_.size(); ++r)
        x[basis_[r]] = beta_[r];

    FractionalAllocation out;
    out.num_caches = m_;
    out.capacity = capacity_;
    std::vector<std::size_t> order(file_ids_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return file_ids_[a] < file_ids_[b]; });
    for (auto l : order)
        out.files.push_back(file_ids_[l]);
    const std::size_t s = out.files.size();
    out.y.assign(static_cast<std::size_t>(m_) * s, 0.0);
    out.slack.assign(m_, 0.0);
    for (CacheId j = 0; j < m_; ++j) {
        double mass = 0.0;
        for (std::size_t q = 0; q < s; ++q) {
            const double v = std::clamp(x[y_col(j, order[q])], 0.0, 1.0);
            out.y_at(j, q) = v;
            mass += v;
        }
        out.slack[j] = std::clamp(capacity_ - mass, 0.0, static_cast<double>(capacity_));
    }
    for (const auto& p : pairs_) {
        const double v = std::clamp(x[p.z_col], 0.0, 1.0);
        out.z.push_back({p.user, file_ids_[p.file], v});
        out.objective += cols_[p.z_col].cost * v;
    }
    std::sort(out.z.begin(), out.z.end(), [](const Coefficient& a, const Coefficient& b) {
        return std::tie(a.user, a.file) < std::tie(b.user, b.file);
    });
    return out;
}

LpInstance LpSolver::instance() const
{
    LpInstance inst;
    inst.num_users = n_;
    inst.num_caches = m_;
    inst.capacity = capacity_;
    inst.user_caches = user_caches_;
    inst.files = file_ids_;
    std::sort(inst.files.begin(), inst.files.end());
    for (const auto& p : pairs_) {
        const auto l = std::lower_bound(inst.files.begin(), inst.files.end(), file_ids_[p.file]) -
                       inst.files.begin();
        inst.pairs.push_back({p.user, static_cast<std::size_t>(l), cols_[p.z_col].cost});
    }
    std::sort(inst.pairs.begin(), inst.pairs.end(), [&](const auto& a, const auto& b) {
        return std::tie(a.user, a.file_index) < std::tie(b.user, b.file_index);
    });
    return inst;
}

FractionalAllocation solve_lp(const LpInstance& instance, double tol)
{
    LpOptions opt;
    opt.tol = tol;
    LpSolver solver(instance, opt);
    return solver.solve();
}

}  // namespace leadcache
